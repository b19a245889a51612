#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace imog::detail {

enum class Tok {
    Ident,
    String,
    Number,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Arrow,    // ->
    BiArrow,  // <->
    DotDot,   // ..
    Le,
    Ge,
    EqEq,
    Lt,
    Gt,
    End,
    Invalid,
};

struct Token {
    Tok kind = Tok::End;
    /// Identifier or number spelling, decoded string contents, or the reason
    /// an Invalid token was produced.
    std::string text;
    int line = 1;
    int col = 1;
    int end_line = 1;
    int end_col = 1;
};

/// Always ends with a Tok::End token.
std::vector<Token> tokenize(std::string_view source);

std::string_view describe(Tok kind) noexcept;

} // namespace imog::detail
