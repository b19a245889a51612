#include "lexer.hpp"

#include <cctype>

namespace imog::detail {

namespace {

bool ident_start(char c)
{
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || c == '%';
}

bool ident_char(char c)
{
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '/' || c == '%';
}

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token t;
            t.line = line_;
            t.col = col_;
            if (at_end()) {
                t.kind = Tok::End;
                t.end_line = line_;
                t.end_col = col_;
                out.push_back(std::move(t));
                return out;
            }
            lex_one(t);
            out.push_back(std::move(t));
        }
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance()
    {
        const char c = src_[pos_++];
        last_line_ = line_;
        last_col_ = col_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void finish(Token& t)
    {
        t.end_line = last_line_;
        t.end_col = last_col_;
    }

    void skip_space_and_comments()
    {
        while (!at_end()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else {
                return;
            }
        }
    }

    void single(Token& t, Tok kind, int width)
    {
        t.kind = kind;
        for (int i = 0; i < width; ++i)
            t.text += advance();
        finish(t);
    }

    void lex_one(Token& t)
    {
        const char c = peek();
        switch (c) {
        case '{': return single(t, Tok::LBrace, 1);
        case '}': return single(t, Tok::RBrace, 1);
        case '[': return single(t, Tok::LBracket, 1);
        case ']': return single(t, Tok::RBracket, 1);
        case ':': return single(t, Tok::Colon, 1);
        case ',': return single(t, Tok::Comma, 1);
        case '"': return lex_string(t);
        case '<':
            if (peek(1) == '-' && peek(2) == '>')
                return single(t, Tok::BiArrow, 3);
            if (peek(1) == '=')
                return single(t, Tok::Le, 2);
            return single(t, Tok::Lt, 1);
        case '>':
            if (peek(1) == '=')
                return single(t, Tok::Ge, 2);
            return single(t, Tok::Gt, 1);
        case '=':
            if (peek(1) == '=')
                return single(t, Tok::EqEq, 2);
            break;
        case '.':
            if (peek(1) == '.')
                return single(t, Tok::DotDot, 2);
            break;
        case '-':
            if (peek(1) == '>')
                return single(t, Tok::Arrow, 2);
            if (digit(peek(1)))
                return lex_number(t);
            break;
        default:
            if (digit(c))
                return lex_number(t);
            if (ident_start(c)) {
                t.kind = Tok::Ident;
                while (!at_end() && ident_char(peek()) && !(peek() == '/' && peek(1) == '/'))
                    t.text += advance();
                finish(t);
                return;
            }
            break;
        }
        t.kind = Tok::Invalid;
        t.text = std::string("unexpected character '") + c + "'";
        advance();
        // keep multi-byte sequences together
        while (!at_end() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80)
            advance();
        finish(t);
    }

    void lex_number(Token& t)
    {
        t.kind = Tok::Number;
        if (peek() == '-')
            t.text += advance();
        while (digit(peek()))
            t.text += advance();
        if (peek() == '.' && digit(peek(1))) {
            t.text += advance();
            while (digit(peek()))
                t.text += advance();
        }
        finish(t);
    }

    void lex_string(Token& t)
    {
        advance();  // opening quote
        t.kind = Tok::String;
        while (true) {
            if (at_end() || peek() == '\n') {
                t.kind = Tok::Invalid;
                t.text = "unterminated string";
                finish(t);
                return;
            }
            const char c = advance();
            if (c == '"')
                break;
            if (c != '\\') {
                t.text += c;
                continue;
            }
            if (at_end()) {
                t.kind = Tok::Invalid;
                t.text = "unterminated string";
                finish(t);
                return;
            }
            const char e = advance();
            switch (e) {
            case 'n': t.text += '\n'; break;
            case 't': t.text += '\t'; break;
            case 'r': t.text += '\r'; break;
            case '"': t.text += '"'; break;
            case '\\': t.text += '\\'; break;
            default:
                t.kind = Tok::Invalid;
                t.text = std::string("unknown escape '\\") + e + "'";
                // consume the rest of the string so recovery starts after it
                while (!at_end() && peek() != '\n' && peek() != '"')
                    advance();
                if (peek() == '"')
                    advance();
                finish(t);
                return;
            }
        }
        finish(t);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int last_line_ = 1;
    int last_col_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string_view describe(Tok kind) noexcept
{
    switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::Number: return "number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'->'";
    case Tok::BiArrow: return "'<->'";
    case Tok::DotDot: return "'..'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::EqEq: return "'=='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::End: return "end of input";
    case Tok::Invalid: return "invalid token";
    }
    return "?";
}

} // namespace imog::detail
