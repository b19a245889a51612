#pragma once

// The `.imog` textual format (imog-dsl v1): parser and canonical printer.

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imog {

inline constexpr std::string_view dsl_version = "imog-dsl v1";

struct ParseResult {
    /// Present iff no diagnostic has Error severity.
    std::optional<Model> model;
    /// Everything recovered from the input, errors or not.
    Model partial;
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept { return model.has_value(); }
};

/// Never throws on bad input: syntax errors become P-001..P-004 diagnostics
/// and parsing resumes at the next statement or section keyword.
ParseResult parse(std::string_view source, std::string_view file = "<input>");

/// Reads `path` and parses it. Throws IoFailure when the file is unreadable.
ParseResult parse_file(const std::string& path);

/// Canonical text: sections in fixed order, elements in declaration order,
/// 2-space indentation, one relation per line.
std::string print(const Model& model);

bool is_reserved_word(std::string_view word) noexcept;

/// Shortest decimal text without exponent that reads back to the same value.
std::string format_number(double value);

} // namespace imog
