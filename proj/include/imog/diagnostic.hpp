#pragma once

#include "imog/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imog {

enum class Severity : std::uint8_t { Error, Warning, Info };

std::string_view to_string(Severity s) noexcept;

/// A finding. The code alone determines the severity; see severity_of().
struct Diagnostic {
    std::string code;
    Severity severity = Severity::Error;
    std::string message;
    std::vector<ElementId> elements;
    std::optional<SourceSpan> span;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Severity for a registered code. Unregistered codes are an Error.
Severity severity_of(std::string_view code) noexcept;
bool is_registered_code(std::string_view code) noexcept;

Diagnostic make_diagnostic(std::string code, std::string message, std::vector<ElementId> elements = {},
                           std::optional<SourceSpan> span = std::nullopt);

/// Sort by (file, span, code), then message and ids so the order is total.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

std::size_t count_errors(const std::vector<Diagnostic>& diagnostics) noexcept;
std::size_t count_code(const std::vector<Diagnostic>& diagnostics, std::string_view code) noexcept;

/// `CODE severity file:line:col message [ids]`
std::string format_text(const Diagnostic& d);
/// One JSON object per line with code, severity, message, elements, span.
std::string format_record(const Diagnostic& d);

} // namespace imog
