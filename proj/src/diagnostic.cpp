#include "imog/diagnostic.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <tuple>
#include <utility>

namespace imog {

namespace {

struct CodeEntry {
    std::string_view code;
    Severity severity;
};

constexpr std::array<CodeEntry, 20> code_table = {{
    {"P-001", Severity::Error},   {"P-002", Severity::Error},   {"P-003", Severity::Error},
    {"P-004", Severity::Error},   {"R-101", Severity::Error},   {"R-102", Severity::Error},
    {"R-201", Severity::Error},   {"R-202", Severity::Error},   {"R-203", Severity::Error},
    {"W-201", Severity::Warning}, {"W-202", Severity::Warning}, {"W-203", Severity::Warning},
    {"W-204", Severity::Warning}, {"W-205", Severity::Warning}, {"I-201", Severity::Info},
    {"C-301", Severity::Error},   {"I-301", Severity::Info},    {"R-401", Severity::Error},
    {"I-401", Severity::Info},    {"W-401", Severity::Warning},
}};

} // namespace

std::string_view to_string(Severity s) noexcept
{
    switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
    }
    return "?";
}

Severity severity_of(std::string_view code) noexcept
{
    for (const auto& e : code_table)
        if (e.code == code)
            return e.severity;
    return Severity::Error;
}

bool is_registered_code(std::string_view code) noexcept
{
    return std::any_of(code_table.begin(), code_table.end(), [&](const CodeEntry& e) { return e.code == code; });
}

Diagnostic make_diagnostic(std::string code, std::string message, std::vector<ElementId> elements,
                           std::optional<SourceSpan> span)
{
    Diagnostic d;
    d.severity = severity_of(code);
    d.code = std::move(code);
    d.message = std::move(message);
    d.elements = std::move(elements);
    d.span = std::move(span);
    return d;
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics)
{
    auto key = [](const Diagnostic& d) {
        static const SourceSpan none{"", 0, 0, 0, 0};
        const SourceSpan& s = d.span ? *d.span : none;
        return std::tie(s.file, s.start_line, s.start_col, d.code, d.message, d.elements, s.end_line, s.end_col);
    };
    std::stable_sort(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
    diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
}

std::size_t count_errors(const std::vector<Diagnostic>& diagnostics) noexcept
{
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                   [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::size_t count_code(const std::vector<Diagnostic>& diagnostics, std::string_view code) noexcept
{
    return static_cast<std::size_t>(
        std::count_if(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

std::string format_text(const Diagnostic& d)
{
    std::string out = d.code;
    out += ' ';
    out += to_string(d.severity);
    out += ' ';
    if (d.span) {
        out += d.span->file.empty() ? "-" : d.span->file;
        out += ':' + std::to_string(d.span->start_line) + ':' + std::to_string(d.span->start_col);
    } else {
        out += "-:0:0";
    }
    out += ' ';
    out += d.message;
    if (!d.elements.empty()) {
        out += " [";
        for (std::size_t i = 0; i < d.elements.size(); ++i) {
            if (i)
                out += ' ';
            out += d.elements[i].str();
        }
        out += ']';
    }
    return out;
}

std::string format_record(const Diagnostic& d)
{
    nlohmann::ordered_json j;
    j["code"] = d.code;
    j["severity"] = to_string(d.severity);
    j["message"] = d.message;
    auto ids = nlohmann::ordered_json::array();
    for (const auto& id : d.elements)
        ids.push_back(id.str());
    j["elements"] = std::move(ids);
    if (d.span) {
        j["span"] = {{"file", d.span->file},
                     {"startLine", d.span->start_line},
                     {"startCol", d.span->start_col},
                     {"endLine", d.span->end_line},
                     {"endCol", d.span->end_col}};
    } else {
        j["span"] = nullptr;
    }
    return j.dump();
}

} // namespace imog
