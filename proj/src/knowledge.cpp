#include "imog/knowledge.hpp"

#include "imog/dsl.hpp"
#include "imog/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace imog {

Clock Clock::from_environment()
{
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        long long seconds = 0;
        const std::string_view text(epoch);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seconds);
        if (ec == std::errc{} && ptr == text.data() + text.size())
            return {std::chrono::system_clock::time_point(std::chrono::seconds(seconds))};
    }
    return {std::chrono::system_clock::now()};
}

namespace {

std::tm utc(std::chrono::system_clock::time_point t)
{
    const std::time_t raw = std::chrono::system_clock::to_time_t(t);
    std::tm out{};
    gmtime_r(&raw, &out);
    return out;
}

} // namespace

std::string Clock::timestamp() const
{
    const std::tm t = utc(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &t);
    return buf;
}

int Clock::year() const { return utc(now).tm_year + 1900; }

ExtractResult extract(const Model& model, const std::vector<ElementId>& ids, const Clock& clock)
{
    ExtractResult result;
    for (const auto& id : ids) {
        const Element* e = model.find(id);
        if (!e)
            throw UnknownElement(id.str());
        const bool requirement = e->kind == ElementKind::Requirement || e->kind == ElementKind::Constraint;
        if (e->kind != ElementKind::Block && e->kind != ElementKind::Variant && !requirement)
            throw KindNotExtractable(id.str());

        KnowledgeEntry entry;
        entry.id = e->id;
        entry.name = e->name;
        std::string kind(to_string(e->kind));
        std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
        // store types are single tokens: "energy storage" becomes energy_storage
        std::string type = text_property(e->properties, "stereotype").value_or(kind);
        for (char& c : type)
            c = std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : '_';
        entry.type = type.empty() ? kind : type;
        for (const auto& p : e->properties)
            if (p.key != "year" && p.key != "stereotype")
                entry.properties.push_back(p);
        if (requirement) {
            if (const RequirementBody* body = model.requirement_of(e->id); body && body->bound) {
                const auto& b = *body->bound;
                entry.properties.push_back({"attribute", b.attribute});
                entry.properties.push_back({"comparator", std::string(to_string(b.comparator))});
                entry.properties.push_back({"bound", Number{b.low, b.unit}});
                if (b.comparator == Comparator::InRange)
                    entry.properties.push_back({"bound_high", Number{b.high, b.unit}});
            }
        }
        if (auto year = number_property(e->properties, "year")) {
            entry.year_available = static_cast<int>(*year);
        } else {
            entry.year_available = clock.year();
            result.diagnostics.push_back(make_diagnostic(
                "W-401", "'" + id.str() + "' has no year; using " + std::to_string(entry.year_available), {id},
                e->span));
        }
        entry.provenance = {model.name(), clock.timestamp()};
        result.entries.push_back(std::move(entry));
    }
    return result;
}

namespace {

std::string quote_text(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += c;
        }
    }
    return out + '"';
}

std::string value_text(const PropertyValue& v)
{
    if (const auto* n = std::get_if<Number>(&v))
        return format_number(n->value) + n->unit;
    if (const auto* s = std::get_if<std::string>(&v))
        return quote_text(*s);
    return std::get<bool>(v) ? "true" : "false";
}

bool token_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/' || c == '%';
}

class LineReader {
public:
    LineReader(std::string_view line, const std::string& path, std::size_t line_no)
        : line_(line), path_(path), line_no_(line_no)
    {
    }

    [[noreturn]] void fail(const std::string& what) const { throw StoreCorrupt(path_, line_no_, what); }

    void skip_space()
    {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r'))
            ++pos_;
    }
    bool done()
    {
        skip_space();
        return pos_ >= line_.size();
    }

    std::string word()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != '=')
            ++pos_;
        return std::string(line_.substr(start, pos_ - start));
    }

    void expect(char c)
    {
        if (pos_ >= line_.size() || line_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool at(char c) const { return pos_ < line_.size() && line_[pos_] == c; }

    std::string string_value()
    {
        expect('"');
        std::string out;
        while (true) {
            if (pos_ >= line_.size())
                fail("unterminated string");
            const char c = line_[pos_++];
            if (c == '"')
                return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= line_.size())
                fail("unterminated string");
            switch (const char e = line_[pos_++]) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            default: fail(std::string("unknown escape '\\") + e + "'");
            }
        }
    }

    std::string bare_value()
    {
        const std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' && line_[pos_] != '\r')
            ++pos_;
        return std::string(line_.substr(start, pos_ - start));
    }

private:
    std::string_view line_;
    const std::string& path_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

PropertyValue parse_value(LineReader& in, const std::string& key)
{
    if (in.at('"'))
        return in.string_value();
    const std::string text = in.bare_value();
    if (text == "true")
        return true;
    if (text == "false")
        return false;
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr == text.data())
        in.fail("bad value for '" + key + "'");
    std::string unit(ptr, text.data() + text.size());
    if (!std::all_of(unit.begin(), unit.end(), token_char))
        in.fail("bad unit for '" + key + "'");
    return Number{value, unit};
}

} // namespace

std::string format_entry(const KnowledgeEntry& e)
{
    std::string out = "entry " + e.id.str() + " name=" + quote_text(e.name) + " type=" + e.type +
                      " year=" + std::to_string(e.year_available);
    for (const auto& p : e.properties)
        out += " prop." + p.key + "=" + value_text(p.value);
    out += " provenance=" + quote_text(e.provenance.model + "@" + e.provenance.timestamp);
    return out;
}

KnowledgeEntry parse_entry(std::string_view line, const std::string& path, std::size_t line_no)
{
    LineReader in(line, path, line_no);
    if (in.word() != "entry")
        in.fail("expected 'entry'");
    KnowledgeEntry e;
    const std::string id = in.word();
    if (!is_valid_id(id))
        in.fail("bad id '" + id + "'");
    e.id = ElementId(id);
    bool has_name = false, has_type = false, has_year = false, has_provenance = false;
    while (!in.done()) {
        const std::string key = in.word();
        in.expect('=');
        if (key == "name") {
            e.name = in.string_value();
            has_name = true;
        } else if (key == "type") {
            e.type = in.bare_value();
            if (e.type.empty() || !std::all_of(e.type.begin(), e.type.end(), token_char))
                in.fail("bad type");
            has_type = true;
        } else if (key == "year") {
            const std::string text = in.bare_value();
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), e.year_available);
            if (ec != std::errc{} || ptr != text.data() + text.size())
                in.fail("bad year '" + text + "'");
            if (e.year_available < earliest_year)
                in.fail("year before " + std::to_string(earliest_year));
            has_year = true;
        } else if (key == "provenance") {
            const std::string text = in.string_value();
            const auto at = text.rfind('@');
            if (at == std::string::npos)
                in.fail("provenance without '@'");
            e.provenance = {text.substr(0, at), text.substr(at + 1)};
            has_provenance = true;
        } else if (key.rfind("prop.", 0) == 0 && key.size() > 5) {
            const std::string name = key.substr(5);
            if (std::any_of(e.properties.begin(), e.properties.end(), [&](const Property& p) { return p.key == name; }))
                in.fail("duplicate property '" + name + "'");
            e.properties.push_back({name, parse_value(in, name)});
        } else {
            in.fail("unknown field '" + key + "'");
        }
    }
    if (!has_name || !has_type || !has_year || !has_provenance)
        in.fail("entry needs name, type, year and provenance");
    return e;
}

std::vector<KnowledgeEntry> parse_store(std::string_view text, const std::string& path)
{
    std::vector<KnowledgeEntry> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#')
            continue;
        KnowledgeEntry e = parse_entry(line, path, line_no);
        if (std::any_of(out.begin(), out.end(), [&](const KnowledgeEntry& x) { return x.id == e.id; }))
            throw StoreCorrupt(path, line_no, "duplicate id '" + e.id.str() + "'");
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::string format_store(std::vector<KnowledgeEntry> entries)
{
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::string out;
    for (const auto& e : entries)
        out += format_entry(e) + "\n";
    return out;
}

std::vector<KnowledgeEntry> load(const std::string& path)
{
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        return {};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad())
        throw IoFailure("cannot read " + path);
    return parse_store(text.str(), path);
}

std::size_t save(const std::string& path, const std::vector<KnowledgeEntry>& entries)
{
    std::map<ElementId, KnowledgeEntry> merged;
    for (auto& e : load(path))
        merged[e.id] = std::move(e);
    for (const auto& e : entries) {
        if (e.year_available < earliest_year)
            throw Error("entry '" + e.id.str() + "' has year before " + std::to_string(earliest_year));
        merged[e.id] = e;
    }
    std::vector<KnowledgeEntry> all;
    for (auto& [id, e] : merged)
        all.push_back(std::move(e));

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoFailure("cannot write " + tmp);
        out << format_store(all);
        out.flush();
        if (!out)
            throw IoFailure("cannot write " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoFailure("cannot replace " + path);
    }
    return all.size();
}

std::vector<KnowledgeEntry> query(std::span<const KnowledgeEntry> entries, const KnowledgeQuery& filter)
{
    std::vector<KnowledgeEntry> out;
    for (const auto& e : entries) {
        if (filter.type && e.type != *filter.type)
            continue;
        if (filter.max_year && e.year_available > *filter.max_year)
            continue;
        if (filter.property_key && !find_property(e.properties, *filter.property_key))
            continue;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::vector<KnowledgeEntry> inline_entries(const Model& model)
{
    std::vector<KnowledgeEntry> out;
    for (const auto& e : model.elements()) {
        if (e.kind != ElementKind::KnowledgeEntry)
            continue;
        KnowledgeEntry k;
        k.id = e.id;
        k.name = e.name;
        const KnowledgeInfo info = e.knowledge.value_or(KnowledgeInfo{"unknown", 0});
        k.type = info.type;
        k.year_available = info.year;
        k.properties = e.properties;
        k.provenance = {model.name(), ""};
        out.push_back(std::move(k));
    }
    return out;
}

std::optional<int> target_year(const Model& model)
{
    for (const auto& e : model.elements())
        if (e.perspective() == Perspective::Strategy)
            if (auto y = number_property(e.properties, "target_year"))
                return static_cast<int>(*y);
    return std::nullopt;
}

std::vector<Diagnostic> check_kbrefs(const Model& model, std::span<const KnowledgeEntry> store)
{
    std::vector<Diagnostic> out;
    const auto local = inline_entries(model);
    const auto target = target_year(model);
    auto find_in = [](auto&& range, const ElementId& id) -> const KnowledgeEntry* {
        for (const auto& e : range)
            if (e.id == id)
                return &e;
        return nullptr;
    };
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::KbRef)
            continue;
        for (const auto& t : r.targets) {
            const KnowledgeEntry* entry = find_in(local, t);
            if (!entry)
                entry = find_in(store, t);
            if (!entry) {
                if (!model.contains(t))
                    out.push_back(make_diagnostic("R-401",
                                                  "knowledge reference '" + t.str() + "' of '" + r.source.str() +
                                                      "' is neither in the store nor in the model",
                                                  {r.source, t}, r.span));
                continue;
            }
            if (target && entry->year_available > *target)
                out.push_back(make_diagnostic("I-401",
                                              "'" + t.str() + "' is expected in " +
                                                  std::to_string(entry->year_available) + ", after the target year " +
                                                  std::to_string(*target),
                                              {r.source, t}, r.span));
        }
    }
    sort_diagnostics(out);
    return out;
}

} // namespace imog
