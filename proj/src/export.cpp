#include "imog/views.hpp"

#include "imog/dsl.hpp"
#include "imog/errors.hpp"
#include "imog/process.hpp"
#include "imog/trace.hpp"
#include "imog/validate.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace imog {

namespace {

std::string dot_string(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': break;
        default: out += c;
        }
    }
    return out + '"';
}

std::string node_style(ElementKind kind)
{
    switch (kind) {
    case ElementKind::Goal: return "shape=ellipse";
    case ElementKind::Stakeholder: return "shape=ellipse, style=dashed";
    case ElementKind::StrategyNote: return "shape=note";
    case ElementKind::Feature: return "shape=box, style=rounded";
    case ElementKind::Function: return "shape=box, style=\"rounded,dashed\"";
    case ElementKind::VariationPoint: return "shape=diamond";
    case ElementKind::Requirement:
    case ElementKind::Constraint: return "shape=note";
    case ElementKind::Block: return "shape=box";
    case ElementKind::Variant: return "shape=box, style=dashed";
    case ElementKind::Channel:
    case ElementKind::Effect: return "shape=plaintext";
    case ElementKind::KnowledgeEntry: return "shape=cylinder";
    }
    return "shape=box";
}

} // namespace

std::string export_graph(const Model& model, const GraphOptions& options)
{
    std::ostringstream out;
    out << "digraph " << dot_string(model.name()) << " {\n";
    out << "  rankdir=" << dot_string(options.rankdir) << ";\n";
    for (const auto& e : model.elements()) {
        std::string label = e.id.str() + "\n" + e.name;
        if (e.kind == ElementKind::Variant)
            label = "<<Variant>>\n" + label;
        else if (e.kind == ElementKind::StrategyNote)
            label = e.id.str() + "\n" + e.description;
        out << "  " << dot_string(e.id.str()) << " [label=" << dot_string(label) << ", " << node_style(e.kind)
            << "];\n";
    }
    if (options.ownership_edges)
        for (const auto& e : model.elements())
            if (e.owner && model.contains(*e.owner))
                out << "  " << dot_string(e.owner->str()) << " -> " << dot_string(e.id.str())
                    << " [style=dashed, arrowhead=none];\n";
    for (const auto& r : model.relations()) {
        for (const auto& t : r.targets) {
            out << "  " << dot_string(r.source.str()) << " -> " << dot_string(t.str()) << " [";
            switch (r.kind) {
            case RelationKind::Effect:
                out << "label=" << dot_string(r.label) << ", color=purple";
                break;
            case RelationKind::ChannelLink:
                out << "label=" << dot_string(r.label) << ", dir=both";
                break;
            case RelationKind::OrGroup:
                out << "label=" << dot_string(r.cardinality ? "or [" + std::to_string(r.cardinality->min) + ".." +
                                                                  std::to_string(r.cardinality->max) + "]"
                                                            : std::string("or"));
                break;
            case RelationKind::Optional:
                out << "label=\"optional\", arrowhead=odot";
                break;
            case RelationKind::Mandatory:
                out << "label=\"mandatory\", arrowhead=dot";
                break;
            case RelationKind::Constrains:
            case RelationKind::KbRef:
            case RelationKind::References:
                out << "label=" << dot_string("<<" + std::string(to_string(r.kind)) + ">>") << ", style=dotted";
                break;
            default:
                out << "label=" << dot_string("<<" + std::string(to_string(r.kind)) + ">>");
                break;
            }
            out << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

namespace {

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\n\r") == std::string::npos)
        return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted)
        throw Error("requirements table: unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_double(const std::string& text)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error("requirements table: bad number '" + text + "'");
    return v;
}

} // namespace

std::string export_requirements_table(const Model& model)
{
    std::vector<const RequirementBody*> bodies;
    for (const auto& b : model.requirements())
        bodies.push_back(&b);
    std::sort(bodies.begin(), bodies.end(), [](const auto* a, const auto* b) { return a->owner < b->owner; });

    std::string out(requirements_table_header);
    out += '\n';
    for (const auto* body : bodies) {
        const Element* owner = model.find(body->owner);
        const Element* target = model.find(body->target);
        std::vector<std::string> cells{body->owner.str(), owner ? owner->name : "", body->target.str(),
                                       target ? std::string(to_string(target->perspective())) : ""};
        if (const auto& b = body->bound) {
            cells.push_back(b->attribute);
            cells.push_back(std::string(to_string(b->comparator)));
            cells.push_back(b->comparator == Comparator::InRange ? format_number(b->low) + ".." + format_number(b->high)
                                                                 : format_number(b->low));
            cells.push_back(b->unit);
        } else {
            cells.insert(cells.end(), 4, "");
        }
        cells.push_back(body->rationale.value_or(""));
        for (std::size_t i = 0; i < cells.size(); ++i)
            out += (i ? "," : "") + csv_field(cells[i]);
        out += '\n';
    }
    return out;
}

std::vector<RequirementRow> parse_requirements_table(std::string_view text)
{
    const auto rows = parse_csv(text);
    if (rows.empty())
        throw Error("requirements table: missing header");
    std::string header;
    for (std::size_t i = 0; i < rows[0].size(); ++i)
        header += (i ? "," : "") + rows[0][i];
    if (header != requirements_table_header)
        throw Error("requirements table: unexpected header");
    std::vector<RequirementRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        if (cells.size() != 9)
            throw Error("requirements table: row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                        " fields");
        RequirementRow row{cells[0], cells[1], cells[2], cells[3], std::nullopt, cells[8]};
        if (!cells[4].empty()) {
            AttributeBound b;
            b.attribute = cells[4];
            const auto cmp = parse_comparator(cells[5]);
            if (!cmp)
                throw Error("requirements table: bad comparator '" + cells[5] + "'");
            b.comparator = *cmp;
            if (b.comparator == Comparator::InRange) {
                const auto dots = cells[6].find("..");
                if (dots == std::string::npos)
                    throw Error("requirements table: bad range '" + cells[6] + "'");
                b.low = parse_double(cells[6].substr(0, dots));
                b.high = parse_double(cells[6].substr(dots + 2));
            } else {
                b.low = b.high = parse_double(cells[6]);
            }
            b.unit = cells[7];
            row.bound = b;
        }
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

std::string role_list(const std::vector<Role>& roles)
{
    std::string out;
    for (Role r : roles)
        out += (out.empty() ? "" : ", ") + std::string(to_string(r));
    return out.empty() ? "-" : out;
}

std::size_t count_kind(const Model& model, std::initializer_list<ElementKind> kinds)
{
    return std::count_if(model.elements().begin(), model.elements().end(), [&](const Element& e) {
        return std::find(kinds.begin(), kinds.end(), e.kind) != kinds.end();
    });
}

} // namespace

std::string roadmap_scaffold(const Model& model, std::span<const KnowledgeEntry> store)
{
    const TraceReport report = coverage_report(model);
    const auto validation = validate(model);
    const std::size_t unbounded = count_code(validation, "W-204");

    std::map<Perspective, std::size_t> per_perspective;
    for (const auto& e : model.elements())
        ++per_perspective[e.perspective()];
    const bool any = !model.elements().empty();

    std::ostringstream out;
    out << "# Roadmap: " << model.name() << "\n";
    int number = 0;
    for (ProcessStep step : all_steps) {
        const StepInfo info = step_info(step);
        const std::size_t count = info.artifact.perspective ? per_perspective[*info.artifact.perspective] : 0;
        const bool started = info.artifact.is_roadmap_document() ? any : count > 0;

        out << "\n## " << ++number << ". " << to_string(step) << "\n\n";
        out << "Roles: " << role_list(info.roles) << "\n";
        out << "In-house roles: " << role_list(info.in_house_roles()) << "\n";
        out << "Leader: " << (info.leader ? std::string(to_string(*info.leader)) : std::string("-")) << "\n";
        out << "Artifact: " << artifact_name(info.artifact) << "\n";
        out << "Status: " << (started ? "drafted" : "not started") << "\n";

        switch (step) {
        case ProcessStep::InnovationIdentification:
            out << "Elements: " << count << "\n";
            for (const auto& e : model.elements()) {
                if (e.perspective() != Perspective::Strategy)
                    continue;
                const std::string text = e.kind == ElementKind::StrategyNote ? e.description : e.name;
                out << "- " << to_string(e.kind) << " " << e.id.str() << ": " << text << "\n";
            }
            break;
        case ProcessStep::FeatureFunctionIdentification:
            out << "Elements: " << count << "\n";
            out << "Features: " << count_kind(model, {ElementKind::Feature}) << "\n";
            out << "Functions: " << count_kind(model, {ElementKind::Function}) << "\n";
            out << "Variation points: " << count_kind(model, {ElementKind::VariationPoint}) << "\n";
            out << "Open allocations (W-202): " << report.unallocated.size() << "\n";
            break;
        case ProcessStep::RequirementsElicitation:
            out << "Elements: " << count << "\n";
            out << "Without attribute bound (W-204): " << unbounded << "\n";
            out << "Conflicts (C-301): " << report.conflict_groups.size() << "\n";
            break;
        case ProcessStep::SolutionSpaceExploration:
            out << "Elements: " << count << "\n";
            out << "Blocks: " << count_kind(model, {ElementKind::Block}) << "\n";
            out << "Variants: " << count_kind(model, {ElementKind::Variant}) << "\n";
            out << "Blocks without requirements: " << report.unconstrained.size() << "\n";
            out << "Conflicts (C-301): " << report.conflict_groups.size() << "\n";
            break;
        case ProcessStep::InsightExtraction:
            out << "Elements: " << count << "\n";
            out << "Stored entries: " << store.size() << "\n";
            break;
        case ProcessStep::RoadmapWriting: {
            std::vector<KnowledgeEntry> timeline = inline_entries(model);
            for (const auto& e : store)
                if (std::none_of(timeline.begin(), timeline.end(), [&](const auto& t) { return t.id == e.id; }))
                    timeline.push_back(e);
            std::sort(timeline.begin(), timeline.end(), [](const auto& a, const auto& b) {
                return std::tie(a.year_available, a.id) < std::tie(b.year_available, b.id);
            });
            if (auto year = target_year(model))
                out << "Target year: " << *year << "\n";
            out << "\n### Timeline\n\n";
            out << "| Year | Id | Name | Type |\n";
            out << "|------|----|------|------|\n";
            for (const auto& e : timeline)
                out << "| " << e.year_available << " | " << e.id.str() << " | " << e.name << " | " << e.type
                    << " |\n";
            break;
        }
        case ProcessStep::MaintainAndUpdate:
            out << "Open warnings: "
                << std::count_if(validation.begin(), validation.end(),
                                 [](const Diagnostic& d) { return d.severity == Severity::Warning; })
                << "\n";
            break;
        }
    }
    return out.str();
}

} // namespace imog
