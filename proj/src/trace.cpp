#include "imog/trace.hpp"

#include "imog/dsl.hpp"
#include "imog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <json.hpp>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace imog {

bool Interval::empty() const noexcept
{
    if (low > high)
        return true;
    return low == high && (low_open || high_open);
}

Interval admissible_interval(const AttributeBound& b) noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (b.comparator) {
    case Comparator::Le: return {-inf, b.low, true, false};
    case Comparator::Lt: return {-inf, b.low, true, true};
    case Comparator::Ge: return {b.low, inf, false, true};
    case Comparator::Gt: return {b.low, inf, true, true};
    case Comparator::Eq: return {b.low, b.low, false, false};
    case Comparator::InRange: return {b.low, b.high, false, false};
    }
    return {};
}

Interval intersect(const Interval& a, const Interval& b) noexcept
{
    Interval r;
    if (a.low > b.low) {
        r.low = a.low;
        r.low_open = a.low_open;
    } else if (b.low > a.low) {
        r.low = b.low;
        r.low_open = b.low_open;
    } else {
        r.low = a.low;
        r.low_open = a.low_open || b.low_open;
    }
    if (a.high < b.high) {
        r.high = a.high;
        r.high_open = a.high_open;
    } else if (b.high < a.high) {
        r.high = b.high;
        r.high_open = b.high_open;
    } else {
        r.high = a.high;
        r.high_open = a.high_open || b.high_open;
    }
    return r;
}

std::string to_string(const Origin& origin)
{
    switch (origin.kind) {
    case OriginKind::Direct: return "direct";
    case OriginKind::ViaAllocation: return "via " + origin.via.value_or(ElementId{}).str();
    case OriginKind::Inherited: return "inherited from " + origin.via.value_or(ElementId{}).str();
    }
    return {};
}

namespace {

const Element& require_element(const Model& model, const ElementId& id)
{
    const Element* e = model.find(id);
    if (!e)
        throw UnknownElement(id.str());
    return *e;
}

std::vector<ElementId> containers_of(const Model& model, const ElementId& block)
{
    std::vector<ElementId> out;
    for (const auto& r : model.relations())
        if (r.kind == RelationKind::Contains &&
            std::find(r.targets.begin(), r.targets.end(), block) != r.targets.end())
            out.push_back(r.source);
    return out;
}

/// Requirements on the block itself and on features allocated to it.
void own_requirements(const Model& model, const ElementId& block, std::vector<EffectiveRequirement>& out,
                      std::unordered_set<ElementId>& seen, std::optional<ElementId> inherited_from)
{
    auto add = [&](const RequirementBody& body, Origin origin) {
        if (!seen.insert(body.owner).second)
            return;
        if (inherited_from)
            origin = Origin{OriginKind::Inherited, inherited_from};
        out.push_back({body, std::move(origin)});
    };
    for (const auto& body : model.requirements())
        if (body.target == block)
            add(body, Origin{OriginKind::Direct, std::nullopt});
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::Allocate || std::find(r.targets.begin(), r.targets.end(), block) == r.targets.end())
            continue;
        for (const auto& body : model.requirements())
            if (body.target == r.source)
                add(body, Origin{OriginKind::ViaAllocation, r.source});
    }
}

std::string interval_text(const Interval& i)
{
    auto bound = [](double v) {
        if (std::isinf(v))
            return std::string(v < 0 ? "-inf" : "inf");
        return format_number(v);
    };
    return std::string(i.low_open ? "(" : "[") + bound(i.low) + ", " + bound(i.high) + (i.high_open ? ")" : "]");
}

struct Keyed {
    std::string attribute;
    std::string unit;
    std::vector<const EffectiveRequirement*> members;
};

/// Checked requirements of one block grouped by attribute and unit, in first
/// appearance order.
std::vector<Keyed> group_by_key(const std::vector<EffectiveRequirement>& reqs)
{
    std::vector<Keyed> out;
    for (const auto& r : reqs) {
        if (!r.body.bound)
            continue;
        const auto& b = *r.body.bound;
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Keyed& k) { return k.attribute == b.attribute && k.unit == b.unit; });
        if (it == out.end())
            out.push_back({b.attribute, b.unit, {&r}});
        else
            it->members.push_back(&r);
    }
    return out;
}

bool disjoint(const std::vector<const EffectiveRequirement*>& members)
{
    Interval acc;
    for (const auto* m : members)
        acc = intersect(acc, admissible_interval(*m->body.bound));
    return acc.empty();
}

std::vector<ElementId> sorted_blocks(const Model& model)
{
    std::vector<ElementId> out;
    for (const auto& e : model.elements())
        if (e.kind == ElementKind::Block)
            out.push_back(e.id);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<EffectiveRequirement> effective_requirements(const Model& model, const ElementId& block,
                                                         const TraceOptions& options)
{
    require_element(model, block);
    std::vector<EffectiveRequirement> out;
    std::unordered_set<ElementId> seen;
    own_requirements(model, block, out, seen, std::nullopt);
    if (!options.inherit_contains)
        return out;

    std::unordered_set<ElementId> visited{block};
    std::deque<ElementId> queue{block};
    while (!queue.empty()) {
        const ElementId current = queue.front();
        queue.pop_front();
        for (const auto& parent : containers_of(model, current)) {
            if (!visited.insert(parent).second)
                continue;
            own_requirements(model, parent, out, seen, parent);
            queue.push_back(parent);
        }
    }
    return out;
}

std::vector<ConflictGroup> find_conflicts(const Model& model, const TraceOptions& options)
{
    std::vector<ConflictGroup> out;
    for (const auto& block : sorted_blocks(model)) {
        const auto reqs = effective_requirements(model, block, options);
        for (const auto& key : group_by_key(reqs)) {
            if (key.members.size() < 2 || !disjoint(key.members))
                continue;
            std::vector<const EffectiveRequirement*> inherited;
            for (const auto* m : key.members)
                if (m->origin.kind == OriginKind::Inherited)
                    inherited.push_back(m);
            if (inherited.size() >= 2 && disjoint(inherited))
                continue;  // reported where it originates
            ConflictGroup g{block, key.attribute, key.unit, {}};
            for (const auto* m : key.members)
                g.requirements.push_back({m->body.owner, m->origin, admissible_interval(*m->body.bound)});
            out.push_back(std::move(g));
        }
    }
    std::sort(out.begin(), out.end(), [](const ConflictGroup& a, const ConflictGroup& b) {
        return std::tie(a.block, a.attribute, a.unit) < std::tie(b.block, b.attribute, b.unit);
    });
    return out;
}

std::vector<Diagnostic> conflict_diagnostics(const Model& model, const TraceOptions& options)
{
    std::vector<Diagnostic> out;
    for (const auto& g : find_conflicts(model, options)) {
        std::vector<ElementId> ids{g.block};
        std::string owners;
        for (const auto& m : g.requirements) {
            ids.push_back(m.owner);
            owners += (owners.empty() ? "" : ", ") + m.owner.str() + " " + interval_text(m.interval);
        }
        std::string attr = g.attribute + (g.unit.empty() ? "" : " [" + g.unit + "]");
        out.push_back(make_diagnostic("C-301",
                                      "no common value of " + attr + " on block '" + g.block.str() + "': " + owners,
                                      std::move(ids), require_element(model, g.block).span));
    }
    for (const auto& block : sorted_blocks(model)) {
        const auto reqs = effective_requirements(model, block, options);
        std::map<std::string, std::vector<const EffectiveRequirement*>> by_attribute;
        for (const auto& r : reqs)
            if (r.body.bound)
                by_attribute[r.body.bound->attribute].push_back(&r);
        for (const auto& [attribute, members] : by_attribute) {
            std::set<std::string> units;
            bool local = false;
            for (const auto* m : members) {
                units.insert(m->body.bound->unit);
                local = local || m->origin.kind != OriginKind::Inherited;
            }
            if (units.size() < 2 || !local)
                continue;
            std::vector<ElementId> ids{block};
            std::string list;
            for (const auto& u : units)
                list += (list.empty() ? "" : ", ") + (u.empty() ? std::string("(none)") : u);
            for (const auto* m : members)
                ids.push_back(m->body.owner);
            out.push_back(make_diagnostic("I-301",
                                          "unit mismatch on " + attribute + " of block '" + block.str() +
                                              "', not compared: " + list,
                                          std::move(ids), require_element(model, block).span));
        }
    }
    sort_diagnostics(out);
    return out;
}

std::set<ElementId> impact(const Model& model, const ElementId& id)
{
    require_element(model, id);
    std::unordered_map<ElementId, std::vector<ElementId>> next;
    auto edge = [&](const ElementId& a, const ElementId& b) { next[a].push_back(b); };
    for (const auto& r : model.relations()) {
        switch (r.kind) {
        case RelationKind::RefinesGoal:
        case RelationKind::Constrains:
            for (const auto& t : r.targets)
                edge(t, r.source);
            break;
        case RelationKind::Mandatory:
        case RelationKind::Optional:
        case RelationKind::OrGroup:
        case RelationKind::Alternative:
        case RelationKind::Allocate:
        case RelationKind::Contains:
        case RelationKind::KbRef:
            for (const auto& t : r.targets)
                edge(r.source, t);
            break;
        default:
            break;
        }
    }
    for (const auto& e : model.elements())
        if (e.owner)
            edge(*e.owner, e.id);

    std::set<ElementId> reached;
    std::deque<ElementId> queue{id};
    while (!queue.empty()) {
        const ElementId current = queue.front();
        queue.pop_front();
        auto it = next.find(current);
        if (it == next.end())
            continue;
        for (const auto& n : it->second)
            if (n != id && reached.insert(n).second)
                queue.push_back(n);
    }
    return reached;
}

TraceReport coverage_report(const Model& model, const TraceOptions& options)
{
    TraceReport report;
    for (const auto& e : model.elements()) {
        if (e.kind == ElementKind::Feature || e.kind == ElementKind::Function) {
            const bool allocated =
                std::any_of(model.relations().begin(), model.relations().end(), [&](const Relation& r) {
                    return r.kind == RelationKind::Allocate && r.source == e.id;
                });
            if (!allocated)
                report.unallocated.push_back(e.id);
        } else if (e.kind == ElementKind::Block) {
            if (effective_requirements(model, e.id, options).empty())
                report.unconstrained.push_back(e.id);
        } else if (e.kind == ElementKind::Goal) {
            report.goal_coverage[e.id];
        }
    }
    for (const auto& r : model.relations()) {
        if (r.kind != RelationKind::RefinesGoal)
            continue;
        for (const auto& t : r.targets)
            if (auto it = report.goal_coverage.find(t); it != report.goal_coverage.end())
                it->second.push_back(r.source);
    }
    for (auto& [goal, ids] : report.goal_coverage) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    std::sort(report.unallocated.begin(), report.unallocated.end());
    std::sort(report.unconstrained.begin(), report.unconstrained.end());
    report.conflict_groups = find_conflicts(model, options);
    return report;
}

namespace {

std::string joined(const std::vector<ElementId>& ids)
{
    std::string out;
    for (const auto& id : ids)
        out += " " + id.str();
    return out;
}

} // namespace

std::string format_conflicts_text(const std::vector<ConflictGroup>& groups)
{
    std::ostringstream out;
    for (const auto& g : groups) {
        out << g.block.str() << ' ' << g.attribute;
        if (!g.unit.empty())
            out << " [" << g.unit << ']';
        out << '\n';
        for (const auto& m : g.requirements)
            out << "  " << m.owner.str() << ' ' << interval_text(m.interval) << ' ' << to_string(m.origin) << '\n';
    }
    return out.str();
}

std::string format_report_text(const TraceReport& report)
{
    std::ostringstream out;
    out << "unallocated:" << joined(report.unallocated) << '\n';
    out << "unconstrained:" << joined(report.unconstrained) << '\n';
    out << "conflicts: " << report.conflict_groups.size() << '\n';
    out << format_conflicts_text(report.conflict_groups);
    out << "goal coverage:\n";
    for (const auto& [goal, ids] : report.goal_coverage)
        out << "  " << goal.str() << ':' << (ids.empty() ? " (none)" : joined(ids)) << '\n';
    return out.str();
}

std::string format_report_records(const Model& model, const TraceReport& report)
{
    using nlohmann::ordered_json;
    auto ids_json = [](const std::vector<ElementId>& ids) {
        ordered_json a = ordered_json::array();
        for (const auto& id : ids)
            a.push_back(id.str());
        return a;
    };
    std::string out;
    auto emit = [&](ordered_json j) { out += j.dump() + "\n"; };
    for (const auto& id : report.unallocated)
        emit({{"record", "unallocated"}, {"model", model.name()}, {"id", id.str()}});
    for (const auto& id : report.unconstrained)
        emit({{"record", "unconstrained"}, {"model", model.name()}, {"id", id.str()}});
    for (const auto& g : report.conflict_groups) {
        ordered_json members = ordered_json::array();
        for (const auto& m : g.requirements)
            members.push_back({{"owner", m.owner.str()}, {"origin", to_string(m.origin)},
                               {"interval", interval_text(m.interval)}});
        emit({{"record", "conflict"},
              {"model", model.name()},
              {"block", g.block.str()},
              {"attribute", g.attribute},
              {"unit", g.unit},
              {"requirements", members}});
    }
    for (const auto& [goal, ids] : report.goal_coverage)
        emit({{"record", "goal_coverage"}, {"model", model.name()}, {"goal", goal.str()}, {"covered_by", ids_json(ids)}});
    return out;
}

} // namespace imog
