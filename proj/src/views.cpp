#include "imog/views.hpp"

#include <functional>
#include <unordered_set>

namespace imog {

Model filter_view(const Model& model, const LevelSet& levels, const PerspectiveSet& perspectives)
{
    std::unordered_set<ElementId> kept;
    auto own_rule = [&](const Element& e) {
        return perspectives.contains(e.perspective()) && (!e.level || levels.contains(*e.level));
    };
    std::function<bool(const Element&, int)> keep = [&](const Element& e, int depth) -> bool {
        if (depth > 8)
            return false;
        if (!perspectives.contains(e.perspective()))
            return false;
        if (e.kind == ElementKind::Variant || e.kind == ElementKind::VariationPoint) {
            if (e.owner)
                if (const Element* owner = model.find(*e.owner))
                    return keep(*owner, depth + 1);
            return own_rule(e);
        }
        if (e.kind == ElementKind::Requirement || e.kind == ElementKind::Constraint) {
            if (const RequirementBody* body = model.requirement_of(e.id))
                if (const Element* target = model.find(body->target))
                    return keep(*target, depth + 1);
            return own_rule(e);
        }
        return own_rule(e);
    };

    Model out(model.name());
    out.set_span(model.span());
    for (const auto& e : model.elements()) {
        if (!keep(e, 0))
            continue;
        kept.insert(e.id);
        out.add_element(e);
    }
    auto endpoint_kept = [&](RelationKind kind, const ElementId& id) {
        if (kept.count(id))
            return true;
        // entries that live only in the store
        return kind == RelationKind::KbRef && !model.contains(id) && perspectives.contains(Perspective::Knowledge);
    };
    for (const auto& r : model.relations()) {
        if (!kept.count(r.source))
            continue;
        bool all = true;
        for (const auto& t : r.targets)
            all = all && endpoint_kept(r.kind, t);
        if (all)
            out.add_relation(r);
    }
    for (const auto& body : model.requirements())
        if (kept.count(body.owner))
            out.add_requirement(body);
    return out;
}

} // namespace imog
