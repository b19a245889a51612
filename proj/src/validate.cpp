#include "imog/validate.hpp"

#include "imog/feature_tree.hpp"

#include <algorithm>

namespace imog {

bool allowed_source(RelationKind rel, ElementKind kind) noexcept
{
    switch (rel) {
    case RelationKind::Mandatory:
    case RelationKind::Optional:
    case RelationKind::OrGroup:
    case RelationKind::Alternative:
    case RelationKind::Requires:
    case RelationKind::Excludes:
        return is_feature_like(kind);
    case RelationKind::RefinesGoal:
    case RelationKind::Allocate:
        return kind == ElementKind::Feature || kind == ElementKind::Function;
    case RelationKind::Constrains:
        return kind == ElementKind::Requirement || kind == ElementKind::Constraint;
    case RelationKind::KbRef:
        return kind == ElementKind::Block || kind == ElementKind::Variant;
    case RelationKind::Effect:
    case RelationKind::ChannelLink:
    case RelationKind::Contains:
        return kind == ElementKind::Block;
    case RelationKind::References:
        return true;
    }
    return false;
}

bool allowed_target(RelationKind rel, ElementKind kind) noexcept
{
    switch (rel) {
    case RelationKind::Mandatory:
    case RelationKind::Optional:
    case RelationKind::OrGroup:
    case RelationKind::Alternative:
    case RelationKind::Requires:
    case RelationKind::Excludes:
        return is_feature_like(kind);
    case RelationKind::RefinesGoal:
        return kind == ElementKind::Goal;
    case RelationKind::Constrains:
        return kind == ElementKind::Feature || kind == ElementKind::Function || kind == ElementKind::Block;
    case RelationKind::Allocate:
    case RelationKind::Effect:
    case RelationKind::ChannelLink:
    case RelationKind::Contains:
        return kind == ElementKind::Block;
    case RelationKind::KbRef:
        return kind == ElementKind::KnowledgeEntry;
    case RelationKind::References:
        return true;
    }
    return false;
}

namespace {

std::string expected_kinds(RelationKind rel, bool source)
{
    std::string out;
    for (int k = 0; k <= static_cast<int>(ElementKind::KnowledgeEntry); ++k) {
        const auto kind = static_cast<ElementKind>(k);
        const bool ok = source ? allowed_source(rel, kind) : allowed_target(rel, kind);
        if (!ok)
            continue;
        if (!out.empty())
            out += '/';
        out += to_string(kind);
    }
    return out;
}

} // namespace

std::vector<Diagnostic> resolve(const Model& model)
{
    std::vector<Diagnostic> out;
    for (const auto& r : model.relations()) {
        const std::string rel(to_string(r.kind));
        const Element* src = model.find(r.source);
        if (!src)
            out.push_back(make_diagnostic("R-101", rel + " source '" + r.source.str() + "' is not defined",
                                          {r.source}, r.span));
        else if (!allowed_source(r.kind, src->kind))
            out.push_back(make_diagnostic("R-102",
                                          rel + " source '" + r.source.str() + "' is a " +
                                              std::string(to_string(src->kind)) + "; expected " +
                                              expected_kinds(r.kind, true),
                                          {r.source}, r.span));
        for (const auto& t : r.targets) {
            const Element* tgt = model.find(t);
            if (!tgt) {
                // knowledge references may point into the store; checked there
                if (r.kind != RelationKind::KbRef)
                    out.push_back(
                        make_diagnostic("R-101", rel + " target '" + t.str() + "' is not defined", {t}, r.span));
            } else if (!allowed_target(r.kind, tgt->kind)) {
                out.push_back(make_diagnostic("R-102",
                                              rel + " target '" + t.str() + "' is a " +
                                                  std::string(to_string(tgt->kind)) + "; expected " +
                                                  expected_kinds(r.kind, false),
                                              {t}, r.span));
            }
        }
    }
    for (const auto& e : model.elements()) {
        if (!e.owner)
            continue;
        const Element* owner = model.find(*e.owner);
        if (!owner) {
            out.push_back(make_diagnostic("R-101", "owner '" + e.owner->str() + "' of '" + e.id.str() +
                                                       "' is not defined",
                                          {*e.owner}, e.span));
            continue;
        }
        const bool ok = e.kind == ElementKind::Variant
                            ? owner->kind == ElementKind::Block
                            : (owner->kind == ElementKind::Feature || owner->kind == ElementKind::Function);
        if (!ok)
            out.push_back(make_diagnostic("R-102", "'" + e.id.str() + "' cannot be attached to a " +
                                                       std::string(to_string(owner->kind)),
                                          {e.id, *e.owner}, e.span));
    }
    sort_diagnostics(out);
    return out;
}

std::vector<Diagnostic> validate(const Model& model, const ValidateOptions& options)
{
    std::vector<Diagnostic> out;
    const FeatureTree tree = build_feature_tree(model);
    auto span_of = [&](const ElementId& id) -> std::optional<SourceSpan> {
        const Element* e = model.find(id);
        return e ? e->span : std::nullopt;
    };

    // feature forest
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (tree.parents[i].size() < 2)
            continue;
        std::vector<ElementId> ids{tree.ids[i]};
        std::string names;
        for (std::size_t p : tree.parents[i]) {
            ids.push_back(tree.ids[p]);
            names += (names.empty() ? "" : ", ") + tree.ids[p].str();
        }
        out.push_back(make_diagnostic("R-201", "'" + tree.ids[i].str() + "' has several parents: " + names,
                                      std::move(ids), span_of(tree.ids[i])));
    }
    for (const auto& cycle : find_cycles(tree)) {
        std::vector<ElementId> ids;
        std::string names;
        for (std::size_t n : cycle) {
            ids.push_back(tree.ids[n]);
            names += (names.empty() ? "" : " ") + tree.ids[n].str();
        }
        out.push_back(make_diagnostic("R-201", "feature tree cycle through " + names, ids, span_of(ids.front())));
    }
    if (!options.partial_view) {
        const auto roots = tree.roots();
        if (roots.size() > 1) {
            std::vector<ElementId> ids;
            std::string names;
            for (std::size_t r : roots) {
                ids.push_back(tree.ids[r]);
                names += (names.empty() ? "" : ", ") + tree.ids[r].str();
            }
            out.push_back(make_diagnostic("R-202",
                                          std::to_string(roots.size()) + " root features: " + names,
                                          ids, span_of(ids[1])));
        }
    }

    for (const auto& r : model.relations()) {
        if (r.kind == RelationKind::OrGroup) {
            for (const auto& t : r.targets) {
                const Element* e = model.find(t);
                if (e && e->kind == ElementKind::VariationPoint)
                    out.push_back(make_diagnostic("W-201",
                                                  "variation point '" + t.str() + "' is a member of the or-group of '" +
                                                      r.source.str() + "'",
                                                  {t, r.source}, r.span));
            }
        }
        if (r.kind == RelationKind::Contains) {
            const Element* parent = model.find(r.source);
            const Element* child = model.find(r.target());
            if (parent && child && parent->level && child->level &&
                level_rank(*child->level) < level_rank(*parent->level))
                out.push_back(make_diagnostic("R-203",
                                              std::string(to_string(*child->level)) + " block '" + child->id.str() +
                                                  "' is contained in " + std::string(to_string(*parent->level)) +
                                                  " block '" + parent->id.str() + "'",
                                              {child->id, parent->id}, r.span));
        }
    }

    auto has_relation = [&](RelationKind kind, auto&& pred) {
        return std::any_of(model.relations().begin(), model.relations().end(),
                           [&](const Relation& r) { return r.kind == kind && pred(r); });
    };
    auto targets = [](const Relation& r, const ElementId& id) {
        return std::find(r.targets.begin(), r.targets.end(), id) != r.targets.end();
    };

    for (const auto& e : model.elements()) {
        switch (e.kind) {
        case ElementKind::Feature:
        case ElementKind::Function:
            if (!options.partial_view &&
                !has_relation(RelationKind::Allocate, [&](const Relation& r) { return r.source == e.id; }))
                out.push_back(make_diagnostic("W-202",
                                              std::string(e.kind == ElementKind::Feature ? "feature" : "function") +
                                                  " '" + e.id.str() + "' is not allocated to any block",
                                              {e.id}, e.span));
            break;
        case ElementKind::Block:
            if (!options.partial_view &&
                !has_relation(RelationKind::Allocate, [&](const Relation& r) { return targets(r, e.id); }) &&
                !has_relation(RelationKind::Contains, [&](const Relation& r) { return targets(r, e.id); }))
                out.push_back(make_diagnostic("W-203",
                                              "block '" + e.id.str() +
                                                  "' has no incoming allocation and no containing block",
                                              {e.id}, e.span));
            break;
        case ElementKind::Requirement:
        case ElementKind::Constraint: {
            const RequirementBody* body = model.requirement_of(e.id);
            if (!body || !body->bound)
                out.push_back(make_diagnostic("W-204",
                                              "'" + e.id.str() + "' has no attribute bound and is not checked for conflicts",
                                              {e.id}, e.span));
            break;
        }
        case ElementKind::Goal:
            if (!has_relation(RelationKind::RefinesGoal, [&](const Relation& r) { return targets(r, e.id); }))
                out.push_back(make_diagnostic("W-205", "goal '" + e.id.str() + "' is not referenced by any feature or function",
                                              {e.id}, e.span));
            break;
        default:
            break;
        }
    }

    for (auto p : all_perspectives) {
        const bool empty = std::none_of(model.elements().begin(), model.elements().end(),
                                        [&](const Element& e) { return e.perspective() == p; });
        if (empty)
            out.push_back(make_diagnostic("I-201", std::string(to_string(p)) + " perspective is empty", {},
                                          model.span()));
    }

    sort_diagnostics(out);
    return out;
}

} // namespace imog
