#include "imog/feature_tree.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace imog {

std::optional<std::size_t> FeatureTree::index_of(const ElementId& id) const
{
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - ids.begin());
}

std::vector<std::size_t> FeatureTree::roots() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (parents[i].empty())
            out.push_back(i);
    return out;
}

FeatureTree build_feature_tree(const Model& model)
{
    FeatureTree tree;
    std::unordered_map<ElementId, std::size_t> index;
    for (const auto& e : model.elements()) {
        if (!is_feature_like(e.kind))
            continue;
        index.emplace(e.id, tree.ids.size());
        tree.ids.push_back(e.id);
        tree.is_variation_point.push_back(e.kind == ElementKind::VariationPoint);
    }
    tree.parents.resize(tree.size());
    tree.groups.resize(tree.size());

    auto node = [&](const ElementId& id) -> std::optional<std::size_t> {
        auto it = index.find(id);
        if (it == index.end())
            return std::nullopt;
        return it->second;
    };

    auto add_group = [&](std::size_t parent, GroupKind kind, const std::vector<ElementId>& targets, unsigned min,
                         unsigned max) {
        ChildGroup g;
        g.kind = kind;
        g.min = min;
        g.max = max;
        for (const auto& t : targets) {
            if (auto c = node(t)) {
                g.members.push_back(*c);
                tree.parents[*c].push_back(parent);
            }
        }
        if (!g.members.empty())
            tree.groups[parent].push_back(std::move(g));
    };

    auto listed_in_owner_orgroup = [&](const Element& vp) {
        return std::any_of(model.relations().begin(), model.relations().end(), [&](const Relation& r) {
            return r.kind == RelationKind::OrGroup && vp.owner && r.source == *vp.owner &&
                   std::find(r.targets.begin(), r.targets.end(), vp.id) != r.targets.end();
        });
    };

    for (const auto& r : model.relations()) {
        const auto src = node(r.source);
        if (!src)
            continue;
        switch (r.kind) {
        case RelationKind::Mandatory:
            add_group(*src, GroupKind::Mandatory, r.targets, 0, 0);
            break;
        case RelationKind::Optional:
            add_group(*src, GroupKind::Optional, r.targets, 0, 0);
            break;
        case RelationKind::OrGroup: {
            const Cardinality c = r.cardinality.value_or(Cardinality{1, static_cast<unsigned>(r.targets.size())});
            add_group(*src, GroupKind::Or, r.targets, c.min, c.max);
            break;
        }
        case RelationKind::Alternative: {
            const Element* vp = model.find(r.source);
            if (vp && vp->owner && !listed_in_owner_orgroup(*vp))
                if (auto owner = node(*vp->owner))
                    add_group(*owner, GroupKind::Mandatory, {vp->id}, 0, 0);
            add_group(*src, GroupKind::Alternative, r.targets, 1, 1);
            break;
        }
        default:
            break;
        }
    }
    return tree;
}

std::vector<std::vector<std::size_t>> find_cycles(const FeatureTree& tree)
{
    // strongly connected components over parent links (Tarjan)
    const std::size_t n = tree.size();
    std::vector<int> order(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> cycles;
    int counter = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        order[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t p : tree.parents[v]) {
            if (order[p] < 0) {
                visit(p);
                low[v] = std::min(low[v], low[p]);
            } else if (on_stack[p]) {
                low[v] = std::min(low[v], order[p]);
            }
        }
        if (low[v] != order[v])
            return;
        std::vector<std::size_t> component;
        std::size_t w = 0;
        do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(w);
        } while (w != v);
        const bool self_loop =
            std::find(tree.parents[v].begin(), tree.parents[v].end(), v) != tree.parents[v].end();
        if (component.size() > 1 || self_loop) {
            std::sort(component.begin(), component.end());
            cycles.push_back(std::move(component));
        }
    };

    for (std::size_t v = 0; v < n; ++v)
        if (order[v] < 0)
            visit(v);
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

} // namespace imog
