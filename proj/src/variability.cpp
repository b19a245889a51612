#include "imog/variability.hpp"

#include "imog/errors.hpp"
#include "imog/feature_tree.hpp"

#include <algorithm>
#include <json.hpp>
#include <limits>

namespace imog {

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
    return a > saturated - b ? saturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return a > saturated / b ? saturated : a * b;
}

// -1 open, 0 out, 1 in
using Assignment = std::vector<signed char>;

struct Literal {
    std::size_t var;
    bool positive;
};

struct Clause {
    std::vector<Literal> lits;
    const char* rule;
};

/// parent selected => min <= |selected members| <= max
struct Card {
    std::size_t parent;
    std::vector<std::size_t> members;
    unsigned min;
    unsigned max;
    const char* rule;
};

class Problem {
public:
    explicit Problem(const Model& model) : tree_(build_feature_tree(model))
    {
        const std::size_t n = tree_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (tree_.parents[i].size() > 1)
                throw InvalidFeatureModel("'" + tree_.ids[i].str() + "' has several parents");
        if (!find_cycles(tree_).empty())
            throw InvalidFeatureModel("the feature relations contain a cycle");
        const auto roots = tree_.roots();
        if (n > 0 && roots.size() != 1)
            throw InvalidFeatureModel(std::to_string(roots.size()) + " root features");
        if (n > 0)
            root_ = roots.front();

        if (root_)
            clauses_.push_back({{{*root_, true}}, "root"});
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t p : tree_.parents[c])
                clauses_.push_back({{{c, false}, {p, true}}, "parent"});
        for (std::size_t p = 0; p < n; ++p) {
            for (const auto& g : tree_.groups[p]) {
                switch (g.kind) {
                case GroupKind::Mandatory:
                    for (std::size_t c : g.members)
                        clauses_.push_back({{{p, false}, {c, true}}, "mandatory"});
                    break;
                case GroupKind::Optional:
                    break;
                case GroupKind::Or:
                    cards_.push_back({p, g.members, g.min, g.max, "orgroup"});
                    break;
                case GroupKind::Alternative:
                    cards_.push_back({p, g.members, 1, 1, "alternative"});
                    break;
                }
            }
        }
        std::vector<bool> cross(n, false);
        for (const auto& r : model.relations()) {
            if (r.kind != RelationKind::Requires && r.kind != RelationKind::Excludes)
                continue;
            const auto a = tree_.index_of(r.source);
            const auto b = tree_.index_of(r.target());
            if (!a || !b)
                continue;
            const bool is_requires = r.kind == RelationKind::Requires;
            clauses_.push_back({{{*a, false}, {*b, is_requires}}, is_requires ? "requires" : "excludes"});
            cross[*a] = cross[*b] = true;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (cross[i])
                cross_vars_.push_back(i);

        for (std::size_t i = 0; i < n; ++i)
            if (!tree_.is_variation_point[i])
                configurable_.push_back(i);
        std::sort(configurable_.begin(), configurable_.end(),
                  [&](std::size_t a, std::size_t b) { return tree_.ids[a] < tree_.ids[b]; });
    }

    std::size_t size() const noexcept { return tree_.size(); }
    const FeatureTree& tree() const noexcept { return tree_; }
    /// Features and functions, sorted by id.
    const std::vector<std::size_t>& configurable() const noexcept { return configurable_; }

    void check_budget(std::size_t budget) const
    {
        if (cross_vars_.empty() || configurable_.size() <= budget)
            return;
        Assignment a(size(), -1);
        if (propagate_units(a))
            return;  // unsatisfiable, decided without search
        const bool decided =
            std::all_of(cross_vars_.begin(), cross_vars_.end(), [&](std::size_t v) { return a[v] >= 0; });
        if (!decided)
            throw BudgetExceeded(budget, configurable_.size());
    }

    /// Unit propagation to a fixpoint. Returns the violated rule, if any.
    std::optional<Conflict> propagate_units(Assignment& a) const
    {
        bool changed = true;
        auto set = [&](std::size_t v, bool value) {
            a[v] = value ? 1 : 0;
            changed = true;
        };
        while (changed) {
            changed = false;
            for (const auto& c : clauses_) {
                std::optional<Literal> open;
                std::size_t open_count = 0;
                bool satisfied = false;
                for (const auto& l : c.lits) {
                    if (a[l.var] < 0) {
                        open = l;
                        ++open_count;
                    } else if ((a[l.var] == 1) == l.positive) {
                        satisfied = true;
                        break;
                    }
                }
                if (satisfied)
                    continue;
                if (open_count == 0)
                    return conflict(c);
                if (open_count == 1)
                    set(open->var, open->positive);
            }
            for (const auto& c : cards_) {
                unsigned in = 0, free = 0;
                for (std::size_t m : c.members) {
                    if (a[m] == 1)
                        ++in;
                    else if (a[m] < 0)
                        ++free;
                }
                const bool impossible = in > c.max || in + free < c.min;
                if (a[c.parent] == 0)
                    continue;
                if (a[c.parent] < 0) {
                    if (impossible)
                        set(c.parent, false);
                    continue;
                }
                if (impossible)
                    return conflict(c);
                if (free == 0)
                    continue;
                if (in == c.max) {
                    for (std::size_t m : c.members)
                        if (a[m] < 0)
                            set(m, false);
                } else if (in + free == c.min) {
                    for (std::size_t m : c.members)
                        if (a[m] < 0)
                            set(m, true);
                }
            }
        }
        return std::nullopt;
    }

    /// Number of valid completions of `a` (saturating).
    std::uint64_t count(Assignment a) const
    {
        if (propagate_units(a))
            return 0;
        for (std::size_t v : cross_vars_) {
            if (a[v] >= 0)
                continue;
            Assignment in = a, out = a;
            in[v] = 1;
            out[v] = 0;
            return sat_add(count(std::move(in)), count(std::move(out)));
        }
        // only tree rules left undecided
        if (!root_)
            return 1;
        std::vector<std::uint64_t> sel(size(), 0);
        std::vector<bool> may_skip(size(), true);
        tree_count(*root_, a, sel, may_skip);
        return sel[*root_];
    }

    bool satisfiable(const Assignment& a) const { return count(a) > 0; }

private:
    Conflict conflict(const Clause& c) const
    {
        Conflict out{c.rule, {}};
        for (const auto& l : c.lits)
            out.elements.push_back(tree_.ids[l.var]);
        return out;
    }

    Conflict conflict(const Card& c) const
    {
        Conflict out{c.rule, {tree_.ids[c.parent]}};
        for (std::size_t m : c.members)
            out.elements.push_back(tree_.ids[m]);
        return out;
    }

    // sel[v]: completions of v's subtree with v selected; may_skip[v]: the
    // subtree may be left entirely unselected.
    void tree_count(std::size_t v, const Assignment& a, std::vector<std::uint64_t>& sel,
                    std::vector<bool>& may_skip) const
    {
        may_skip[v] = a[v] != 1;
        std::uint64_t ways = 1;
        for (const auto& g : tree_.groups[v]) {
            for (std::size_t c : g.members) {
                tree_count(c, a, sel, may_skip);
                may_skip[v] = may_skip[v] && may_skip[c];
            }
            switch (g.kind) {
            case GroupKind::Mandatory:
                for (std::size_t c : g.members)
                    ways = sat_mul(ways, sel[c]);
                break;
            case GroupKind::Optional:
                for (std::size_t c : g.members)
                    ways = sat_mul(ways, sat_add(sel[c], may_skip[c] ? 1 : 0));
                break;
            case GroupKind::Or:
            case GroupKind::Alternative: {
                const unsigned lo = g.kind == GroupKind::Or ? g.min : 1;
                const unsigned hi = g.kind == GroupKind::Or ? g.max : 1;
                // coefficients of prod(skip + sel * z)
                std::vector<std::uint64_t> poly{1};
                for (std::size_t c : g.members) {
                    std::vector<std::uint64_t> next(poly.size() + 1, 0);
                    for (std::size_t k = 0; k < poly.size(); ++k) {
                        if (may_skip[c])
                            next[k] = sat_add(next[k], poly[k]);
                        next[k + 1] = sat_add(next[k + 1], sat_mul(poly[k], sel[c]));
                    }
                    poly = std::move(next);
                }
                std::uint64_t sum = 0;
                for (std::size_t k = lo; k <= hi && k < poly.size(); ++k)
                    sum = sat_add(sum, poly[k]);
                ways = sat_mul(ways, sum);
                break;
            }
            }
        }
        sel[v] = a[v] == 0 ? 0 : ways;
    }

    FeatureTree tree_;
    std::optional<std::size_t> root_;
    std::vector<Clause> clauses_;
    std::vector<Card> cards_;
    std::vector<std::size_t> cross_vars_;
    std::vector<std::size_t> configurable_;
};

Assignment initial_assignment(const Problem& p, const Decisions& decisions)
{
    Assignment a(p.size(), -1);
    for (const auto& [id, d] : decisions) {
        const auto v = p.tree().index_of(id);
        if (!v)
            throw UnknownElement(id.str());
        a[*v] = d == Decision::In ? 1 : 0;
    }
    return a;
}

PropagationState state_of(const Problem& p, const Assignment& a)
{
    PropagationState s;
    for (std::size_t v : p.configurable()) {
        const ElementId& id = p.tree().ids[v];
        if (a[v] == 1)
            s.forced_in.push_back(id);
        else if (a[v] == 0)
            s.forced_out.push_back(id);
        else
            s.open.push_back(id);
    }
    return s;
}

} // namespace

std::vector<ElementId> configurable_ids(const Model& model)
{
    std::vector<ElementId> out;
    for (const auto& e : model.elements())
        if (e.kind == ElementKind::Feature || e.kind == ElementKind::Function)
            out.push_back(e.id);
    return out;
}

std::uint64_t count_configurations(const Model& model, const VariabilityOptions& options)
{
    const Problem p(model);
    p.check_budget(options.budget);
    const std::uint64_t n = p.count(Assignment(p.size(), -1));
    if (n == saturated)
        throw Error("configuration count does not fit in 64 bits");
    return n;
}

std::vector<Configuration> enumerate_configurations(const Model& model, std::size_t limit,
                                                    const VariabilityOptions& options)
{
    const Problem p(model);
    p.check_budget(options.budget);
    const auto& order = p.configurable();
    std::vector<Configuration> out;

    // Lexicographic order over sorted id lists: a set comes before its
    // extensions, and extensions by a smaller next id come first.
    auto visit = [&](auto& self, const Assignment& prefix, std::size_t next) -> void {
        if (out.size() >= limit)
            return;
        Assignment closed = prefix;
        for (std::size_t k = next; k < order.size(); ++k)
            closed[order[k]] = 0;
        if (p.satisfiable(closed)) {
            Configuration c;
            for (std::size_t v : order)
                if (closed[v] == 1)
                    c.selected.push_back(p.tree().ids[v]);
            out.push_back(std::move(c));
        }
        Assignment base = prefix;
        for (std::size_t k = next; k < order.size() && out.size() < limit; ++k) {
            Assignment with = base;
            with[order[k]] = 1;
            if (p.satisfiable(with))
                self(self, with, k + 1);
            base[order[k]] = 0;
            if (!p.satisfiable(base))
                break;
        }
    };
    if (limit > 0)
        visit(visit, Assignment(p.size(), -1), 0);
    return out;
}

PropagationState propagate(const Model& model, const Decisions& decisions, PropagationMode mode)
{
    const Problem p(model);
    Assignment a = initial_assignment(p, decisions);
    if (auto c = p.propagate_units(a)) {
        PropagationState s = state_of(p, a);
        s.conflict = std::move(c);
        return s;
    }
    if (mode == PropagationMode::Unit)
        return state_of(p, a);

    if (!p.satisfiable(a)) {
        PropagationState s = state_of(p, a);
        Conflict c{"unsatisfiable", {}};
        for (const auto& [id, d] : decisions)
            c.elements.push_back(id);
        s.conflict = std::move(c);
        return s;
    }
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (a[v] >= 0)
            continue;
        Assignment in = a;
        in[v] = 1;
        if (!p.satisfiable(in)) {
            a[v] = 0;
            continue;
        }
        Assignment out = a;
        out[v] = 0;
        if (!p.satisfiable(out))
            a[v] = 1;
    }
    return state_of(p, a);
}

std::vector<ElementId> dead_features(const Model& model, const VariabilityOptions& options)
{
    {
        const Problem p(model);
        p.check_budget(options.budget);
    }
    const PropagationState s = propagate(model, {}, PropagationMode::Complete);
    if (!s.consistent()) {
        auto all = configurable_ids(model);
        std::sort(all.begin(), all.end());
        return all;
    }
    return s.forced_out;
}

std::uint64_t variant_combinations(const Model& model, const std::vector<ElementId>& blocks)
{
    std::uint64_t product = 1;
    for (const auto& b : blocks) {
        const Element* block = model.find(b);
        if (!block || block->kind != ElementKind::Block)
            throw UnknownElement(b.str());
        const auto n = std::count_if(model.elements().begin(), model.elements().end(), [&](const Element& e) {
            return e.kind == ElementKind::Variant && e.owner == b;
        });
        product = sat_mul(product, n == 0 ? 1 : static_cast<std::uint64_t>(n));
    }
    return product;
}

std::string format_configuration_record(const Model& model, const Configuration& configuration)
{
    nlohmann::ordered_json j;
    j["model"] = model.name();
    j["selected"] = nlohmann::json::array();
    for (const auto& id : configuration.selected)
        j["selected"].push_back(id.str());
    return j.dump();
}

} // namespace imog
