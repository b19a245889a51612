#pragma once

// Traceability across allocation, constrains and references links.
//   C-301  error  requirements on one block and attribute admit no common value
//   I-301  info   requirements on one block and attribute use different units

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace imog {

/// Admissible values of a bound, possibly unbounded or open at either end.
struct Interval {
    double low = -std::numeric_limits<double>::infinity();
    double high = std::numeric_limits<double>::infinity();
    bool low_open = true;
    bool high_open = true;

    bool empty() const noexcept;
    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval admissible_interval(const AttributeBound& bound) noexcept;
Interval intersect(const Interval& a, const Interval& b) noexcept;

enum class OriginKind : std::uint8_t { Direct, ViaAllocation, Inherited };

struct Origin {
    OriginKind kind = OriginKind::Direct;
    /// The allocated feature for ViaAllocation, the ancestor block for Inherited.
    std::optional<ElementId> via;

    friend bool operator==(const Origin&, const Origin&) = default;
};

std::string to_string(const Origin& origin);

struct EffectiveRequirement {
    RequirementBody body;
    Origin origin;
};

struct TraceOptions {
    /// Blocks inherit the requirements of their `contains` ancestors.
    bool inherit_contains = true;
};

/// Direct requirements of `block`, then those on features allocated to it,
/// then those inherited from containing blocks (nearest first).
std::vector<EffectiveRequirement> effective_requirements(const Model& model, const ElementId& block,
                                                         const TraceOptions& options = {});

struct ConflictMember {
    ElementId owner;
    Origin origin;
    Interval interval;
};

struct ConflictGroup {
    ElementId block;
    std::string attribute;
    std::string unit;
    std::vector<ConflictMember> requirements;
};

/// One group per (block, attribute, unit) whose admissible sets have an empty
/// intersection. A group already explained by the inherited requirements
/// alone is reported only at the ancestor that owns it.
std::vector<ConflictGroup> find_conflicts(const Model& model, const TraceOptions& options = {});

/// C-301 per conflict group and I-301 per unit mismatch.
std::vector<Diagnostic> conflict_diagnostics(const Model& model, const TraceOptions& options = {});

/// Everything reachable from `id` over refines-goal (reversed), feature tree
/// edges, allocation, constrains (reversed), contains, knowledge references and
/// ownership. `id` itself is not part of the result.
std::set<ElementId> impact(const Model& model, const ElementId& id);

struct TraceReport {
    std::vector<ElementId> unallocated;
    std::vector<ElementId> unconstrained;
    std::vector<ConflictGroup> conflict_groups;
    std::map<ElementId, std::vector<ElementId>> goal_coverage;
};

TraceReport coverage_report(const Model& model, const TraceOptions& options = {});

std::string format_report_text(const TraceReport& report);
std::string format_report_records(const Model& model, const TraceReport& report);
std::string format_conflicts_text(const std::vector<ConflictGroup>& groups);

} // namespace imog
