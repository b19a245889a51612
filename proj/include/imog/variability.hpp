#pragma once

// Configuration semantics of the feature model and its analyses.
//
// A configuration (a set of selected features and functions) is valid iff
//   1. the root is selected;
//   2. a selected child has a selected parent;
//   3. a selected parent selects its mandatory children;
//   4. an or-group [m..n] under a selected parent has between m and n
//      selected members, none otherwise;
//   5. a variation point under a selected parent has exactly one selected
//      alternative, none otherwise;
//   6. `requires a -> b`: a selected implies b selected;
//   7. `excludes a -> b`: not both selected.
// Variation points are not part of a configuration: one counts as selected
// exactly when one of its alternatives is.

#include "imog/model.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace imog {

struct Configuration {
    std::vector<ElementId> selected;  ///< sorted ascending

    friend auto operator<=>(const Configuration&, const Configuration&) = default;
    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct VariabilityOptions {
    /// Maximum number of features and functions searched exhaustively.
    std::size_t budget = 24;
};

/// Features and functions of the model, in declaration order.
std::vector<ElementId> configurable_ids(const Model& model);

/// Throws InvalidFeatureModel when the tree is malformed and BudgetExceeded
/// when exhaustive search would be needed beyond the budget.
std::uint64_t count_configurations(const Model& model, const VariabilityOptions& options = {});

/// The first `limit` valid configurations in lexicographic order over the
/// sorted selected ids.
std::vector<Configuration> enumerate_configurations(const Model& model, std::size_t limit,
                                                    const VariabilityOptions& options = {});

enum class Decision : std::uint8_t { In, Out };

using Decisions = std::map<ElementId, Decision>;

/// Rule instance that made a set of decisions unsatisfiable.
struct Conflict {
    std::string rule;
    std::vector<ElementId> elements;
};

struct PropagationState {
    std::vector<ElementId> forced_in;   ///< sorted
    std::vector<ElementId> forced_out;  ///< sorted
    std::vector<ElementId> open;        ///< sorted
    std::optional<Conflict> conflict;

    bool consistent() const noexcept { return !conflict.has_value(); }
    friend bool operator==(const PropagationState& a, const PropagationState& b)
    {
        return a.forced_in == b.forced_in && a.forced_out == b.forced_out && a.open == b.open &&
               a.conflict.has_value() == b.conflict.has_value();
    }
};

enum class PropagationMode : std::uint8_t {
    /// Fixpoint of the rules applied one unit at a time. Sound, may leave
    /// entailed values open.
    Unit,
    /// Unit fixpoint completed by satisfiability probing: a feature is forced
    /// iff every valid extension of the decisions agrees on it.
    Complete,
};

/// Throws UnknownElement when a decision names something that is not a
/// feature, function or variation point of the model.
PropagationState propagate(const Model& model, const Decisions& decisions,
                           PropagationMode mode = PropagationMode::Complete);

/// Features and functions that appear in no valid configuration, sorted.
std::vector<ElementId> dead_features(const Model& model, const VariabilityOptions& options = {});

/// Product over `blocks` of the number of attached variants, a block without
/// variants counting as 1.
std::uint64_t variant_combinations(const Model& model, const std::vector<ElementId>& blocks);

/// `{"model":..., "selected":[...]}`
std::string format_configuration_record(const Model& model, const Configuration& configuration);

} // namespace imog
