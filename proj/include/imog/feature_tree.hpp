#pragma once

// Parent/child structure of the Functional Perspective, shared by validation,
// variability analysis and impact analysis.

#include "imog/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace imog {

enum class GroupKind : std::uint8_t { Mandatory, Optional, Or, Alternative };

/// Children of one node that share a selection rule.
struct ChildGroup {
    GroupKind kind = GroupKind::Mandatory;
    std::vector<std::size_t> members;
    unsigned min = 0;
    unsigned max = 0;
};

struct FeatureTree {
    /// Model ids of the nodes: features, functions and variation points, in
    /// declaration order.
    std::vector<ElementId> ids;
    std::vector<bool> is_variation_point;
    std::vector<std::vector<std::size_t>> parents;
    std::vector<std::vector<ChildGroup>> groups;

    std::size_t size() const noexcept { return ids.size(); }
    std::optional<std::size_t> index_of(const ElementId& id) const;
    std::vector<std::size_t> roots() const;
};

/// Builds the tree from Mandatory/Optional/OrGroup/Alternative relations. A
/// variation point hangs under its owner as a mandatory child unless the owner
/// lists it in one of its or-groups. Relations with unknown endpoints are
/// ignored.
FeatureTree build_feature_tree(const Model& model);

/// Every cycle of parent links, each as the node indices along it.
std::vector<std::vector<std::size_t>> find_cycles(const FeatureTree& tree);

} // namespace imog
