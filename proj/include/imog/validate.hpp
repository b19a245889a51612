#pragma once

// Reference resolution and well-formedness rules across perspectives.
//
// Codes
//   R-101  error    unresolved id
//   R-102  error    relation endpoint has the wrong element kind
//   R-201  error    feature tree has a cycle or a node with several parents
//   R-202  error    more than one root feature
//   R-203  error    `contains` puts a coarser block inside a finer one
//   W-201  warning  variation point is a member of an or-group
//   W-202  warning  feature or function without allocation
//   W-203  warning  block with neither an incoming allocation nor a container
//   W-204  warning  requirement without an attribute bound
//   W-205  warning  goal not referenced by any feature or function
//   I-201  info     perspective is empty

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

#include <vector>

namespace imog {

std::vector<Diagnostic> resolve(const Model& model);

struct ValidateOptions {
    /// Views are partial: skip the root-count and allocation checks.
    bool partial_view = false;
};

std::vector<Diagnostic> validate(const Model& model, const ValidateOptions& options = {});

/// True if `kind` may be the source (or target) of relation `rel`.
bool allowed_source(RelationKind rel, ElementKind kind) noexcept;
bool allowed_target(RelationKind rel, ElementKind kind) noexcept;

} // namespace imog
