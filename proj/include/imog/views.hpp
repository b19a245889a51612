#pragma once

// Abstraction levels and perspectives as filters, and the exports built on them.

#include "imog/knowledge.hpp"
#include "imog/model.hpp"

#include <bitset>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imog {

/// Small set over an enumeration with contiguous values.
template <class E, std::size_t N>
class EnumSet {
public:
    constexpr EnumSet() = default;
    EnumSet(std::initializer_list<E> values)
    {
        for (E v : values)
            insert(v);
    }

    static EnumSet all()
    {
        EnumSet s;
        s.bits_.set();
        return s;
    }

    void insert(E v) { bits_.set(static_cast<std::size_t>(v)); }
    bool contains(E v) const { return bits_.test(static_cast<std::size_t>(v)); }
    bool empty() const { return bits_.none(); }
    std::size_t size() const { return bits_.count(); }

    friend EnumSet operator&(EnumSet a, const EnumSet& b)
    {
        a.bits_ &= b.bits_;
        return a;
    }
    friend bool operator==(const EnumSet&, const EnumSet&) = default;

private:
    std::bitset<N> bits_;
};

using LevelSet = EnumSet<Level, 3>;
using PerspectiveSet = EnumSet<Perspective, 5>;

/// Keeps elements whose perspective is selected and whose effective level is
/// selected or absent. Requirements follow their target, variants and
/// variation points their owner; relations survive iff all endpoints do.
/// References to entries outside the model count as Knowledge elements.
Model filter_view(const Model& model, const LevelSet& levels, const PerspectiveSet& perspectives);

struct GraphOptions {
    std::string rankdir = "LR";
    /// Draw block-to-variant and feature-to-variation-point attachments.
    bool ownership_edges = true;
};

/// Directed graph in DOT format.
std::string export_graph(const Model& model, const GraphOptions& options = {});

inline constexpr std::string_view requirements_table_header =
    "id,name,target,target_perspective,attribute,comparator,bound,unit,rationale";

/// Comma-separated, one row per requirement or constraint, sorted by id.
std::string export_requirements_table(const Model& model);

struct RequirementRow {
    std::string id;
    std::string name;
    std::string target;
    std::string target_perspective;
    std::optional<AttributeBound> bound;
    std::string rationale;

    friend bool operator==(const RequirementRow&, const RequirementRow&) = default;
};

/// Reads the table back. Throws Error on a malformed table.
std::vector<RequirementRow> parse_requirements_table(std::string_view text);

/// Document with one section per process step. `store` adds knowledge base
/// entries to the roadmap timeline next to the model's inline entries.
std::string roadmap_scaffold(const Model& model, std::span<const KnowledgeEntry> store = {});

} // namespace imog
