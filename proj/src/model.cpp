#include "imog/model.hpp"

#include "imog/errors.hpp"

#include <algorithm>
#include <cctype>

namespace imog {

bool is_valid_id(std::string_view text) noexcept
{
    if (text.empty())
        return false;
    const auto first = static_cast<unsigned char>(text.front());
    if (!(std::isalpha(first) || first == '_'))
        return false;
    return std::all_of(text.begin(), text.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

Perspective perspective_of(ElementKind kind) noexcept
{
    switch (kind) {
    case ElementKind::Goal:
    case ElementKind::Stakeholder:
    case ElementKind::StrategyNote:
        return Perspective::Strategy;
    case ElementKind::Feature:
    case ElementKind::Function:
    case ElementKind::VariationPoint:
        return Perspective::Functional;
    case ElementKind::Requirement:
    case ElementKind::Constraint:
        return Perspective::Quality;
    case ElementKind::Block:
    case ElementKind::Variant:
    case ElementKind::Channel:
    case ElementKind::Effect:
        return Perspective::Structural;
    case ElementKind::KnowledgeEntry:
        return Perspective::Knowledge;
    }
    return Perspective::Knowledge;
}

Space space_of(Perspective p) noexcept
{
    switch (p) {
    case Perspective::Strategy:
    case Perspective::Functional:
        return Space::Problem;
    case Perspective::Quality:
        return Space::Both;
    case Perspective::Structural:
    case Perspective::Knowledge:
        return Space::Solution;
    }
    return Space::Both;
}

std::string_view to_string(Perspective p) noexcept
{
    switch (p) {
    case Perspective::Strategy: return "Strategy";
    case Perspective::Functional: return "Functional";
    case Perspective::Quality: return "Quality";
    case Perspective::Structural: return "Structural";
    case Perspective::Knowledge: return "Knowledge";
    }
    return "?";
}

std::string_view to_string(Space s) noexcept
{
    switch (s) {
    case Space::Problem: return "Problem";
    case Space::Solution: return "Solution";
    case Space::Both: return "Both";
    }
    return "?";
}

std::string_view to_string(Level l) noexcept
{
    switch (l) {
    case Level::Context: return "context";
    case Level::System: return "system";
    case Level::Component: return "component";
    }
    return "?";
}

std::string_view to_string(ElementKind k) noexcept
{
    switch (k) {
    case ElementKind::Goal: return "Goal";
    case ElementKind::Stakeholder: return "Stakeholder";
    case ElementKind::StrategyNote: return "StrategyNote";
    case ElementKind::Feature: return "Feature";
    case ElementKind::Function: return "Function";
    case ElementKind::VariationPoint: return "VariationPoint";
    case ElementKind::Requirement: return "Requirement";
    case ElementKind::Constraint: return "Constraint";
    case ElementKind::Block: return "Block";
    case ElementKind::Variant: return "Variant";
    case ElementKind::Channel: return "Channel";
    case ElementKind::Effect: return "Effect";
    case ElementKind::KnowledgeEntry: return "KnowledgeEntry";
    }
    return "?";
}

std::string_view to_string(RelationKind k) noexcept
{
    switch (k) {
    case RelationKind::Mandatory: return "mandatory";
    case RelationKind::Optional: return "optional";
    case RelationKind::OrGroup: return "orgroup";
    case RelationKind::Alternative: return "alternative";
    case RelationKind::Requires: return "requires";
    case RelationKind::Excludes: return "excludes";
    case RelationKind::References: return "references";
    case RelationKind::Constrains: return "constrains";
    case RelationKind::Allocate: return "allocate";
    case RelationKind::Effect: return "effect";
    case RelationKind::ChannelLink: return "channel";
    case RelationKind::Contains: return "contains";
    case RelationKind::RefinesGoal: return "refines_goal";
    case RelationKind::KbRef: return "kbref";
    }
    return "?";
}

namespace {

std::string lower(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::optional<Perspective> parse_perspective(std::string_view text) noexcept
{
    const auto t = lower(text);
    for (auto p : all_perspectives)
        if (lower(to_string(p)) == t)
            return p;
    return std::nullopt;
}

std::optional<Level> parse_level(std::string_view text) noexcept
{
    const auto t = lower(text);
    for (auto l : all_levels)
        if (to_string(l) == t)
            return l;
    return std::nullopt;
}

std::string_view to_string(Comparator c) noexcept
{
    switch (c) {
    case Comparator::Le: return "<=";
    case Comparator::Ge: return ">=";
    case Comparator::Eq: return "==";
    case Comparator::Lt: return "<";
    case Comparator::Gt: return ">";
    case Comparator::InRange: return "in";
    }
    return "?";
}

std::optional<Comparator> parse_comparator(std::string_view text) noexcept
{
    for (auto c : {Comparator::Le, Comparator::Ge, Comparator::Eq, Comparator::Lt, Comparator::Gt,
                   Comparator::InRange})
        if (to_string(c) == text)
            return c;
    return std::nullopt;
}

const Property* find_property(const std::vector<Property>& props, std::string_view key) noexcept
{
    auto it = std::find_if(props.begin(), props.end(), [&](const Property& p) { return p.key == key; });
    return it == props.end() ? nullptr : &*it;
}

std::optional<double> number_property(const std::vector<Property>& props, std::string_view key) noexcept
{
    if (const auto* p = find_property(props, key))
        if (const auto* n = std::get_if<Number>(&p->value))
            return n->value;
    return std::nullopt;
}

std::optional<std::string> text_property(const std::vector<Property>& props, std::string_view key)
{
    if (const auto* p = find_property(props, key))
        if (const auto* s = std::get_if<std::string>(&p->value))
            return *s;
    return std::nullopt;
}

bool Model::add_element(Element element)
{
    if (index_.contains(element.id))
        return false;
    index_.emplace(element.id, elements_.size());
    elements_.push_back(std::move(element));
    return true;
}

const Element* Model::find(const ElementId& id) const noexcept
{
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &elements_[it->second];
}

const RequirementBody* Model::requirement_of(const ElementId& owner) const noexcept
{
    auto it = std::find_if(requirements_.begin(), requirements_.end(),
                           [&](const RequirementBody& b) { return b.owner == owner; });
    return it == requirements_.end() ? nullptr : &*it;
}

const Element* lookup(const Model& model, const ElementId& id) noexcept { return model.find(id); }

std::vector<Relation> relations_of(const Model& model, const ElementId& id, std::optional<RelationKind> kind)
{
    if (!model.contains(id))
        throw UnknownElement(id.str());
    std::vector<Relation> out;
    for (const auto& r : model.relations()) {
        if (kind && r.kind != *kind)
            continue;
        if (r.source == id || std::find(r.targets.begin(), r.targets.end(), id) != r.targets.end())
            out.push_back(r);
    }
    return out;
}

std::optional<Level> effective_level(const Model& model, const Element& element)
{
    const Element* current = &element;
    // owner chains are at most two deep (variation point -> feature); the bound
    // guards against malformed input
    for (std::size_t hops = 0; hops <= model.elements().size(); ++hops) {
        if (current->level || !current->owner)
            return current->level;
        const Element* owner = model.find(*current->owner);
        if (!owner)
            return std::nullopt;
        current = owner;
    }
    return std::nullopt;
}

bool structurally_equal(const Element& a, const Element& b)
{
    return a.id == b.id && a.kind == b.kind && a.name == b.name && a.description == b.description &&
           a.level == b.level && a.properties == b.properties && a.owner == b.owner &&
           a.knowledge == b.knowledge;
}

bool structurally_equal(const Relation& a, const Relation& b)
{
    return a.kind == b.kind && a.source == b.source && a.targets == b.targets &&
           a.cardinality == b.cardinality && a.label == b.label && a.properties == b.properties;
}

bool structurally_equal(const RequirementBody& a, const RequirementBody& b)
{
    return a.owner == b.owner && a.target == b.target && a.bound == b.bound && a.rationale == b.rationale;
}

namespace {

template <class T>
bool same_multiset(const std::vector<T>& a, const std::vector<T>& b)
{
    if (a.size() != b.size())
        return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        bool matched = false;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!used[i] && structurally_equal(x, b[i])) {
                used[i] = true;
                matched = true;
                break;
            }
        }
        if (!matched)
            return false;
    }
    return true;
}

} // namespace

bool structurally_equal(const Model& a, const Model& b)
{
    if (a.name() != b.name() || a.elements().size() != b.elements().size())
        return false;
    for (const auto& e : a.elements()) {
        const Element* other = b.find(e.id);
        if (!other || !structurally_equal(e, *other))
            return false;
    }
    return same_multiset(a.relations(), b.relations()) && same_multiset(a.requirements(), b.requirements());
}

} // namespace imog
