#pragma once

// In-memory representation of an innovation model: perspectives, abstraction
// levels, typed elements, typed relations and requirement bodies.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace imog {

/// Identity of an element. All perspectives share one namespace.
class ElementId {
public:
    ElementId() = default;
    explicit ElementId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const ElementId&, const ElementId&) = default;
    friend bool operator==(const ElementId&, const ElementId&) = default;

private:
    std::string value_;
};

/// Letters, digits and underscore; must not begin with a digit.
bool is_valid_id(std::string_view text) noexcept;

enum class Perspective : std::uint8_t { Strategy, Functional, Quality, Structural, Knowledge };
enum class Space : std::uint8_t { Problem, Solution, Both };

/// Coarse to fine: Context > System > Component.
enum class Level : std::uint8_t { Context, System, Component };

enum class ElementKind : std::uint8_t {
    Goal,
    Stakeholder,
    StrategyNote,
    Feature,
    Function,
    VariationPoint,
    Requirement,
    Constraint,
    Block,
    Variant,
    Channel,
    Effect,
    KnowledgeEntry,
};

enum class RelationKind : std::uint8_t {
    Mandatory,
    Optional,
    OrGroup,
    Alternative,
    Requires,
    Excludes,
    References,
    Constrains,
    Allocate,
    Effect,
    ChannelLink,
    Contains,
    RefinesGoal,
    KbRef,
};

inline constexpr Perspective all_perspectives[] = {Perspective::Strategy, Perspective::Functional,
                                                   Perspective::Quality, Perspective::Structural,
                                                   Perspective::Knowledge};
inline constexpr Level all_levels[] = {Level::Context, Level::System, Level::Component};

Perspective perspective_of(ElementKind kind) noexcept;
Space space_of(Perspective p) noexcept;

/// 0 for Context, 2 for Component. Smaller is coarser.
constexpr int level_rank(Level l) noexcept { return static_cast<int>(l); }

/// True if the kind participates in the feature tree.
constexpr bool is_feature_like(ElementKind k) noexcept
{
    return k == ElementKind::Feature || k == ElementKind::Function || k == ElementKind::VariationPoint;
}

std::string_view to_string(Perspective p) noexcept;
std::string_view to_string(Space s) noexcept;
std::string_view to_string(Level l) noexcept;
std::string_view to_string(ElementKind k) noexcept;
std::string_view to_string(RelationKind k) noexcept;

std::optional<Perspective> parse_perspective(std::string_view text) noexcept;
std::optional<Level> parse_level(std::string_view text) noexcept;

struct SourceSpan {
    std::string file;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;

    friend auto operator<=>(const SourceSpan&, const SourceSpan&) = default;
};

struct Number {
    double value = 0.0;
    std::string unit;

    friend bool operator==(const Number&, const Number&) = default;
};

using PropertyValue = std::variant<Number, std::string, bool>;

struct Property {
    std::string key;
    PropertyValue value;

    friend bool operator==(const Property&, const Property&) = default;
};

const Property* find_property(const std::vector<Property>& props, std::string_view key) noexcept;
std::optional<double> number_property(const std::vector<Property>& props, std::string_view key) noexcept;
std::optional<std::string> text_property(const std::vector<Property>& props, std::string_view key);

/// Type and year of an inline knowledge entry.
struct KnowledgeInfo {
    std::string type;
    int year = 0;

    friend bool operator==(const KnowledgeInfo&, const KnowledgeInfo&) = default;
};

struct Element {
    ElementId id;
    ElementKind kind = ElementKind::Feature;
    std::string name;
    std::string description;
    std::optional<Level> level;
    std::vector<Property> properties;
    /// Variant -> its block, VariationPoint -> the feature or function it hangs under.
    std::optional<ElementId> owner;
    std::optional<KnowledgeInfo> knowledge;
    std::optional<SourceSpan> span;

    Perspective perspective() const noexcept { return perspective_of(kind); }
};

struct Cardinality {
    unsigned min = 1;
    unsigned max = 1;

    friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct Relation {
    RelationKind kind = RelationKind::Mandatory;
    ElementId source;
    std::vector<ElementId> targets;
    std::optional<Cardinality> cardinality;
    std::string label;
    /// Attributes of a channel.
    std::vector<Property> properties;
    std::optional<SourceSpan> span;

    const ElementId& target() const { return targets.front(); }
};

enum class Comparator : std::uint8_t { Le, Ge, Eq, Lt, Gt, InRange };

std::string_view to_string(Comparator c) noexcept;
std::optional<Comparator> parse_comparator(std::string_view text) noexcept;

/// Machine-checkable `attribute comparator bound [unit]` triple.
struct AttributeBound {
    std::string attribute;
    Comparator comparator = Comparator::Le;
    double low = 0.0;
    /// Upper bound; equals `low` unless the comparator is InRange.
    double high = 0.0;
    std::string unit;

    friend bool operator==(const AttributeBound&, const AttributeBound&) = default;
};

struct RequirementBody {
    ElementId owner;
    ElementId target;
    std::optional<AttributeBound> bound;
    std::optional<std::string> rationale;
    std::optional<SourceSpan> span;
};

/// A whole innovation model. Built once through the add_* members, then
/// treated as immutable; analyses and views produce new models.
class Model {
public:
    Model() = default;
    explicit Model(std::string name) : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    const std::optional<SourceSpan>& span() const noexcept { return span_; }
    void set_span(std::optional<SourceSpan> span) { span_ = std::move(span); }

    const std::vector<Element>& elements() const noexcept { return elements_; }
    const std::vector<Relation>& relations() const noexcept { return relations_; }
    const std::vector<RequirementBody>& requirements() const noexcept { return requirements_; }

    /// Returns false and leaves the model unchanged when the id is taken.
    bool add_element(Element element);
    void add_relation(Relation relation) { relations_.push_back(std::move(relation)); }
    void add_requirement(RequirementBody body) { requirements_.push_back(std::move(body)); }

    const Element* find(const ElementId& id) const noexcept;
    bool contains(const ElementId& id) const noexcept { return find(id) != nullptr; }
    const RequirementBody* requirement_of(const ElementId& owner) const noexcept;

private:
    struct IdHash {
        std::size_t operator()(const ElementId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
    };

    std::string name_;
    std::optional<SourceSpan> span_;
    std::vector<Element> elements_;
    std::vector<Relation> relations_;
    std::vector<RequirementBody> requirements_;
    std::unordered_map<ElementId, std::size_t, IdHash> index_;
};

const Element* lookup(const Model& model, const ElementId& id) noexcept;

/// Relations whose source or any target is `id`, in declaration order.
/// Throws UnknownElement when `id` is not in the model.
std::vector<Relation> relations_of(const Model& model, const ElementId& id,
                                   std::optional<RelationKind> kind = std::nullopt);

/// Level used for filtering: the element's own level, or for variants and
/// variation points the level of their owner.
std::optional<Level> effective_level(const Model& model, const Element& element);

/// Structural equality ignoring spans. Elements are compared by id, relations
/// and requirement bodies as multisets.
bool structurally_equal(const Model& a, const Model& b);
bool structurally_equal(const Element& a, const Element& b);
bool structurally_equal(const Relation& a, const Relation& b);
bool structurally_equal(const RequirementBody& a, const RequirementBody& b);

} // namespace imog

template <>
struct std::hash<imog::ElementId> {
    std::size_t operator()(const imog::ElementId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
