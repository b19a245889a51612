#include "imog/dsl.hpp"

#include <charconv>
#include <sstream>

namespace imog {

std::string format_number(double value)
{
    char buf[512];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (ec != std::errc{})
        return "0";
    return std::string(buf, ptr);
}

namespace {

std::string quote(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string value_text(const PropertyValue& v)
{
    if (const auto* n = std::get_if<Number>(&v))
        return n->unit.empty() ? format_number(n->value) : format_number(n->value) + " " + n->unit;
    if (const auto* s = std::get_if<std::string>(&v))
        return quote(*s);
    return std::get<bool>(v) ? "true" : "false";
}

std::string props_text(const std::vector<Property>& props)
{
    if (props.empty())
        return {};
    std::string out = " {";
    for (std::size_t i = 0; i < props.size(); ++i) {
        out += i ? ", " : " ";
        out += props[i].key + ": " + value_text(props[i].value);
    }
    out += " }";
    return out;
}

std::string id_list(const std::vector<ElementId>& ids)
{
    std::string out = "{";
    for (const auto& id : ids)
        out += " " + id.str();
    out += " }";
    return out;
}

class Printer {
public:
    explicit Printer(const Model& m) : model_(m) {}

    std::string run()
    {
        out_ << "model " << quote(model_.name()) << " {\n";
        section("strategy", [this] { strategy(); });
        section("functional", [this] { functional(); });
        section("quality", [this] { quality(); });
        section("structural", [this] { structural(); });
        section("knowledge", [this] { knowledge(); });
        out_ << "}\n";
        return out_.str();
    }

private:
    template <class Body>
    void section(std::string_view name, Body body)
    {
        std::ostringstream saved;
        std::swap(saved, out_);
        body();
        std::string content = out_.str();
        std::swap(saved, out_);
        if (content.empty())
            return;
        out_ << "  " << name << " {\n" << content << "  }\n";
    }

    void line(int indent, const std::string& text) { out_ << std::string(2 * indent, ' ') << text << '\n'; }

    void strategy()
    {
        for (const auto& e : model_.elements()) {
            switch (e.kind) {
            case ElementKind::Goal:
                line(2, "goal " + e.id.str() + " " + quote(e.name) + props_text(e.properties));
                break;
            case ElementKind::Stakeholder:
                line(2, "stakeholder " + e.id.str() + " " + quote(e.name) + props_text(e.properties));
                break;
            case ElementKind::StrategyNote:
                line(2, "note " + e.id.str() + " " + quote(e.description));
                break;
            default:
                break;
            }
        }
    }

    void functional()
    {
        for (const auto& e : model_.elements()) {
            if (e.kind != ElementKind::Feature && e.kind != ElementKind::Function)
                continue;
            std::string head = (e.kind == ElementKind::Feature ? "feature " : "function ") + e.id.str() + " " +
                               quote(e.name);
            if (e.level)
                head += " level " + std::string(to_string(*e.level));
            head += props_text(e.properties);

            std::vector<std::string> body;
            for (const auto& r : model_.relations()) {
                switch (r.kind) {
                case RelationKind::Mandatory:
                case RelationKind::Optional:
                case RelationKind::RefinesGoal:
                    if (r.source == e.id)
                        body.push_back(std::string(to_string(r.kind)) + " " + r.target().str());
                    break;
                case RelationKind::OrGroup:
                    if (r.source == e.id && r.cardinality)
                        body.push_back("orgroup [" + std::to_string(r.cardinality->min) + ".." +
                                       std::to_string(r.cardinality->max) + "] " + id_list(r.targets));
                    break;
                case RelationKind::Alternative:
                    if (const Element* vp = model_.find(r.source); vp && vp->owner == e.id)
                        body.push_back("alternative " + vp->id.str() + " " + quote(vp->name) + " " +
                                       id_list(r.targets));
                    break;
                default:
                    break;
                }
            }
            if (body.empty()) {
                line(2, head);
                continue;
            }
            line(2, head + " {");
            for (const auto& b : body)
                line(3, b);
            line(2, "}");
        }
        for (const auto& r : model_.relations())
            if (r.kind == RelationKind::Requires || r.kind == RelationKind::Excludes)
                line(2, std::string(to_string(r.kind)) + " " + r.source.str() + " -> " + r.target().str());
    }

    void quality()
    {
        for (const auto& e : model_.elements()) {
            if (e.kind != ElementKind::Requirement && e.kind != ElementKind::Constraint)
                continue;
            const RequirementBody* body = model_.requirement_of(e.id);
            if (!body)
                continue;
            std::string text = (e.kind == ElementKind::Requirement ? "requirement " : "constraint ") + e.id.str() +
                               " " + quote(e.name) + " on " + body->target.str();
            if (const auto& b = body->bound) {
                text += " attr " + b->attribute + " " + std::string(to_string(b->comparator)) + " " +
                        format_number(b->low);
                if (b->comparator == Comparator::InRange)
                    text += " .. " + format_number(b->high);
                if (!b->unit.empty())
                    text += " " + b->unit;
            }
            line(2, text + props_text(e.properties));
        }
    }

    void structural()
    {
        for (const auto& e : model_.elements()) {
            if (e.kind != ElementKind::Block)
                continue;
            std::string head = "block " + e.id.str() + " " + quote(e.name) + " level " +
                               std::string(to_string(e.level.value_or(Level::System))) + props_text(e.properties);
            std::vector<std::string> body;
            for (const auto& v : model_.elements())
                if (v.kind == ElementKind::Variant && v.owner == e.id)
                    body.push_back("variant " + v.id.str() + " " + quote(v.name) + props_text(v.properties));
            for (const auto& r : model_.relations())
                if (r.kind == RelationKind::KbRef && r.source == e.id)
                    body.push_back("kbref " + r.target().str());
            if (body.empty()) {
                line(2, head);
                continue;
            }
            line(2, head + " {");
            for (const auto& b : body)
                line(3, b);
            line(2, "}");
        }
        for (const auto& r : model_.relations()) {
            switch (r.kind) {
            case RelationKind::Effect:
                line(2, "effect " + r.source.str() + " -> " + r.target().str() + " " + quote(r.label));
                break;
            case RelationKind::ChannelLink:
                line(2, "channel " + r.source.str() + " <-> " + r.target().str() + " " + quote(r.label) +
                            props_text(r.properties));
                break;
            case RelationKind::Contains:
                line(2, "contains " + r.source.str() + " " + id_list(r.targets));
                break;
            case RelationKind::Allocate:
                line(2, "allocate " + r.source.str() + " -> " + r.target().str());
                break;
            default:
                break;
            }
        }
    }

    void knowledge()
    {
        for (const auto& e : model_.elements()) {
            if (e.kind != ElementKind::KnowledgeEntry)
                continue;
            const KnowledgeInfo info = e.knowledge.value_or(KnowledgeInfo{"unknown", 0});
            line(2, "entry " + e.id.str() + " " + quote(e.name) + " type " + info.type + " year " +
                        std::to_string(info.year) + props_text(e.properties));
        }
    }

    const Model& model_;
    std::ostringstream out_;
};

} // namespace

std::string print(const Model& model) { return Printer(model).run(); }

} // namespace imog
