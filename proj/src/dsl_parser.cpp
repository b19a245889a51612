#include "imog/dsl.hpp"

#include "imog/errors.hpp"
#include "lexer.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace imog {

namespace {

using detail::Tok;
using detail::Token;

constexpr std::string_view reserved_words[] = {
    "model",       "strategy",  "functional", "quality",   "structural",  "knowledge",    "goal",
    "stakeholder", "note",      "feature",    "function",  "mandatory",   "optional",     "orgroup",
    "alternative", "refines_goal", "requires", "excludes", "requirement", "constraint",   "on",
    "attr",        "in",        "block",      "variant",   "kbref",       "effect",       "channel",
    "contains",    "allocate",  "entry",      "type",      "year",        "level",        "context",
    "system",      "component", "true",       "false",
};

constexpr std::string_view section_words[] = {"strategy", "functional", "quality", "structural", "knowledge"};

constexpr std::string_view statement_words[] = {
    "goal",       "stakeholder", "note",   "feature", "function", "requires", "excludes", "requirement",
    "constraint", "block",       "effect", "channel", "contains", "allocate", "entry",
};

template <std::size_t N>
bool one_of(const std::string_view (&words)[N], std::string_view w)
{
    return std::find(std::begin(words), std::end(words), w) != std::end(words);
}

/// Thrown inside a statement; the section loop records it and recovers.
struct SyntaxError {
    Diagnostic diagnostic;
};

class Parser {
public:
    Parser(std::string_view source, std::string_view file) : tokens_(detail::tokenize(source)), file_(file) {}

    ParseResult run()
    {
        parse_model();
        ParseResult result;
        sort_diagnostics(diagnostics_);
        result.diagnostics = std::move(diagnostics_);
        result.partial = std::move(model_);
        if (count_errors(result.diagnostics) == 0)
            result.model = result.partial;
        return result;
    }

private:
    // ---- token access -----------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const
    {
        const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_word(std::string_view w, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
    }

    const Token& take()
    {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        last_ = &t;
        if (t.kind == Tok::LBrace)
            ++depth_;
        else if (t.kind == Tok::RBrace)
            --depth_;
        return t;
    }

    SourceSpan span_of(const Token& t) const { return {file_, t.line, t.col, t.end_line, t.end_col}; }

    SourceSpan span_from(const Token& start) const
    {
        const Token& end = last_ ? *last_ : start;
        return {file_, start.line, start.col, end.end_line, end.end_col};
    }

    [[noreturn]] void fail(const std::string& expected) const
    {
        const Token& t = peek();
        std::string message;
        if (t.kind == Tok::Invalid) {
            message = t.text;
        } else {
            message = "expected " + expected + ", found ";
            if (t.kind == Tok::Ident)
                message += "'" + t.text + "'";
            else if (t.kind == Tok::Number)
                message += "number " + t.text;
            else if (t.kind == Tok::String)
                message += "string";
            else
                message += std::string(detail::describe(t.kind));
        }
        throw SyntaxError{make_diagnostic("P-001", std::move(message), {}, span_of(t))};
    }

    const Token& expect(Tok kind)
    {
        if (!at(kind))
            fail(std::string(detail::describe(kind)));
        return take();
    }

    void expect_word(std::string_view w)
    {
        if (!at_word(w))
            fail("'" + std::string(w) + "'");
        take();
    }

    ElementId expect_id()
    {
        const Token& t = peek();
        if (t.kind != Tok::Ident || is_reserved_word(t.text) || !is_valid_id(t.text))
            fail("identifier");
        return ElementId(take().text);
    }

    std::string expect_string() { return expect(Tok::String).text; }

    std::string expect_token()
    {
        if (!at(Tok::Ident))
            fail("token");
        return take().text;
    }

    double expect_number()
    {
        const Token& t = expect(Tok::Number);
        double v = 0.0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return v;
    }

    unsigned expect_nat()
    {
        const Token& t = peek();
        if (t.kind != Tok::Number || t.text.find_first_of(".-") != std::string::npos)
            fail("natural number");
        take();
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{})
            throw SyntaxError{make_diagnostic("P-001", "number out of range", {}, span_of(t))};
        return v;
    }

    Level expect_level()
    {
        if (at(Tok::Ident))
            if (auto l = parse_level(peek().text); l && peek().text == to_string(*l)) {
                take();
                return *l;
            }
        fail("level (context, system or component)");
    }

    std::optional<std::string> optional_unit()
    {
        if (at(Tok::Ident) && !is_reserved_word(peek().text) && peek(1).kind != Tok::Colon)
            return take().text;
        return std::nullopt;
    }

    // ---- diagnostics and recovery -------------------------------------------

    void report(Diagnostic d) { diagnostics_.push_back(std::move(d)); }

    bool is_stop_word(const Token& t) const
    {
        return t.kind == Tok::Ident && (one_of(statement_words, t.text) || one_of(section_words, t.text));
    }

    /// Skips the rest of a broken statement: up to the next statement or
    /// section keyword, or the `}` that closes the enclosing section.
    void recover()
    {
        while (!at(Tok::End)) {
            const Token& t = peek();
            if (is_stop_word(t))
                return;
            if (t.kind == Tok::RBrace && depth_ <= 0)
                return;
            take();
        }
    }

    // ---- grammar ------------------------------------------------------------

    void parse_model()
    {
        const Token& start = peek();
        try {
            expect_word("model");
            model_.set_name(expect_string());
            expect(Tok::LBrace);
        } catch (SyntaxError& e) {
            report(std::move(e.diagnostic));
            // resume at the first section keyword
            while (!at(Tok::End) && !(at(Tok::Ident) && one_of(section_words, peek().text)))
                take();
        }
        model_.set_span(span_from(start));

        for (;;) {
            depth_ = 0;
            if (at(Tok::RBrace)) {
                take();
                break;
            }
            if (at(Tok::End)) {
                if (!had_error_since_model())
                    report(make_diagnostic("P-001", "expected '}' closing the model", {}, span_of(peek())));
                return;
            }
            if (at(Tok::Ident) && one_of(section_words, peek().text)) {
                parse_section();
                continue;
            }
            try {
                fail("section (strategy, functional, quality, structural or knowledge)");
            } catch (SyntaxError& e) {
                report(std::move(e.diagnostic));
                take();
                while (!at(Tok::End) && !at(Tok::RBrace) && !(at(Tok::Ident) && one_of(section_words, peek().text)))
                    take();
            }
        }
        if (!at(Tok::End))
            report(make_diagnostic("P-001", "unexpected input after the model; one model per file", {},
                                   span_of(peek())));
    }

    bool had_error_since_model() const { return count_errors(diagnostics_) > 0; }

    void parse_section()
    {
        const std::string section = take().text;
        try {
            expect(Tok::LBrace);
        } catch (SyntaxError& e) {
            report(std::move(e.diagnostic));
            recover();
        }
        const std::size_t errors_before = count_errors(diagnostics_);
        for (;;) {
            depth_ = 0;
            if (at(Tok::RBrace)) {
                take();
                return;
            }
            if (at(Tok::End))
                return;  // reported at model level
            if (at(Tok::Ident) && one_of(section_words, peek().text)) {
                // a missing '}'; report it only if nothing else in the section did
                if (count_errors(diagnostics_) == errors_before)
                    report(make_diagnostic("P-001", "expected '}' closing section '" + section + "'", {},
                                           span_of(peek())));
                return;
            }
            const std::size_t before = pos_;
            try {
                parse_statement(section);
            } catch (SyntaxError& e) {
                report(std::move(e.diagnostic));
                if (pos_ == before)
                    take();
                recover();
            }
        }
    }

    void parse_statement(const std::string& section)
    {
        const Token& kw = peek();
        const std::string& w = kw.kind == Tok::Ident ? kw.text : std::string();
        if (section == "strategy") {
            if (w == "goal")
                return parse_strategy_element(ElementKind::Goal);
            if (w == "stakeholder")
                return parse_strategy_element(ElementKind::Stakeholder);
            if (w == "note")
                return parse_note();
            fail("goal, stakeholder or note");
        }
        if (section == "functional") {
            if (w == "feature")
                return parse_feature(ElementKind::Feature);
            if (w == "function")
                return parse_feature(ElementKind::Function);
            if (w == "requires")
                return parse_cross_relation(RelationKind::Requires);
            if (w == "excludes")
                return parse_cross_relation(RelationKind::Excludes);
            fail("feature, function, requires or excludes");
        }
        if (section == "quality") {
            if (w == "requirement")
                return parse_requirement(ElementKind::Requirement);
            if (w == "constraint")
                return parse_requirement(ElementKind::Constraint);
            fail("requirement or constraint");
        }
        if (section == "structural") {
            if (w == "block")
                return parse_block();
            if (w == "effect")
                return parse_effect();
            if (w == "channel")
                return parse_channel();
            if (w == "contains")
                return parse_contains();
            if (w == "allocate")
                return parse_allocate();
            fail("block, effect, channel, contains or allocate");
        }
        if (w == "entry")
            return parse_entry();
        fail("entry");
    }

    void add_element(Element e)
    {
        const ElementId id = e.id;
        const auto span = e.span;
        if (!model_.add_element(std::move(e)))
            report(make_diagnostic("P-002", "duplicate id '" + id.str() + "'", {id}, span));
    }

    /// `{` starts a property block when followed by `key :`.
    bool at_props() const
    {
        return at(Tok::LBrace) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon;
    }

    std::vector<Property> parse_props_if_present(const ElementId& owner)
    {
        if (!at_props())
            return {};
        return parse_props(owner);
    }

    std::vector<Property> parse_props(const ElementId& owner)
    {
        std::vector<Property> props;
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            const Token& key_tok = peek();
            const std::string key = expect_token();
            expect(Tok::Colon);
            Property p;
            p.key = key;
            if (at(Tok::Number)) {
                Number n;
                n.value = expect_number();
                if (auto u = optional_unit())
                    n.unit = *u;
                p.value = n;
            } else if (at(Tok::String)) {
                p.value = expect_string();
            } else if (at_word("true") || at_word("false")) {
                p.value = take().text == "true";
            } else {
                fail("property value (number, string, true or false)");
            }
            if (find_property(props, key))
                report(make_diagnostic("P-004", "property '" + key + "' redefined", {owner}, span_of(key_tok)));
            else
                props.push_back(std::move(p));
            if (at(Tok::Comma))
                take();
        }
        expect(Tok::RBrace);
        return props;
    }

    void parse_strategy_element(ElementKind kind)
    {
        const Token& start = take();
        Element e;
        e.kind = kind;
        e.id = expect_id();
        e.name = expect_string();
        e.properties = parse_props_if_present(e.id);
        e.span = span_from(start);
        add_element(std::move(e));
    }

    void parse_note()
    {
        const Token& start = take();
        Element e;
        e.kind = ElementKind::StrategyNote;
        e.id = expect_id();
        e.description = expect_string();
        e.span = span_from(start);
        add_element(std::move(e));
    }

    void parse_feature(ElementKind kind)
    {
        const Token& start = take();
        Element e;
        e.kind = kind;
        e.id = expect_id();
        e.name = expect_string();
        if (at_word("level")) {
            take();
            e.level = expect_level();
        }
        e.properties = parse_props_if_present(e.id);
        e.span = span_from(start);
        const ElementId owner = e.id;
        // the element exists before its body so that body diagnostics and
        // variation points can refer to it
        add_element(std::move(e));
        if (at(Tok::LBrace)) {
            take();
            while (!at(Tok::RBrace))
                parse_feature_relation(owner);
            take();
        }
    }

    void parse_feature_relation(const ElementId& owner)
    {
        const Token& start = peek();
        Relation r;
        r.source = owner;
        if (at_word("mandatory") || at_word("optional") || at_word("refines_goal")) {
            const std::string w = take().text;
            r.kind = w == "mandatory" ? RelationKind::Mandatory
                     : w == "optional" ? RelationKind::Optional
                                       : RelationKind::RefinesGoal;
            r.targets.push_back(expect_id());
            r.span = span_from(start);
            model_.add_relation(std::move(r));
            return;
        }
        if (at_word("orgroup")) {
            take();
            r.kind = RelationKind::OrGroup;
            expect(Tok::LBracket);
            Cardinality c;
            c.min = expect_nat();
            expect(Tok::DotDot);
            c.max = expect_nat();
            expect(Tok::RBracket);
            r.targets = parse_id_list();
            r.cardinality = c;
            r.span = span_from(start);
            std::string problem;
            if (r.targets.size() < 2)
                problem = "an or-group needs at least two members";
            else if (c.min < 1)
                problem = "or-group minimum must be at least 1";
            else if (c.min > c.max)
                problem = "or-group minimum " + std::to_string(c.min) + " exceeds maximum " + std::to_string(c.max);
            else if (c.max > r.targets.size())
                problem = "or-group maximum " + std::to_string(c.max) + " exceeds its " +
                          std::to_string(r.targets.size()) + " members";
            if (!problem.empty()) {
                report(make_diagnostic("P-003", problem, {owner}, r.span));
                return;
            }
            model_.add_relation(std::move(r));
            return;
        }
        if (at_word("alternative")) {
            take();
            Element vp;
            vp.kind = ElementKind::VariationPoint;
            vp.id = expect_id();
            vp.name = expect_string();
            vp.owner = owner;
            r.kind = RelationKind::Alternative;
            r.source = vp.id;
            r.targets = parse_id_list();
            r.span = span_from(start);
            vp.span = r.span;
            if (r.targets.size() < 2) {
                report(make_diagnostic("P-003", "a variation point needs at least two alternatives", {vp.id},
                                       r.span));
                return;
            }
            const bool fresh = !model_.contains(vp.id);
            add_element(std::move(vp));
            if (fresh)
                model_.add_relation(std::move(r));
            return;
        }
        fail("mandatory, optional, orgroup, alternative, refines_goal or '}'");
    }

    std::vector<ElementId> parse_id_list()
    {
        expect(Tok::LBrace);
        std::vector<ElementId> ids;
        ids.push_back(expect_id());
        while (!at(Tok::RBrace))
            ids.push_back(expect_id());
        take();
        return ids;
    }

    void parse_cross_relation(RelationKind kind)
    {
        const Token& start = take();
        Relation r;
        r.kind = kind;
        r.source = expect_id();
        expect(Tok::Arrow);
        r.targets.push_back(expect_id());
        r.span = span_from(start);
        model_.add_relation(std::move(r));
    }

    void parse_requirement(ElementKind kind)
    {
        const Token& start = take();
        Element e;
        e.kind = kind;
        e.id = expect_id();
        e.name = expect_string();
        expect_word("on");
        RequirementBody body;
        body.owner = e.id;
        body.target = expect_id();
        if (at_word("attr")) {
            take();
            AttributeBound b;
            b.attribute = expect_token();
            const Token& cmp = peek();
            switch (cmp.kind) {
            case Tok::Le: b.comparator = Comparator::Le; break;
            case Tok::Ge: b.comparator = Comparator::Ge; break;
            case Tok::EqEq: b.comparator = Comparator::Eq; break;
            case Tok::Lt: b.comparator = Comparator::Lt; break;
            case Tok::Gt: b.comparator = Comparator::Gt; break;
            default:
                if (at_word("in"))
                    b.comparator = Comparator::InRange;
                else
                    fail("comparator (<=, >=, ==, <, > or in)");
            }
            take();
            b.low = expect_number();
            b.high = b.low;
            if (b.comparator == Comparator::InRange) {
                expect(Tok::DotDot);
                b.high = expect_number();
            }
            if (auto u = optional_unit())
                b.unit = *u;
            if (b.low > b.high)
                report(make_diagnostic("P-003", "range lower bound exceeds upper bound", {e.id}, span_from(cmp)));
            body.bound = std::move(b);
        }
        e.properties = parse_props_if_present(e.id);
        body.rationale = text_property(e.properties, "rationale");
        e.span = span_from(start);
        body.span = e.span;

        Relation r;
        r.kind = RelationKind::Constrains;
        r.source = e.id;
        r.targets.push_back(body.target);
        r.span = e.span;
        const bool fresh = !model_.contains(e.id);
        add_element(std::move(e));
        if (fresh) {
            model_.add_requirement(std::move(body));
            model_.add_relation(std::move(r));
        }
    }

    void parse_block()
    {
        const Token& start = take();
        Element e;
        e.kind = ElementKind::Block;
        e.id = expect_id();
        e.name = expect_string();
        expect_word("level");
        e.level = expect_level();
        e.properties = parse_props_if_present(e.id);
        e.span = span_from(start);
        const ElementId owner = e.id;
        add_element(std::move(e));
        if (!at(Tok::LBrace))
            return;
        take();
        while (!at(Tok::RBrace)) {
            const Token& item = peek();
            if (at_word("variant")) {
                take();
                Element v;
                v.kind = ElementKind::Variant;
                v.id = expect_id();
                v.name = expect_string();
                v.owner = owner;
                v.properties = parse_props_if_present(v.id);
                v.span = span_from(item);
                add_element(std::move(v));
            } else if (at_word("kbref")) {
                take();
                Relation r;
                r.kind = RelationKind::KbRef;
                r.source = owner;
                r.targets.push_back(expect_id());
                r.span = span_from(item);
                model_.add_relation(std::move(r));
            } else {
                fail("variant, kbref or '}'");
            }
        }
        take();
    }

    void parse_effect()
    {
        const Token& start = take();
        Relation r;
        r.kind = RelationKind::Effect;
        r.source = expect_id();
        expect(Tok::Arrow);
        r.targets.push_back(expect_id());
        r.label = expect_string();
        r.span = span_from(start);
        model_.add_relation(std::move(r));
    }

    void parse_channel()
    {
        const Token& start = take();
        Relation r;
        r.kind = RelationKind::ChannelLink;
        r.source = expect_id();
        expect(Tok::BiArrow);
        r.targets.push_back(expect_id());
        r.label = expect_string();
        r.properties = parse_props_if_present(r.source);
        r.span = span_from(start);
        model_.add_relation(std::move(r));
    }

    void parse_contains()
    {
        const Token& start = take();
        const ElementId parent = expect_id();
        const auto children = parse_id_list();
        const auto span = span_from(start);
        for (const auto& child : children) {
            Relation r;
            r.kind = RelationKind::Contains;
            r.source = parent;
            r.targets.push_back(child);
            r.span = span;
            model_.add_relation(std::move(r));
        }
    }

    void parse_allocate()
    {
        const Token& start = take();
        Relation r;
        r.kind = RelationKind::Allocate;
        r.source = expect_id();
        expect(Tok::Arrow);
        r.targets.push_back(expect_id());
        r.span = span_from(start);
        model_.add_relation(std::move(r));
    }

    void parse_entry()
    {
        const Token& start = take();
        Element e;
        e.kind = ElementKind::KnowledgeEntry;
        e.id = expect_id();
        e.name = expect_string();
        expect_word("type");
        KnowledgeInfo info;
        info.type = expect_token();
        expect_word("year");
        info.year = static_cast<int>(expect_nat());
        e.knowledge = info;
        e.properties = parse_props_if_present(e.id);
        e.span = span_from(start);
        add_element(std::move(e));
    }

    std::vector<Token> tokens_;
    std::string file_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    const Token* last_ = nullptr;
    Model model_;
    std::vector<Diagnostic> diagnostics_;
};

} // namespace

bool is_reserved_word(std::string_view word) noexcept { return one_of(reserved_words, word); }

ParseResult parse(std::string_view source, std::string_view file) { return Parser(source, file).run(); }

ParseResult parse_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

} // namespace imog
