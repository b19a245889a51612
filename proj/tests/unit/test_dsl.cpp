#include "imog/dsl.hpp"
#include "imog/errors.hpp"

#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace imog;

namespace {

std::vector<std::string> codes(const ParseResult& r)
{
    std::vector<std::string> out;
    for (const auto& d : r.diagnostics)
        out.push_back(d.code);
    return out;
}

} // namespace

TEST_SUITE("dsl") {

TEST_CASE("numbers print back exactly")
{
    CHECK(format_number(25) == "25");
    CHECK(format_number(-10) == "-10");
    CHECK(format_number(0.45) == "0.45");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e21) == "1000000000000000000000");
    for (double v : {0.1, 1.0 / 3.0, 123456.789, -0.000125, 6.02e23, 5e-7}) {
        const std::string s = format_number(v);
        CHECK(s.find('e') == std::string::npos);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("empty model")
{
    const auto r = parse("model \"Empty\" { }");
    REQUIRE(r.ok());
    CHECK(r.model->name() == "Empty");
    CHECK(r.model->elements().empty());
    CHECK(print(*r.model) == "model \"Empty\" {\n}\n");
    CHECK(print(Model("x")) == "model \"x\" {\n}\n");
}

TEST_CASE("fixture parses and prints canonically")
{
    const Model m = fx::model("fixtures/escooter.imog");
    CHECK(m.name() == "E-Scooter");
    CHECK(m.find(ElementId("F_root"))->name == "Providing mobility with an e-scooter");
    const std::string once = print(m);
    const auto again = parse(once);
    REQUIRE(again.ok());
    CHECK(structurally_equal(m, *again.model));
    CHECK(print(*again.model) == once);
}

TEST_CASE("spans point at the declaration")
{
    const auto r = parse("model \"m\" {\n  functional {\n    feature F_a \"A\"\n  }\n}\n", "m.imog");
    REQUIRE(r.ok());
    const auto& span = *r.model->find(ElementId("F_a"))->span;
    CHECK(span.file == "m.imog");
    CHECK(span.start_line == 3);
    CHECK(span.start_col == 5);
}

TEST_CASE("string escapes")
{
    const auto r = parse(R"(model "a \"b\" \\ c\nd" { })");
    REQUIRE(r.ok());
    CHECK(r.model->name() == "a \"b\" \\ c\nd");
}

TEST_CASE("P-001 syntax error with recovery at the next statement")
{
    const auto text = fx::read("fixtures/corrupt.imog");
    const auto r = parse(text, "corrupt.imog");
    CHECK_FALSE(r.ok());
    CHECK(codes(r) == std::vector<std::string>{"P-001", "P-001"});
    CHECK(r.diagnostics[0].span->start_line == 5);
    CHECK(r.diagnostics[1].span->start_line == 6);
    // everything after the bad statements is still recovered
    CHECK(r.partial.contains(ElementId("F_root")));
    CHECK(r.partial.contains(ElementId("F_b")));
    CHECK(r.partial.contains(ElementId("B_x")));
    CHECK(r.partial.relations().size() == 2);
}

TEST_CASE("recovery at a section keyword")
{
    const auto r = parse("model \"m\" {\n functional { feature F_a \"A\" { mandatory } \n structural { block B \"B\" level system }\n}");
    CHECK_FALSE(r.ok());
    CHECK(r.partial.contains(ElementId("B")));
}

TEST_CASE("P-001 for lexical garbage and reserved ids")
{
    CHECK(codes(parse("model \"m\" { functional { feature F_a \"unterminated }")).front() == "P-001");
    CHECK(codes(parse("model \"m\" { functional { feature F_a \"A\" $ } }")).front() == "P-001");
    CHECK(codes(parse("model \"m\" { functional { feature block \"A\" } }")).front() == "P-001");
    CHECK(codes(parse("")).front() == "P-001");
    CHECK(codes(parse("model \"m\" { } model \"n\" { }")).front() == "P-001");
    CHECK(codes(parse("model \"m\" { functional { feature F_a \"A\" } ")).front() == "P-001");
}

TEST_CASE("P-002 duplicate id across perspectives")
{
    const auto r = parse("model \"m\" { functional { feature X \"A\" } structural { block X \"B\" level system } }");
    CHECK(codes(r) == std::vector<std::string>{"P-002"});
    CHECK(r.partial.find(ElementId("X"))->kind == ElementKind::Feature);
}

TEST_CASE("P-003 bad cardinality and group sizes")
{
    const auto r = parse(fx::read("fixtures/bad_cardinality.imog"));
    CHECK(codes(r) == std::vector<std::string>{"P-003"});
    CHECK(codes(parse("model \"m\" { functional { feature F \"F\" { orgroup [0..1] { A B } } feature A \"A\" feature B \"B\" } }")) ==
          std::vector<std::string>{"P-003"});
    CHECK(codes(parse("model \"m\" { functional { feature F \"F\" { orgroup [1..3] { A B } } feature A \"A\" feature B \"B\" } }")) ==
          std::vector<std::string>{"P-003"});
    CHECK(codes(parse("model \"m\" { functional { feature F \"F\" { alternative V \"V\" { A } } feature A \"A\" } }")) ==
          std::vector<std::string>{"P-003"});
    CHECK(codes(parse("model \"m\" { quality { requirement R \"R\" on F attr t in 5 .. 1 degC } }")) ==
          std::vector<std::string>{"P-003"});
}

TEST_CASE("P-004 property redefined")
{
    const auto r = parse("model \"m\" { strategy { goal G \"G\" { a: 1, a: 2 } } }");
    CHECK(codes(r) == std::vector<std::string>{"P-004"});
}

TEST_CASE("requirement bodies")
{
    const Model m = fx::model("fixtures/escooter.imog");
    const auto* temp = m.requirement_of(ElementId("R_cell_temp"));
    REQUIRE(temp);
    CHECK(temp->target == ElementId("B_battery"));
    CHECK(temp->bound->comparator == Comparator::InRange);
    CHECK(temp->bound->low == -10);
    CHECK(temp->bound->high == 45);
    CHECK(temp->bound->unit == "degC");
    const auto* weight = m.requirement_of(ElementId("R_weight"));
    CHECK(weight->rationale == "carried up stairs by one person");
    CHECK_FALSE(m.requirement_of(ElementId("R_design"))->bound.has_value());
    CHECK(m.requirement_of(ElementId("R_speed"))->bound->unit == "km/h");
    CHECK(m.find(ElementId("C_frame_width"))->kind == ElementKind::Constraint);
}

TEST_CASE("reserved words")
{
    CHECK(is_reserved_word("feature"));
    CHECK(is_reserved_word("orgroup"));
    CHECK_FALSE(is_reserved_word("F_root"));
}

TEST_CASE("parse_file")
{
    CHECK_THROWS_AS(parse_file(fx::path("fixtures/does_not_exist.imog")), IoFailure);
    const auto r = parse_file(fx::path("fixtures/escooter.imog"));
    REQUIRE(r.ok());
    CHECK(r.model->find(ElementId("F_root"))->span->file == fx::path("fixtures/escooter.imog"));
}

TEST_CASE("generated models round trip")
{
    gen::Rng rng(7);
    for (int i = 0; i < 150; ++i) {
        const Model m = gen::printable_model(rng);
        const std::string text = print(m);
        const auto r = parse(text);
        INFO(text);
        REQUIRE(r.ok());
        CHECK(structurally_equal(m, *r.model));
        CHECK(print(*r.model) == text);
    }
}

}
