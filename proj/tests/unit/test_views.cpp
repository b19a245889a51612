#include "imog/dsl.hpp"
#include "imog/errors.hpp"
#include "imog/process.hpp"
#include "imog/views.hpp"

#include "../support/fixtures.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <filesystem>

using namespace imog;

namespace {

std::vector<std::string> fixture_files()
{
    std::vector<std::string> out{"fixtures/escooter.imog", "fixtures/conflict.imog", "fixtures/seeded.imog"};
    for (const auto& e : std::filesystem::directory_iterator(fx::path("fixtures/edges")))
        out.push_back("fixtures/edges/" + e.path().filename().string());
    std::sort(out.begin() + 3, out.end());
    return out;
}

LevelSet levels_from_mask(unsigned mask)
{
    LevelSet s;
    for (unsigned i = 0; i < 3; ++i)
        if (mask >> i & 1)
            s.insert(all_levels[i]);
    return s;
}

PerspectiveSet perspectives_from_mask(unsigned mask)
{
    PerspectiveSet s;
    for (unsigned i = 0; i < 5; ++i)
        if (mask >> i & 1)
            s.insert(all_perspectives[i]);
    return s;
}

std::size_t count_lines_starting(const std::string& text, const std::string& prefix)
{
    std::size_t n = 0, pos = 0;
    while ((pos = text.find("\n" + prefix, pos)) != std::string::npos) {
        ++n;
        ++pos;
    }
    return n;
}

} // namespace

TEST_SUITE("views") {

TEST_CASE("structural context view of the fixture")
{
    const Model m = fx::model("fixtures/escooter.imog");
    const Model v = filter_view(m, {Level::Context}, {Perspective::Structural});
    CHECK(v.elements().size() == 9);
    CHECK(v.contains(ElementId("V_driver_teen")));
    CHECK_FALSE(v.contains(ElementId("B_battery")));
    CHECK(v.relations().size() == 2);
    CHECK(v.name() == m.name());
    // requirements follow their target
    const Model q = filter_view(m, {Level::System}, {Perspective::Quality, Perspective::Structural});
    CHECK(q.contains(ElementId("R_capacity")));
    CHECK_FALSE(q.contains(ElementId("R_weight")));
    CHECK(q.requirement_of(ElementId("R_capacity")) != nullptr);
    CHECK(filter_view(m, {Level::System}, {Perspective::Quality}).elements().empty());
}

TEST_CASE("unleveled elements stay in every level view")
{
    const Model m = fx::model("fixtures/escooter.imog");
    for (Level l : all_levels) {
        const Model v = filter_view(m, {l}, PerspectiveSet::all());
        CHECK(v.contains(ElementId("G_mobility")));
        CHECK(v.contains(ElementId("K_mcu")));
    }
}

TEST_CASE("knowledge references survive with the knowledge perspective")
{
    const Model m = fx::parse_ok("model \"m\" { structural { block B \"B\" level system { kbref K_ext } } }");
    CHECK(filter_view(m, LevelSet::all(), PerspectiveSet::all()).relations().size() == 1);
    CHECK(filter_view(m, LevelSet::all(), {Perspective::Structural}).relations().empty());
}

TEST_CASE("filter laws on the fixtures")
{
    for (const auto& file : fixture_files()) {
        INFO(file);
        const Model m = fx::model(file);
        for (unsigned la = 0; la < 8; ++la) {
            for (unsigned pa = 0; pa < 32; pa += 3) {
                const LevelSet A = levels_from_mask(la);
                const PerspectiveSet P = perspectives_from_mask(pa);
                const Model once = filter_view(m, A, P);
                CHECK(structurally_equal(filter_view(once, A, P), once));
                for (unsigned lb = 0; lb < 8; lb += 3) {
                    const LevelSet B = levels_from_mask(lb);
                    const PerspectiveSet Q = perspectives_from_mask(31 - pa);
                    CHECK(structurally_equal(filter_view(once, B, Q), filter_view(m, A & B, P & Q)));
                }
            }
        }
    }
}

TEST_CASE("single-level views partition the leveled elements")
{
    for (const auto& file : fixture_files()) {
        INFO(file);
        const Model m = fx::model(file);
        for (const auto& e : m.elements()) {
            if (!effective_level(m, e))
                continue;
            int seen = 0;
            for (Level l : all_levels)
                seen += filter_view(m, {l}, PerspectiveSet::all()).contains(e.id);
            CHECK(seen == 1);
        }
    }
}

TEST_CASE("views of generated models are closed")
{
    gen::Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const Model m = gen::printable_model(rng);
        const Model v = filter_view(m, levels_from_mask(static_cast<unsigned>(gen::pick(rng, 0, 7))),
                                    perspectives_from_mask(static_cast<unsigned>(gen::pick(rng, 0, 31))));
        for (const auto& r : v.relations()) {
            CHECK(v.contains(r.source));
            for (const auto& t : r.targets)
                CHECK((v.contains(t) || (!m.contains(t) && r.kind == RelationKind::KbRef) ||
                       (!m.contains(t) && !v.contains(t))));
        }
        for (const auto& b : v.requirements())
            CHECK(v.contains(b.owner));
    }
}

}

TEST_SUITE("export") {

TEST_CASE("graph export is well formed")
{
    for (const auto& file : fixture_files()) {
        INFO(file);
        const Model m = fx::model(file);
        const std::string dot = export_graph(m);
        oracle::DotChecker c(dot);
        CHECK(c.check() == "");
        CHECK(c.nodes() == m.elements().size());
        CHECK(export_graph(m) == dot);
    }
    gen::Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        const Model m = gen::printable_model(rng);
        oracle::DotChecker c(export_graph(m, {"TB", i % 2 == 0}));
        CHECK(c.check() == "");
    }
}

TEST_CASE("graph content of the fixture")
{
    const Model m = fx::model("fixtures/escooter.imog");
    const std::string dot = export_graph(m);
    oracle::DotChecker c(dot);
    REQUIRE(c.check() == "");
    const auto& labels = c.edge_labels();
    auto has = [&](const std::string& l) { return std::find(labels.begin(), labels.end(), l) != labels.end(); };
    CHECK(has("Incoming Forces"));
    CHECK(has("weight"));
    CHECK(has("<<allocate>>"));
    CHECK(has("or [1..2]"));
    CHECK(dot.find("\"V_driver_teen\" [label=\"<<Variant>>\\nV_driver_teen\\nTeenager\"") != std::string::npos);
    CHECK(dot.find("\"F_root\" [label=\"F_root\\nProviding mobility with an e-scooter\"") != std::string::npos);
    const std::string plain = export_graph(m, {"LR", false});
    oracle::DotChecker p(plain);
    CHECK(p.check() == "");
    CHECK(p.edges() + 12 == c.edges());  // ten variants, two variation points
}

TEST_CASE("requirements table")
{
    CHECK(export_requirements_table(Model("x")) == std::string(requirements_table_header) + "\n");
    const Model one = fx::parse_ok(R"(model "m" {
functional { feature F2 "F" }
quality { requirement R1 "Max weight" on F2 attr weight <= 25 kg } })");
    CHECK(export_requirements_table(one) ==
          std::string(requirements_table_header) + "\nR1,Max weight,F2,Functional,weight,<=,25,kg,\n");
    const Model m = fx::model("fixtures/escooter.imog");
    const std::string table = export_requirements_table(m);
    CHECK(table == fx::read("expected/escooter_requirements.csv"));
    CHECK_THROWS_AS(parse_requirements_table("id,name\n"), Error);
    CHECK_THROWS_AS(parse_requirements_table(std::string(requirements_table_header) + "\nR1,x\n"), Error);
}

TEST_CASE("requirements table round trip")
{
    gen::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Model m = gen::printable_model(rng);
        const auto rows = parse_requirements_table(export_requirements_table(m));
        std::vector<const RequirementBody*> bodies;
        for (const auto& b : m.requirements())
            bodies.push_back(&b);
        std::sort(bodies.begin(), bodies.end(), [](auto a, auto b) { return a->owner < b->owner; });
        REQUIRE(rows.size() == bodies.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            CHECK(rows[k].id == bodies[k]->owner.str());
            CHECK(rows[k].name == m.find(bodies[k]->owner)->name);
            CHECK(rows[k].target == bodies[k]->target.str());
            CHECK(rows[k].bound == bodies[k]->bound);
            CHECK(rows[k].rationale == bodies[k]->rationale.value_or(""));
        }
    }
}

TEST_CASE("roadmap scaffold")
{
    const std::string empty = roadmap_scaffold(Model("Nothing"));
    CHECK(count_lines_starting(empty, "## ") == 7);
    CHECK(count_lines_starting(empty, "Status: not started") == 7);

    const Model m = fx::model("fixtures/escooter.imog");
    const std::string doc = roadmap_scaffold(m);
    CHECK(doc == fx::read("expected/escooter_roadmap.md"));
    std::size_t last = 0;
    for (ProcessStep s : all_steps) {
        const auto at = doc.find(std::string(to_string(s)));
        REQUIRE(at != std::string::npos);
        CHECK(at > last);
        last = at;
    }
    const auto step4 = doc.find("## 4. Solution Space Exploration");
    CHECK(doc.find("Leader: System Architect", step4) < doc.find("## 5.", step4));

    const auto store = load(fx::path("fixtures/kb/sensors.imogkb"));
    const std::string with_store = roadmap_scaffold(m, store);
    CHECK(with_store.find("| 2031 | K_sensor_lidar |") != std::string::npos);
    CHECK(with_store.find("Stored entries: 4") != std::string::npos);
    CHECK(with_store.find("| 2026 | K_sensor_current |") == with_store.rfind("| 2026 | K_sensor_current |"));
}

}
