#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <heegaard/diagram.hpp>
#include <heegaard/json_io.hpp>

using namespace heegaard;

namespace {

const Basis F3_basis{{"x", "y", "z"}};
const char* kD1 = "(x^-1 y)^2 (x y^-1) (x z^-1)^2 (x^-1 z)";
const char* kD2 = "(z y^-1)^2 (z^-1 y) (z^-1 x)^2 (z x^-1)";
const char* kLambda = "(y^-1 x) (y^-1 z)^2 (x^-1 z) (x^-1 y)^2 (z^-1 y) (z^-1 x)^2";

// The transcription of the deformed tunnel-neighbourhood picture for the
// (3, 3, 3) knot: crossing order around each disk, entries are
// (curve, 1-based letter position).
struct SigmaEntry { const char* curve; int pos; };

const SigmaEntry kSigmaX[] = {{"lam", 18}, {"D1", 5}, {"lam", 11}, {"D1", 3}, {"lam", 2},
                              {"D1", 7},  {"lam", 9}, {"D1", 1},  {"D2", 8}, {"lam", 16},
                              {"D2", 12}, {"D1", 9},  {"lam", 7}, {"D1", 11}, {"D2", 10}};
const SigmaEntry kSigmaY[] = {{"D1", 4}, {"lam", 12}, {"D2", 4}, {"lam", 5}, {"D2", 6},
                              {"lam", 14}, {"D2", 2}, {"lam", 3}, {"D1", 2}, {"lam", 10},
                              {"D1", 6}, {"lam", 1}};
const SigmaEntry kSigmaZ[] = {{"lam", 6}, {"D1", 10}, {"D2", 11}, {"lam", 17}, {"D2", 9},
                              {"D1", 12}, {"lam", 8}, {"D1", 8},  {"D2", 1},  {"lam", 15},
                              {"D2", 7},  {"lam", 4}, {"D2", 3},  {"lam", 13}, {"D2", 5}};

HeegaardDiagram pretzel333_fixture() {
    HeegaardDiagram d;
    d.disk_names = {"x", "y", "z"};
    d.disk_sizes = {15, 12, 15};
    std::map<std::string, Word> words{
        {"D1", parse_word(kD1, F3_basis)},
        {"D2", parse_word(kD2, F3_basis)},
        {"lam", parse_word(kLambda, F3_basis)},
    };
    // slot of (curve, pos) on each disk
    std::map<std::pair<std::string, int>, std::pair<int, int>> slot_of;  // -> (disk, slot)
    auto feed = [&](const SigmaEntry* sigma, size_t n, int disk) {
        for (size_t s = 0; s < n; ++s)
            slot_of[{sigma[s].curve, sigma[s].pos}] = {disk, static_cast<int>(s)};
    };
    feed(kSigmaX, 15, 0);
    feed(kSigmaY, 12, 1);
    feed(kSigmaZ, 15, 2);
    for (const auto& [name, w] : words) {
        std::vector<Passage> ps;
        for (size_t t = 0; t < w.length(); ++t) {
            const Letter& l = w.letters()[t];
            auto it = slot_of.find({name, static_cast<int>(t) + 1});
            REQUIRE(it != slot_of.end());
            REQUIRE(it->second.first == l.gen);
            ps.push_back({it->second.first, it->second.second, l.sign});
        }
        d.curve_names.push_back(name);
        d.curves.push_back(std::move(ps));
    }
    return d;
}

// torus with one meridian crossing
HeegaardDiagram one_crossing_torus() {
    HeegaardDiagram d;
    d.disk_names = {"x"};
    d.disk_sizes = {1};
    d.curve_names = {"m"};
    d.curves = {{{0, 0, 1}}};
    return d;
}

// torus curve crossing the disk twice with a removable bigon
HeegaardDiagram bigon_torus() {
    HeegaardDiagram d;
    d.disk_names = {"x"};
    d.disk_sizes = {2};
    d.curve_names = {"w"};
    d.curves = {{{0, 0, 1}, {0, 1, -1}}};
    return d;
}

} // namespace

TEST_CASE("empty diagram is valid") {
    HeegaardDiagram d;
    CHECK(validate_diagram(d).empty());
}

TEST_CASE("one-crossing torus diagram") {
    HeegaardDiagram d = one_crossing_torus();
    CHECK(validate_diagram(d).empty());
    RibbonComplex rc = build_ribbon(d);
    CHECK(rc.components == 1);
    CHECK(rc.glued_euler(2) == 0);  // closed torus
    CHECK(format_word(curve_word(d, "m")) == "x");
}

TEST_CASE("bigon torus diagram reduces to zero intersections") {
    HeegaardDiagram d = bigon_torus();
    CHECK(validate_diagram(d).empty());
    CHECK(curve_word(d, "w").empty());  // x x^-1 cancels
    StabilizationReport rep = stabilization_report(d);
    CHECK(rep.bigons_removed >= 1);
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].count == 0);
    CHECK(!rep.pairs[0].stabilizing);
}

TEST_CASE("single essential crossing is flagged as stabilizing") {
    StabilizationReport rep = stabilization_report(one_crossing_torus());
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].count == 1);
    CHECK(rep.pairs[0].stabilizing);
    CHECK(!rep.caveat.empty());
}

TEST_CASE("the (3,3,3) fixture is embedded and reproduces the words") {
    HeegaardDiagram d = pretzel333_fixture();
    auto violations = validate_diagram(d);
    for (const auto& v : violations) MESSAGE(v);
    CHECK(violations.empty());

    CHECK(curve_word(d, "D1") == CyclicWord(parse_word(kD1, F3_basis)));
    CHECK(curve_word(d, "D2") == CyclicWord(parse_word(kD2, F3_basis)));
    CHECK(curve_word(d, "lam") == CyclicWord(parse_word(kLambda, F3_basis)));

    RibbonComplex rc = build_ribbon(d);
    CHECK(rc.components == 1);
    CHECK(rc.glued_euler(6) == 2 - 2 * 3);  // genus three
}

TEST_CASE("defective diagrams are reported") {
    HeegaardDiagram d = one_crossing_torus();
    d.curves[0][0].slot = 2;  // out of range
    CHECK(!validate_diagram(d).empty());

    HeegaardDiagram e = bigon_torus();
    e.curves[0][1].slot = 0;  // double crossing at slot 0, slot 1 unmatched
    auto v = validate_diagram(e);
    REQUIRE(!v.empty());
    CHECK(v[0].find("through_pairing not bijective") != std::string::npos);
}

TEST_CASE("compress drops the hole pair and splices") {
    HeegaardDiagram d = pretzel333_fixture();
    CompressResult r = compress(d, {"y"});
    CHECK(r.diagram.disk_names == std::vector<std::string>{"x", "z"});
    CHECK(r.warnings.empty());
    // letter-deletion consistency: the compressed word is the old word with
    // the y letters removed
    Basis xz{{"x", "z"}};
    std::vector<Letter> expect;
    Word d1_word = parse_word(kD1, F3_basis);
    for (const Letter& l : d1_word.letters()) {
        if (l.gen == 1) continue;
        expect.push_back({l.gen == 0 ? 0 : 1, l.sign});
    }
    CHECK(curve_word(r.diagram, "D1") == CyclicWord(xz, expect));

    CompressResult none = compress(d, {});
    CHECK(none.diagram == d);

    CompressResult all = compress(one_crossing_torus(), {"x"});
    CHECK(all.diagram.curves.empty());
    REQUIRE(all.warnings.size() == 1);
    CHECK(all.warnings[0].find("vanished") != std::string::npos);
}

TEST_CASE("dualize twice restores every curve word up to inversion") {
    HeegaardDiagram d = pretzel333_fixture();
    DualizeResult dual = dualize(d, {"D1", "D2", "lam"});
    CHECK(dual.dropped_curves.empty());
    CHECK(validate_diagram(dual.diagram).empty());
    CHECK(dual.diagram.disk_names == std::vector<std::string>{"D1", "D2", "lam"});
    CHECK(dual.diagram.curve_names == std::vector<std::string>{"x", "y", "z"});

    // arc count is preserved
    CHECK(dual.diagram.total_crossings() == d.total_crossings());

    DualizeResult back = dualize(dual.diagram, {"x", "y", "z"});
    CHECK(validate_diagram(back.diagram).empty());
    for (std::string c : {"D1", "D2", "lam"}) {
        CyclicWord orig = curve_word(d, c);
        CyclicWord twice = curve_word(back.diagram, c);
        CHECK((twice == orig || twice == orig.inverse()));
    }
}

TEST_CASE("dualize of the one-crossing torus is itself") {
    HeegaardDiagram d = one_crossing_torus();
    DualizeResult dual = dualize(d, {"m"});
    CHECK(validate_diagram(dual.diagram).empty());
    CHECK(dual.diagram.disk_names == std::vector<std::string>{"m"});
    CHECK(dual.diagram.curves[0].size() == 1);
}

TEST_CASE("meridian spiral insertion stays embedded and extends the word") {
    HeegaardDiagram d = pretzel333_fixture();
    HeegaardDiagram filled = attach_meridian_spiral(d, "lam", "x", 6);
    CHECK(validate_diagram(filled).empty());
    Word expect = concat(parse_word(kLambda, F3_basis),
                         power(parse_word("x", F3_basis), 6));
    CHECK(curve_word(filled, "lam") == CyclicWord(expect));
    CHECK(filled.disk_sizes[0] == 21);
}

TEST_CASE("diagram lift of the fixture has genus seven") {
    HeegaardDiagram d = pretzel333_fixture();
    HeegaardDiagram lifted = lift_diagram(d, CyclicHom(3, {1, 1, 1}), "y");
    auto violations = validate_diagram(lifted);
    for (const auto& v : violations) MESSAGE(v);
    CHECK(violations.empty());
    CHECK(lifted.disk_names.size() == 7);
    CHECK(lifted.curve_names.size() == 9);

    RibbonComplex rc = build_ribbon(lifted);
    CHECK(rc.glued_euler(14) == 2 - 2 * 7);

    // word-level and diagram-level lifting commute with word extraction
    CoverContext ctx = cover_basis(F3_basis, CyclicHom(3, {1, 1, 1}), "y");
    auto d1_lifts = lift_closed_curve(CyclicWord(parse_word(kD1, F3_basis)), ctx);
    for (int j = 1; j <= 3; ++j) {
        CyclicWord via_diagram = curve_word(lifted, "D1" + std::to_string(j));
        // same names in both bases
        CHECK(format_word(via_diagram) == format_word(d1_lifts[j]));
    }

    // the sheet-3 lifts use no sheet-3 disks
    for (std::string c : {"D13", "D23"}) {
        CyclicWord w = curve_word(lifted, c);
        for (const Letter& l : w.letters()) {
            std::string n = lifted.disk_names[static_cast<size_t>(l.gen)];
            CHECK(n.back() != '3');
        }
    }

    // arc counts: three sheets' worth minus the spliced tree crossings
    CHECK(lifted.total_crossings() == 3 * d.total_crossings() - 2 * d.disk_sizes[1]);
}

TEST_CASE("lift of the filled fixture flags a stabilizing pair") {
    HeegaardDiagram d = pretzel333_fixture();
    HeegaardDiagram lifted = lift_diagram(d, CyclicHom(3, {1, 1, 1}), "y");
    StabilizationReport rep = stabilization_report(lifted);
    CHECK(rep.any_stabilizing());
    bool d11_y3 = false;
    for (const auto& p : rep.pairs)
        if (p.curve == "D11" && p.disk == "y3" && p.stabilizing) d11_y3 = true;
    CHECK(d11_y3);
}

TEST_CASE("routed insertion reproduces an embedded curve") {
    HeegaardDiagram d = pretzel333_fixture();
    HeegaardDiagram base = restrict_curves(d, {"D1", "D2"});
    CHECK(validate_diagram(base).empty());
    CyclicWord lam = curve_word(d, "lam");
    HeegaardDiagram routed = route_curve(base, "lam", lam);
    CHECK(validate_diagram(routed).empty());
    CHECK(curve_word(routed, "lam") == lam);
    CHECK(curve_word(routed, "D1") == curve_word(d, "D1"));

    // an unrealizable request fails loudly: the filling curve with a single
    // meridian winding cannot avoid the presentation curves
    Basis b = d.disk_basis();
    CHECK_THROWS_AS(
        route_curve(base, "w", CyclicWord(parse_word("x y x y^-1 x^-1 y x^-1 y^-1", b))),
        std::runtime_error);
}

TEST_CASE("diagram json round trip") {
    HeegaardDiagram d = pretzel333_fixture();
    json j = diagram_to_json(d);
    HeegaardDiagram back = diagram_from_json(j);
    CHECK(validate_diagram(back).empty());
    for (const std::string& c : d.curve_names)
        CHECK(curve_word(back, c) == curve_word(d, c));
    CHECK(dump_deterministic(diagram_to_json(back)) == dump_deterministic(j));

    json bad = j;
    bad["arcs"][0]["ends"][0][1] = "nonsense";
    CHECK_THROWS_AS(diagram_from_json(bad), std::invalid_argument);
}
