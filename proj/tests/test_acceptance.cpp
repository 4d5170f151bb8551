// Acceptance suite: every criterion below prints one PASS/FAIL line; the
// binary fails if any criterion fails.  All tolerances are exact.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <queue>
#include <random>
#include <sstream>

#include <heegaard/json_io.hpp>

using namespace heegaard;

namespace {

const Basis F3_basis{{"x", "y", "z"}};
const Basis F2_basis{{"x", "y"}};
const char* kD1 = "(x^-1 y)^2 (x y^-1) (x z^-1)^2 (x^-1 z)";
const char* kD2 = "(z y^-1)^2 (z^-1 y) (z^-1 x)^2 (z x^-1)";
const char* kLambda = "(y^-1 x) (y^-1 z)^2 (x^-1 z) (x^-1 y)^2 (z^-1 y) (z^-1 x)^2";

struct Criterion {
    int number;
    std::string title;
    bool pass = true;
    std::vector<std::string> details;

    Criterion(int n, std::string t) : number(n), title(std::move(t)) {}
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back(what);
        }
    }
    ~Criterion() {
        printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", number, title.c_str());
        for (const auto& d : details) printf("       %s\n", d.c_str());
        fflush(stdout);
        CHECK_MESSAGE(pass, title);
    }
};

CyclicWord cw(const std::string& s, const Basis& b) { return CyclicWord(parse_word(s, b)); }

std::vector<Letter> canon_key(const CyclicWord& w) {
    std::vector<Letter> a = w.canonical();
    std::vector<Letter> b = w.inverse().canonical();
    return std::min(a, b);
}

bool oracle_separable(const CyclicWord& start, size_t bound) {
    std::set<std::vector<Letter>> visited;
    std::queue<CyclicWord> todo;
    todo.push(start);
    visited.insert(canon_key(start));
    static const std::vector<WhiteheadMove> moves = all_moves(F2_basis);
    while (!todo.empty()) {
        CyclicWord w = todo.front();
        todo.pop();
        if (analyze(build_graph({w})).components.size() > 1) return true;
        for (const WhiteheadMove& m : moves) {
            CyclicWord next = apply_move(m, w);
            if (next.length() > bound) continue;
            auto key = canon_key(next);
            if (visited.insert(key).second) todo.push(next);
        }
    }
    return false;
}

CyclicWord rand_cyclic(std::mt19937& rng, const Basis& b, size_t len) {
    std::uniform_int_distribution<int> gen(0, b.rank() - 1);
    std::uniform_int_distribution<int> sgn(0, 1);
    while (true) {
        std::vector<Letter> ls;
        for (size_t i = 0; i < len; ++i) ls.push_back({gen(rng), sgn(rng) ? 1 : -1});
        CyclicWord w(b, ls);
        if (w.length() == len || len == 0) return w;
    }
}

WhiteheadMove rand_move(std::mt19937& rng, const Basis& b) {
    std::vector<Letter> letters;
    for (int g = 0; g < b.rank(); ++g) {
        letters.push_back({g, 1});
        letters.push_back({g, -1});
    }
    std::uniform_int_distribution<size_t> pick(0, letters.size() - 1);
    Letter a = letters[pick(rng)];
    std::vector<Letter> set_a{a};
    std::uniform_int_distribution<int> coin(0, 1);
    for (const Letter& l : letters)
        if (l != a && l != a.inverse() && coin(rng)) set_a.push_back(l);
    return make_move(a, std::move(set_a));
}

} // namespace

TEST_CASE("acceptance") {
    {
        Criterion c(1, "word generation matches the closed presentation forms exactly");
        PretzelWords w = pretzel_words({{3, 3, 3}});
        c.require(format_word(w.d1) == format_word(parse_word(kD1, F3_basis)), "D1 differs");
        c.require(format_word(w.d2) == format_word(parse_word(kD2, F3_basis)), "D2 differs");
        c.require(format_word(w.longitude) == format_word(parse_word(kLambda, F3_basis)),
                  "longitude differs");
        // the case-1 closed forms at i=j=1 specialize to the same words
        PretzelWords w2 = pretzel_words({{3, 3, 3}});
        c.require(w2.d1 == w.d1 && w2.d2 == w.d2 && w2.longitude == w.longitude,
                  "case formulas do not specialize consistently");
    }

    {
        Criterion c(2, "H1 of the exterior is Z across the (i, j) grid of all three cases");
        for (int case_tag = 1; case_tag <= 3; ++case_tag)
            for (int i = 1; i <= 3; ++i)
                for (int j = 1; j <= 3; ++j) {
                    int p = (case_tag == 1 ? 1 : -1) * (2 * i + 1);
                    int q = (case_tag == 3 ? -1 : 1) * (2 * j + 1);
                    PretzelWords w = pretzel_words({{p, 3, q}});
                    HomologyResult h = homology({w.d1, w.d2}, w.basis);
                    c.require(h.free_rank == 1 && h.torsion.empty(),
                              "H1 != Z at case " + std::to_string(case_tag) + " i=" +
                                  std::to_string(i) + " j=" + std::to_string(j));
                }
    }

    CoverContext ctx = cover_basis(F3_basis, CyclicHom(3, {1, 1, 1}), "y");
    {
        Criterion c(3, "triple cover: rank seven basis, closed lifts, weak reducibility");
        c.require(ctx.lifted.rank() == 7, "lifted rank != 7");
        c.require(ctx.lifted.names() ==
                      std::vector<std::string>{"x1", "x2", "x3", "z1", "z2", "z3", "y3"},
                  "lifted names differ");
        auto avoid3 = [&](const CyclicWord& w) {
            for (const Letter& l : w.letters())
                if (ctx.lifted.name(l.gen).back() == '3') return false;
            return true;
        };
        std::vector<std::string> names;
        std::vector<CyclicWord> lifts;
        for (auto* s : {kD1, kD2, kLambda}) {
            auto ls = lift_closed_curve(cw(s, F3_basis), ctx);
            c.require(ls.size() == 3, "curve does not lift to three closed curves");
            std::set<CyclicWord> distinct;
            for (auto& [j, w] : ls) distinct.insert(w);
            c.require(distinct.size() == 3, "lifts are not distinct");
        }
        auto d1 = lift_closed_curve(cw(kD1, F3_basis), ctx);
        auto d2 = lift_closed_curve(cw(kD2, F3_basis), ctx);
        auto lam = lift_closed_curve(cw(kLambda, F3_basis), ctx);
        c.require(avoid3(d1[3]) && avoid3(d2[3]) && avoid3(lam[3]),
                  "distinguished lifts meet a sheet-3 disk");
        for (int j = 1; j <= 3; ++j) {
            names.push_back("D1" + std::to_string(j));
            lifts.push_back(d1[j]);
        }
        for (int j = 1; j <= 3; ++j) {
            names.push_back("D2" + std::to_string(j));
            lifts.push_back(d2[j]);
        }
        auto pairs = weak_reducibility_report(ctx, names, lifts, ctx.lifted.names());
        bool found = false;
        for (const DisjointPair& p : pairs) {
            std::set<std::string> cs(p.curves.begin(), p.curves.end());
            std::set<std::string> ds(p.disks.begin(), p.disks.end());
            if (cs.count("D13") && cs.count("D23") && ds.count("x3") && ds.count("y3") &&
                ds.count("z3"))
                found = true;
        }
        c.require(found, "weak reducibility pair not reported");
    }

    auto d1_lifts = lift_closed_curve(cw(kD1, F3_basis), ctx);
    auto d2_lifts = lift_closed_curve(cw(kD2, F3_basis), ctx);
    {
        Criterion c(4, "handlebody side: diskbusting pair, separable singletons, check passes");
        Basis hbar{{"x1", "x2", "z1", "z2"}};
        auto restrict = [&](const CyclicWord& w) {
            std::vector<Letter> ls;
            for (const Letter& l : w.letters()) {
                int g = hbar.index(ctx.lifted.name(l.gen));
                c.require(g >= 0, "unexpected letter in compressed word");
                ls.push_back({g, l.sign});
            }
            return CyclicWord(hbar, ls);
        };
        CurveSystem sys;
        sys.basis = hbar;
        sys.names = {"D13", "D23"};
        sys.words = {restrict(d1_lifts[3]), restrict(d2_lifts[3])};
        SeparabilityVerdict both = decide_separability(sys);
        c.require(!both.separable(), "pair is not diskbusting");
        for (size_t i = 0; i < 2; ++i) {
            CurveSystem one;
            one.basis = hbar;
            one.names = {sys.names[i]};
            one.words = {sys.words[i]};
            SeparabilityVerdict v = decide_separability(one);
            c.require(v.separable(), "singleton not separable");
            c.require(!v.initial_analysis.valence_one_vertices.empty(),
                      "no valence-one fast-path witness");
        }
        c.require(mha_check(sys).passed(), "multi-handle check failed");
    }

    CoverCertificate cert = certify_cover_splitting({{3, 3, 3}}, 2, 1);
    {
        Criterion c(5, "compression side: check passes with the cited evidence shapes");
        c.require(cert.cbar.passed(), "compression-side check failed");
        Basis cbar{{"D11", "D12", "D21", "D22", "Dt3"}};
        int singletons_disconnected = 0, bridge_pairs = 0;
        bool yz_support_ok = false;
        for (const SubsetReport& sr : cert.cbar.subsets) {
            if (sr.curves.size() == 1) {
                if (sr.binding.separability.initial_analysis.components.size() >= 2)
                    ++singletons_disconnected;
            }
            if (sr.curves.size() == 2) {
                bool has_x3 = std::find(sr.curves.begin(), sr.curves.end(), "x3") !=
                              sr.curves.end();
                if (has_x3) {
                    for (auto [p, q] :
                         sr.binding.separability.initial_analysis.two_vertex_bridge_patterns)
                        if (cbar.name(letter_of_vertex(p).gen) == "Dt3") ++bridge_pairs;
                } else {
                    yz_support_ok = true;
                    for (const std::string& g : sr.binding.support)
                        if (g == "Dt3") yz_support_ok = false;
                }
            }
        }
        c.require(singletons_disconnected == 3, "singleton graphs not all disconnected");
        c.require(bridge_pairs == 2, "two-vertex bridge at the filling disk not found twice");
        c.require(yz_support_ok, "support of the x3-free pair does not omit the filling disk");
    }

    {
        Criterion c(6, "pipeline passes for a representative of every case, deterministically");
        c.require(cert.pass, "case 1 certificate failed");
        for (PretzelParams params : {PretzelParams{{-3, 3, 3}}, PretzelParams{{-3, 3, -3}}}) {
            CoverCertificate cc = certify_cover_splitting(params, 2, 1);
            c.require(cc.pass, "certificate failed for a case representative");
        }
        CoverCertificate again = certify_cover_splitting({{3, 3, 3}}, 2, 1);
        c.require(dump_deterministic(certificate_to_json(cert)) ==
                      dump_deterministic(certificate_to_json(again)),
                  "certificate JSON not byte-identical across runs");
    }

    {
        Criterion c(7, "separability agrees with the orbit-search oracle on short words");
        c.require(oracle_separable(cw("x", F2_basis), 8), "anchor x");
        c.require(!oracle_separable(cw("x y x^-1 y^-1", F2_basis), 8), "anchor commutator");
        c.require(!oracle_separable(cw("x x y y", F2_basis), 8), "anchor x^2 y^2");
        std::set<std::vector<Letter>> seen;
        std::vector<Letter> letters{{0, 1}, {0, -1}, {1, 1}, {1, -1}};
        size_t checked = 0;
        for (size_t len = 1; len <= 6; ++len) {
            std::vector<size_t> idx(len, 0);
            while (true) {
                std::vector<Letter> ls;
                for (size_t i : idx) ls.push_back(letters[i]);
                CyclicWord w(F2_basis, ls);
                if (w.length() == len && seen.insert(canon_key(w)).second) {
                    ++checked;
                    bool expected = oracle_separable(w, 8);
                    bool actual = decide_separability({w}).separable();
                    if (actual != expected) {
                        c.require(false, "disagreement on " + format_word(w));
                        break;
                    }
                }
                size_t p = 0;
                while (p < len && ++idx[p] == letters.size()) idx[p++] = 0;
                if (p == len) break;
            }
        }
        c.require(checked > 100, "too few words enumerated");
    }

    {
        Criterion c(8, "randomized invariant suites");
        std::mt19937 rng(2026);
        // degree and edge-count laws, 1000 systems
        for (int t = 0; t < 1000; ++t) {
            std::uniform_int_distribution<size_t> len(0, 9);
            CurveSystem s = CurveSystem::of(
                F3_basis, {rand_cyclic(rng, F3_basis, len(rng)), rand_cyclic(rng, F3_basis, len(rng))});
            WhiteheadGraph g = build_graph(s);
            if (g.edges.size() != s.total_length()) {
                c.require(false, "edge count law violated");
                break;
            }
            auto deg = g.degrees();
            std::vector<int> occ(static_cast<size_t>(2 * F3_basis.rank()), 0);
            for (const auto& w : s.words)
                for (const Letter& l : w.letters()) occ[static_cast<size_t>(vertex_of(l))]++;
            for (int v = 0; v < g.vertex_count(); ++v) {
                Letter l = letter_of_vertex(v);
                if (deg[static_cast<size_t>(v)] !=
                    occ[static_cast<size_t>(vertex_of(l))] +
                        occ[static_cast<size_t>(vertex_of(l.inverse()))]) {
                    c.require(false, "degree law violated");
                    break;
                }
            }
        }
        // verdict invariance under 100 random automorphisms
        for (int t = 0; t < 100; ++t) {
            std::uniform_int_distribution<size_t> len(1, 7);
            CurveSystem s = CurveSystem::of(F2_basis, {rand_cyclic(rng, F2_basis, len(rng))});
            if (s.words[0].empty()) continue;
            bool ref = decide_separability(s).separable();
            CurveSystem u = apply_move(rand_move(rng, F2_basis), s);
            if (u.words[0].empty()) continue;
            if (decide_separability(u).separable() != ref) {
                c.require(false, "verdict changed under an automorphism");
                break;
            }
        }
        // double dual recovers the fixture words up to inversion; Euler holds
        for (PretzelParams params : {PretzelParams{{3, 3, 3}}, PretzelParams{{-3, 3, 3}},
                                     PretzelParams{{-3, 3, -3}}, PretzelParams{{5, 3, 3}}}) {
            HeegaardDiagram d = pretzel_diagram(params);
            c.require(validate_diagram(d).empty(), "fixture fails validation");
            RibbonComplex rc = build_ribbon(d);
            c.require(rc.glued_euler(6) == 2 - 2 * 3, "fixture Euler count off");
            DualizeResult dd = dualize(d, d.curve_names);
            c.require(validate_diagram(dd.diagram).empty(), "dual fails validation");
            DualizeResult back = dualize(dd.diagram, dd.diagram.curve_names);
            for (const std::string& curve : d.curve_names) {
                CyclicWord orig = curve_word(d, curve);
                CyclicWord twice = curve_word(back.diagram, curve);
                c.require(twice == orig || twice == orig.inverse(),
                          "double dual does not recover " + curve);
            }
        }
        // projection of random closed lifts, 200 instances
        int done = 0;
        while (done < 200) {
            std::uniform_int_distribution<size_t> len(1, 10);
            CyclicWord w = rand_cyclic(rng, F3_basis, len(rng));
            if (w.empty() || ctx.hom.value_of_word(w.letters()) != 0) continue;
            std::uniform_int_distribution<int> sheet(1, 3);
            LiftResult r = lift_word(w, ctx, sheet(rng));
            if (!r.closed) {
                c.require(false, "closed word lifted open");
                break;
            }
            if (project_word(r.word, ctx) != w) {
                c.require(false, "projection not conjugate to the base word");
                break;
            }
            ++done;
        }
    }

    {
        Criterion c(9, "stabilized pair flagged in the lifted diagram");
        HeegaardDiagram base = pretzel_diagram({{3, 3, 3}});
        HeegaardDiagram lifted = lift_diagram(base, CyclicHom(3, {1, 1, 1}), "y");
        StabilizationReport rep = stabilization_report(lifted);
        c.require(rep.any_stabilizing(), "no intersection-one pair flagged");
        c.require(!rep.caveat.empty(), "routing-dependence caveat missing");
        c.require(cert.stabilization.any_stabilizing(),
                  "certificate does not record the stabilizing pair");
    }
}
