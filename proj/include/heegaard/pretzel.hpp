// Pretzel-knot data for the three-tangle family (p, +-3, q): component
// counts, the case presentation and longitude words, embedded diagram
// generation, and the end-to-end certification pipeline for the induced
// splitting of the 3-fold cyclic cover.
//
// Diagrams are generated, not hand-entered: the curves' crossing orders
// around the three disks are reconstructed from the words by a small
// combinatorial search (parallel-strand bundles between holes, planar
// rotation of the bundle graph, mirrored strand matching inside each
// bundle) and the result is accepted only if it validates as an embedded
// system and reproduces the input words exactly.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "factor.hpp"
#include "homology.hpp"

namespace heegaard {

struct PretzelParams {
    std::vector<int> tangles;
};

/// Number of link components of the (p1..pk) pretzel.
inline int component_count(const std::vector<int>& tangles) {
    if (tangles.empty()) throw std::invalid_argument("component_count: no tangles");
    for (int p : tangles)
        if (p == 0) throw std::invalid_argument("component_count: zero tangle");
    int even = 0;
    for (int p : tangles)
        if (p % 2 == 0) ++even;
    if (even == 0) return tangles.size() % 2 ? 1 : 2;
    return even;
}

/// Normal form of a (p, +-3, q) family member: up to tangle rotation,
/// reversal and mirror image the knot is one of
///   case 1: (2i+1, 3, 2j+1)
///   case 2: (-(2i+1), 3, 2j+1)
///   case 3: (-(2i+1), 3, -(2j+1))
struct FamilyForm {
    int case_tag = 1;
    int i = 1;
    int j = 1;
};

inline FamilyForm normalize_family(const PretzelParams& params) {
    const auto& t = params.tangles;
    if (t.size() != 3)
        throw std::invalid_argument("pretzel: the certified family has three tangles");
    for (int p : t) {
        if (p % 2 == 0 || std::abs(p) < 3)
            throw std::invalid_argument("pretzel: tangles must be odd with magnitude >= 3");
    }
    std::vector<std::vector<int>> variants;
    for (int r = 0; r < 3; ++r) {
        std::vector<int> v{t[static_cast<size_t>(r)], t[static_cast<size_t>((r + 1) % 3)],
                           t[static_cast<size_t>((r + 2) % 3)]};
        variants.push_back(v);
        variants.push_back({v[2], v[1], v[0]});
    }
    size_t base = variants.size();
    for (size_t k = 0; k < base; ++k)
        variants.push_back({-variants[k][0], -variants[k][1], -variants[k][2]});
    for (const auto& v : variants) {
        if (v[1] != 3) continue;
        int p = v[0], q = v[2];
        FamilyForm f;
        if (p > 0 && q > 0) f.case_tag = 1;
        else if (p < 0 && q > 0) f.case_tag = 2;
        else if (p < 0 && q < 0) f.case_tag = 3;
        else continue;  // (+, 3, -) is the reversal of case 2, found separately
        f.i = (std::abs(p) - 1) / 2;
        f.j = (std::abs(q) - 1) / 2;
        return f;
    }
    throw std::invalid_argument("pretzel: no tangle is +-3, outside the certified family");
}

struct PretzelWords {
    Basis basis{{"x", "y", "z"}};
    Word d1, d2, longitude;
};

namespace detail {

/// Meridian words of the arcs of one antiparallel twist region, propagated
/// crossing by crossing, plus the over-words of the under-passages of each
/// strand.  A and B are the meridians of the top-left (descending) and
/// top-right (ascending) arcs; positive p twists left-handed.
struct TangleData {
    Word bottom_down, bottom_up;
    std::vector<std::pair<Word, int>> down_unders, up_unders;  // (over word, sign)
};

inline TangleData twist_region(const Word& A, const Word& B, int p) {
    TangleData td;
    int k = std::abs(p);
    int eps = p > 0 ? 1 : -1;
    bool down_over_odd = p > 0;
    Word D = A, U = B;
    for (int j = 1; j <= k; ++j) {
        bool odd = (j % 2 == 1);
        if (odd == down_over_odd) {
            td.up_unders.emplace_back(D, eps);
            U = eps > 0 ? conjugate(U, D) : conjugate(U, invert(D));
        } else {
            td.down_unders.emplace_back(U, eps);
            D = eps > 0 ? conjugate(D, invert(U)) : conjugate(D, U);
        }
    }
    td.bottom_down = D;
    td.bottom_up = U;
    return td;
}

/// The 0-framed longitude of the pretzel knot whose twist vector is
/// (p1, p2, p3) under the generator dictionary fitted to the presentation:
/// generator t of the basis is the meridian of the top arc feeding tangle
/// t+1.  Derived by walking the knot and collecting the over-meridians of
/// its under-passages; validated against the (3,3,3) closed form
/// and by meridian-commutation in finite symmetric quotients.
inline Word derive_longitude(const Basis& basis, const std::vector<int>& ps) {
    int k = static_cast<int>(ps.size());
    std::vector<TangleData> data;
    for (int t = 0; t < k; ++t) {
        Word A(basis, {Letter{(t + k - 1) % k, 1}});
        Word B(basis, {Letter{t, 1}});
        data.push_back(twist_region(A, B, ps[static_cast<size_t>(t)]));
    }
    Word lam(basis, {});
    int writhe = 0;
    int t = 1;  // basepoint on the arc of generator 0
    for (int step = 0; step < 2 * k; ++step) {
        bool down = step % 2 == 0;
        const TangleData& td = data[static_cast<size_t>(t)];
        if (down) {
            for (const auto& [w, e] : td.down_unders) {
                lam = concat(lam, e > 0 ? invert(w) : w);
                writhe += e;
            }
        } else {
            for (auto it = td.up_unders.rbegin(); it != td.up_unders.rend(); ++it) {
                lam = concat(lam, it->second > 0 ? invert(it->first) : it->first);
                writhe += it->second;
            }
        }
        t = (t + 1) % k;
    }
    Word base(basis, {Letter{0, 1}});
    lam = concat(lam, power(base, writhe));
    CyclicWord c(lam);
    return Word(basis, c.letters());
}

} // namespace detail

/// The case presentation words and the longitude.
inline PretzelWords pretzel_words(const PretzelParams& params) {
    FamilyForm f = normalize_family(params);
    PretzelWords out;
    const Basis& b = out.basis;
    auto blk = [&](const std::string& s, int n) {
        return power(parse_word(s, b), n);
    };
    auto cat = [&](std::initializer_list<Word> ws) {
        Word r(b, {});
        for (const Word& w : ws) r = concat(r, w);
        return r;
    };
    int i = f.i, j = f.j;
    switch (f.case_tag) {
        case 1:
            out.d1 = cat({blk("x^-1 y", i + 1), blk("x y^-1", i), blk("x z^-1", 2), blk("x^-1 z", 1)});
            out.d2 = cat({blk("z y^-1", j + 1), blk("z^-1 y", j), blk("z^-1 x", 2), blk("z x^-1", 1)});
            out.longitude = cat({blk("y^-1 x", i), blk("y^-1 z", j + 1), blk("x^-1 z", 1),
                                 blk("x^-1 y", i + 1), blk("z^-1 y", j), blk("z^-1 x", 2)});
            break;
        case 2:
            out.d1 = cat({blk("y^-1 x", i), blk("y x^-1", i + 1), blk("x z^-1", 2), blk("x^-1 z", 1)});
            out.d2 = cat({blk("z y^-1", j + 1), blk("z^-1 y", j), blk("z^-1 x", 2), blk("z x^-1", 1)});
            out.longitude = detail::derive_longitude(b, {3, -(2 * i + 1), 2 * j + 1});
            break;
        case 3:
            out.d1 = cat({blk("y^-1 x", i), blk("y x^-1", i + 1), blk("x z^-1", 2), blk("x^-1 z", 1)});
            out.d2 = cat({blk("y z^-1", j), blk("y^-1 z", j + 1), blk("z^-1 x", 2), blk("z x^-1", 1)});
            out.longitude = detail::derive_longitude(b, {3, -(2 * i + 1), -(2 * j + 1)});
            break;
    }
    // the exterior of any family member is a homology circle and its
    // longitude is null-homologous there
    HomologyResult h = homology({out.d1, out.d2}, b);
    if (h.free_rank != 1 || !h.torsion.empty())
        throw std::logic_error("pretzel_words: presentation does not abelianize to Z");
    AbelianVector la = abelianize(out.longitude);
    if (la[0] + la[1] + la[2] != 0)
        throw std::logic_error("pretzel_words: longitude is not null-homologous");
    return out;
}

// ---- diagram layout engine ----------------------------------------------------

namespace layout {

struct PassageInfo {
    int curve = 0, pos = 0, sign = 1, disk = 0;
    int plus_arc = 0, minus_arc = 0;
};

struct ArcInfo {
    int hole_a = 0, hole_b = 0;          // hole = 2*disk + side
    int passage_a = 0, passage_b = 0;    // the endpoints' passages
    int bundle = -1;
};

struct Problem {
    std::vector<std::string> curve_names;
    std::vector<std::vector<Letter>> words;
    std::vector<PassageInfo> passages;                 // global ids
    std::vector<ArcInfo> arcs;
    std::vector<std::vector<int>> by_disk;             // passage ids per disk
    std::vector<std::pair<int, int>> bundle_holes;     // per bundle
    std::vector<int> bundle_size;
    std::vector<std::vector<int>> hole_bundles;        // per hole, sorted
    int rank = 3;
};

inline int hole_id(int disk, int side) { return 2 * disk + side; }

inline Problem build_problem(const std::vector<std::string>& names,
                             const std::vector<Word>& words, int rank) {
    Problem pr;
    pr.rank = rank;
    pr.by_disk.resize(static_cast<size_t>(rank));
    std::map<std::pair<int, int>, int> bundle_ids;
    for (size_t c = 0; c < words.size(); ++c) {
        pr.curve_names.push_back(names[c]);
        pr.words.push_back(words[c].letters());
        const auto& ls = words[c].letters();
        size_t L = ls.size();
        size_t pbase = pr.passages.size();
        for (size_t t = 0; t < L; ++t) {
            PassageInfo p;
            p.curve = static_cast<int>(c);
            p.pos = static_cast<int>(t);
            p.sign = ls[t].sign;
            p.disk = ls[t].gen;
            pr.passages.push_back(p);
            pr.by_disk[static_cast<size_t>(p.disk)].push_back(static_cast<int>(pbase + t));
        }
        size_t abase = pr.arcs.size();
        for (size_t t = 0; t < L; ++t) {
            const Letter& a = ls[t];
            const Letter& b = ls[(t + 1) % L];
            ArcInfo arc;
            arc.passage_a = static_cast<int>(pbase + t);
            arc.passage_b = static_cast<int>(pbase + (t + 1) % L);
            arc.hole_a = hole_id(a.gen, a.sign > 0 ? 0 : 1);  // departure side
            arc.hole_b = hole_id(b.gen, b.sign > 0 ? 1 : 0);  // arrival side
            if (arc.hole_a == arc.hole_b)
                throw std::invalid_argument("layout: same-hole arc, outside the engine's family");
            std::pair<int, int> key{std::min(arc.hole_a, arc.hole_b),
                                    std::max(arc.hole_a, arc.hole_b)};
            auto it = bundle_ids.find(key);
            if (it == bundle_ids.end()) {
                it = bundle_ids.emplace(key, static_cast<int>(pr.bundle_holes.size())).first;
                pr.bundle_holes.push_back(key);
                pr.bundle_size.push_back(0);
            }
            arc.bundle = it->second;
            pr.bundle_size[static_cast<size_t>(it->second)]++;
            pr.arcs.push_back(arc);
        }
        for (size_t t = 0; t < L; ++t) {
            PassageInfo& p = pr.passages[pbase + t];
            int arc_in = static_cast<int>(abase + (t + L - 1) % L);
            int arc_out = static_cast<int>(abase + t);
            if (p.sign > 0) {
                p.plus_arc = arc_out;   // departs on the plus side
                p.minus_arc = arc_in;
            } else {
                p.plus_arc = arc_in;    // arrives on the plus side
                p.minus_arc = arc_out;
            }
        }
    }
    pr.hole_bundles.resize(static_cast<size_t>(2 * rank));
    for (size_t b = 0; b < pr.bundle_holes.size(); ++b) {
        pr.hole_bundles[static_cast<size_t>(pr.bundle_holes[b].first)].push_back(
            static_cast<int>(b));
        pr.hole_bundles[static_cast<size_t>(pr.bundle_holes[b].second)].push_back(
            static_cast<int>(b));
    }
    return pr;
}

/// Arcs of one hole pair need not form a single parallel family: an
/// embedded system may separate them into several families that attach as
/// disjoint blocks.  A split plan fixes the family count and sizes per
/// bundle; the engine searches plans with few extra families first.
struct Families {
    std::vector<int> family_bundle;              // family -> bundle
    std::vector<int> family_size;
    std::vector<std::pair<int, int>> family_holes;
    std::vector<std::vector<int>> hole_families;  // per hole
};

inline Families make_families(const Problem& pr, const std::vector<std::vector<int>>& sizes) {
    Families f;
    for (size_t b = 0; b < pr.bundle_holes.size(); ++b)
        for (int sz : sizes[b]) {
            f.family_bundle.push_back(static_cast<int>(b));
            f.family_size.push_back(sz);
            f.family_holes.push_back(pr.bundle_holes[b]);
        }
    f.hole_families.resize(pr.hole_bundles.size());
    for (size_t fam = 0; fam < f.family_bundle.size(); ++fam) {
        f.hole_families[static_cast<size_t>(f.family_holes[fam].first)].push_back(
            static_cast<int>(fam));
        f.hole_families[static_cast<size_t>(f.family_holes[fam].second)].push_back(
            static_cast<int>(fam));
    }
    return f;
}

/// All cyclic orders of a set, first element pinned (cyclic representative).
inline std::vector<std::vector<int>> cyclic_orders(const std::vector<int>& items) {
    if (items.empty()) return {{}};
    std::vector<int> rest(items.begin() + 1, items.end());
    std::sort(rest.begin(), rest.end());
    std::vector<std::vector<int>> out;
    do {
        std::vector<int> o{items[0]};
        o.insert(o.end(), rest.begin(), rest.end());
        out.push_back(o);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

/// Does the rotation system embed the family graph in the sphere?
/// Each hole's stored rotation is its counterclockwise family order.
inline bool rotation_planar(const Families& fams, const std::vector<std::vector<int>>& rot) {
    size_t nf = fams.family_bundle.size();
    if (nf == 0) return true;
    std::vector<int> next_rot(2 * nf, -1);
    std::vector<int> tail(2 * nf, -1);
    for (size_t b = 0; b < nf; ++b) {
        tail[2 * b] = fams.family_holes[b].first;
        tail[2 * b + 1] = fams.family_holes[b].second;
    }
    for (size_t h = 0; h < rot.size(); ++h) {
        const auto& order = rot[h];
        for (size_t k = 0; k < order.size(); ++k) {
            int b = order[k], b2 = order[(k + 1) % order.size()];
            int dart = fams.family_holes[static_cast<size_t>(b)].first == static_cast<int>(h)
                           ? 2 * b
                           : 2 * b + 1;
            int dart2 = fams.family_holes[static_cast<size_t>(b2)].first == static_cast<int>(h)
                            ? 2 * b2
                            : 2 * b2 + 1;
            next_rot[static_cast<size_t>(dart)] = dart2;
        }
    }
    std::vector<bool> seen(2 * nf, false);
    size_t faces = 0;
    for (size_t s = 0; s < 2 * nf; ++s) {
        if (seen[s]) continue;
        ++faces;
        size_t d = s;
        while (!seen[d]) {
            seen[d] = true;
            d = static_cast<size_t>(next_rot[d ^ 1]);
        }
    }
    std::map<int, int> comp;
    int ncomp = 0;
    for (size_t h = 0; h < fams.hole_families.size(); ++h) {
        if (fams.hole_families[h].empty() || comp.count(static_cast<int>(h))) continue;
        std::vector<int> stack{static_cast<int>(h)};
        comp[static_cast<int>(h)] = ncomp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int b : fams.hole_families[static_cast<size_t>(u)]) {
                int v = fams.family_holes[static_cast<size_t>(b)].first == u
                            ? fams.family_holes[static_cast<size_t>(b)].second
                            : fams.family_holes[static_cast<size_t>(b)].first;
                if (!comp.count(v)) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
            }
        }
        ++ncomp;
    }
    long V = static_cast<long>(comp.size());
    long E = static_cast<long>(nf);
    return V - E + static_cast<long>(faces) == 2L * ncomp;
}

struct Layout {
    // per disk: slot -> passage id
    std::vector<std::vector<int>> slots;
};

/// Solve the slot assignment for one family rotation system.
inline std::optional<Layout> assign_slots(const Problem& pr, const Families& fams,
                                          const std::vector<std::vector<int>>& rot) {
    int rank = pr.rank;
    struct DiskPlan {
        std::vector<int> plus_family_of_slot;
        std::vector<int> minus_family_of_slot;
    };

    auto plus_bundle = [&](int p) {
        return pr.arcs[static_cast<size_t>(pr.passages[static_cast<size_t>(p)].plus_arc)].bundle;
    };
    auto minus_bundle = [&](int p) {
        return pr.arcs[static_cast<size_t>(pr.passages[static_cast<size_t>(p)].minus_arc)].bundle;
    };

    std::vector<std::vector<DiskPlan>> plans(static_cast<size_t>(rank));
    for (int g = 0; g < rank; ++g) {
        const auto& ps = pr.by_disk[static_cast<size_t>(g)];
        size_t m = ps.size();
        if (m == 0) { plans[static_cast<size_t>(g)].push_back({}); continue; }
        std::map<std::pair<int, int>, int> type_count;  // (plus bundle, minus bundle)
        for (int p : ps) type_count[{plus_bundle(p), minus_bundle(p)}]++;
        // plus blocks laid out from slot 0 in rotation order of the plus hole
        std::vector<int> plus_of(m, -1);
        {
            size_t s = 0;
            for (int fam : rot[static_cast<size_t>(hole_id(g, 0))])
                for (int r = 0; r < fams.family_size[static_cast<size_t>(fam)]; ++r) {
                    if (s >= m) return std::nullopt;
                    plus_of[s++] = fam;
                }
            if (s != m) return std::nullopt;
        }
        std::vector<int> minus_cycle;
        for (int fam : rot[static_cast<size_t>(hole_id(g, 1))])
            for (int r = 0; r < fams.family_size[static_cast<size_t>(fam)]; ++r)
                minus_cycle.push_back(fam);
        if (minus_cycle.size() != m) return std::nullopt;
        std::reverse(minus_cycle.begin(), minus_cycle.end());
        for (size_t off = 0; off < m; ++off) {
            std::vector<int> minus_of(m);
            for (size_t s = 0; s < m; ++s) minus_of[s] = minus_cycle[(s + off) % m];
            std::map<std::pair<int, int>, int> have;
            for (size_t s = 0; s < m; ++s)
                have[{fams.family_bundle[static_cast<size_t>(plus_of[s])],
                      fams.family_bundle[static_cast<size_t>(minus_of[s])]}]++;
            if (have == type_count) {
                DiskPlan plan;
                plan.plus_family_of_slot = plus_of;
                plan.minus_family_of_slot = minus_of;
                plans[static_cast<size_t>(g)].push_back(plan);
            }
        }
        if (plans[static_cast<size_t>(g)].empty()) return std::nullopt;
    }

    std::vector<size_t> pick(static_cast<size_t>(rank), 0);
    while (true) {
        std::vector<std::vector<int>> slot_passage(static_cast<size_t>(rank));
        std::vector<int> passage_slot(pr.passages.size(), -1);
        for (int g = 0; g < rank; ++g)
            slot_passage[static_cast<size_t>(g)].assign(
                pr.by_disk[static_cast<size_t>(g)].size(), -1);

        auto family_of_slot = [&](int g, int s, int side) {
            const DiskPlan& plan = plans[static_cast<size_t>(g)][pick[static_cast<size_t>(g)]];
            return side == 0 ? plan.plus_family_of_slot[static_cast<size_t>(s)]
                             : plan.minus_family_of_slot[static_cast<size_t>(s)];
        };

        // slots of one family block at (disk, side), in the hole's
        // counterclockwise order; minus holes wind against the slot order
        auto block_slots = [&](int g, int side, int family) {
            const DiskPlan& plan = plans[static_cast<size_t>(g)][pick[static_cast<size_t>(g)]];
            const auto& of = side == 0 ? plan.plus_family_of_slot : plan.minus_family_of_slot;
            size_t m = of.size();
            std::vector<int> run;
            size_t start = 0;
            while (start < m && !(of[start] == family && of[(start + m - 1) % m] != family))
                ++start;
            if (start == m) {
                for (size_t s = 0; s < m; ++s)
                    if (of[s] == family) run.push_back(static_cast<int>(s));
            } else {
                for (size_t k = 0; k < m && of[(start + k) % m] == family; ++k)
                    run.push_back(static_cast<int>((start + k) % m));
            }
            if (side == 1) std::reverse(run.begin(), run.end());
            return run;
        };

        std::vector<std::pair<int, int>> trail;

        std::function<bool(int, int)> place = [&](int passage, int slot) {
            int g = pr.passages[static_cast<size_t>(passage)].disk;
            auto& sp = slot_passage[static_cast<size_t>(g)];
            if (passage_slot[static_cast<size_t>(passage)] >= 0)
                return passage_slot[static_cast<size_t>(passage)] == slot;
            if (sp[static_cast<size_t>(slot)] >= 0) return sp[static_cast<size_t>(slot)] == passage;
            const PassageInfo& p = pr.passages[static_cast<size_t>(passage)];
            for (int side = 0; side < 2; ++side) {
                int fam = family_of_slot(g, slot, side);
                int arc = side == 0 ? p.plus_arc : p.minus_arc;
                if (fams.family_bundle[static_cast<size_t>(fam)] !=
                    pr.arcs[static_cast<size_t>(arc)].bundle)
                    return false;
            }
            sp[static_cast<size_t>(slot)] = passage;
            passage_slot[static_cast<size_t>(passage)] = slot;
            trail.emplace_back(passage, slot);
            for (int side = 0; side < 2; ++side) {
                int fam = family_of_slot(g, slot, side);
                int arc = side == 0 ? p.plus_arc : p.minus_arc;
                const ArcInfo& a = pr.arcs[static_cast<size_t>(arc)];
                int other_passage = a.passage_a == passage ? a.passage_b : a.passage_a;
                const PassageInfo& q = pr.passages[static_cast<size_t>(other_passage)];
                int q_side = q.plus_arc == arc ? 0 : 1;
                int g2 = q.disk;
                auto run1 = block_slots(g, side, fam);
                auto run2 = block_slots(g2, q_side, fam);
                if (run1.size() != run2.size()) return false;
                size_t k = 0;
                while (k < run1.size() && run1[k] != slot) ++k;
                if (k == run1.size()) return false;
                int partner_slot = run2[run2.size() - 1 - k];
                if (!place(other_passage, partner_slot)) return false;
            }
            return true;
        };

        std::function<bool()> solve = [&]() {
            int best_g = -1, best_s = -1;
            std::vector<int> best_cands;
            for (int g = 0; g < rank && best_g < 0; ++g) {
                const auto& sp = slot_passage[static_cast<size_t>(g)];
                for (size_t s = 0; s < sp.size(); ++s) {
                    if (sp[s] >= 0) continue;
                    std::vector<int> cands;
                    for (int p : pr.by_disk[static_cast<size_t>(g)]) {
                        if (passage_slot[static_cast<size_t>(p)] >= 0) continue;
                        int pf = family_of_slot(g, static_cast<int>(s), 0);
                        int mf = family_of_slot(g, static_cast<int>(s), 1);
                        if (fams.family_bundle[static_cast<size_t>(pf)] == plus_bundle(p) &&
                            fams.family_bundle[static_cast<size_t>(mf)] == minus_bundle(p))
                            cands.push_back(p);
                    }
                    if (best_g < 0 || cands.size() < best_cands.size()) {
                        best_g = g;
                        best_s = static_cast<int>(s);
                        best_cands = cands;
                        if (cands.empty()) break;
                    }
                }
            }
            if (best_g < 0) return true;
            if (best_cands.empty()) return false;
            for (int p : best_cands) {
                size_t mark = trail.size();
                if (place(p, best_s) && solve()) return true;
                while (trail.size() > mark) {
                    auto [tp, ts] = trail.back();
                    trail.pop_back();
                    passage_slot[static_cast<size_t>(tp)] = -1;
                    int tg = pr.passages[static_cast<size_t>(tp)].disk;
                    slot_passage[static_cast<size_t>(tg)][static_cast<size_t>(ts)] = -1;
                }
            }
            return false;
        };

        if (solve()) {
            Layout out;
            out.slots = slot_passage;
            return out;
        }

        int g = 0;
        while (g < rank) {
            if (++pick[static_cast<size_t>(g)] < plans[static_cast<size_t>(g)].size()) break;
            pick[static_cast<size_t>(g)] = 0;
            ++g;
        }
        if (g == rank) return std::nullopt;
    }
}

} // namespace layout

/// Reconstruct an embedded diagram realizing the given curves; accepted
/// only if it validates and reads back the exact words.  Split plans with
/// fewer extra families are searched first, so the result is deterministic.
inline HeegaardDiagram diagram_from_words(const Basis& basis,
                                          const std::vector<std::string>& names,
                                          const std::vector<Word>& words) {
    layout::Problem pr = layout::build_problem(names, words, basis.rank());
    size_t nb = pr.bundle_holes.size();

    auto try_families = [&](const layout::Families& fams) -> std::optional<HeegaardDiagram> {
        std::vector<std::vector<std::vector<int>>> hole_orders;
        for (size_t h = 0; h < fams.hole_families.size(); ++h)
            hole_orders.push_back(layout::cyclic_orders(fams.hole_families[h]));

        // a disk's crossing order must interleave its two holes' family
        // blocks type-consistently; discard rotation pairs with no feasible
        // interleaving before assembling global rotation systems
        for (int g = 0; g < basis.rank(); ++g) {
            auto& plus_orders = hole_orders[static_cast<size_t>(layout::hole_id(g, 0))];
            auto& minus_orders = hole_orders[static_cast<size_t>(layout::hole_id(g, 1))];
            std::map<std::pair<int, int>, int> type_count;
            for (int p : pr.by_disk[static_cast<size_t>(g)])
                type_count[{pr.arcs[static_cast<size_t>(
                                        pr.passages[static_cast<size_t>(p)].plus_arc)]
                                .bundle,
                            pr.arcs[static_cast<size_t>(
                                        pr.passages[static_cast<size_t>(p)].minus_arc)]
                                .bundle}]++;
            size_t m = pr.by_disk[static_cast<size_t>(g)].size();
            auto feasible = [&](const std::vector<int>& po, const std::vector<int>& mo) {
                std::vector<int> plus_of, minus_cycle;
                for (int fam : po)
                    for (int r = 0; r < fams.family_size[static_cast<size_t>(fam)]; ++r)
                        plus_of.push_back(fam);
                for (int fam : mo)
                    for (int r = 0; r < fams.family_size[static_cast<size_t>(fam)]; ++r)
                        minus_cycle.push_back(fam);
                if (plus_of.size() != m || minus_cycle.size() != m) return false;
                std::reverse(minus_cycle.begin(), minus_cycle.end());
                for (size_t off = 0; off < m; ++off) {
                    std::map<std::pair<int, int>, int> have;
                    for (size_t s = 0; s < m; ++s)
                        have[{fams.family_bundle[static_cast<size_t>(plus_of[s])],
                              fams.family_bundle[static_cast<size_t>(
                                  minus_cycle[(s + off) % m])]}]++;
                    if (have == type_count) return true;
                }
                return false;
            };
            std::set<size_t> keep_plus, keep_minus;
            for (size_t pi = 0; pi < plus_orders.size(); ++pi)
                for (size_t mi = 0; mi < minus_orders.size(); ++mi)
                    if (feasible(plus_orders[pi], minus_orders[mi])) {
                        keep_plus.insert(pi);
                        keep_minus.insert(mi);
                    }
            auto filter = [](std::vector<std::vector<int>>& orders, const std::set<size_t>& keep) {
                std::vector<std::vector<int>> out;
                for (size_t i : keep) out.push_back(orders[i]);
                orders = out;
            };
            filter(plus_orders, keep_plus);
            filter(minus_orders, keep_minus);
            if (plus_orders.empty() || minus_orders.empty()) return std::nullopt;
        }

        std::vector<size_t> pick(hole_orders.size(), 0);
        while (true) {
            std::vector<std::vector<int>> rot;
            for (size_t h = 0; h < hole_orders.size(); ++h)
                rot.push_back(hole_orders[h][pick[h]]);
            if (layout::rotation_planar(fams, rot)) {
                auto solved = layout::assign_slots(pr, fams, rot);
                if (solved) {
                    HeegaardDiagram d;
                    d.disk_names = basis.names();
                    for (int g = 0; g < basis.rank(); ++g)
                        d.disk_sizes.push_back(pr.by_disk[static_cast<size_t>(g)].size());
                    for (size_t c = 0; c < words.size(); ++c) {
                        std::vector<Passage> ps(words[c].length(), Passage{0, 0, 1});
                        d.curve_names.push_back(names[c]);
                        d.curves.push_back(std::move(ps));
                    }
                    for (int g = 0; g < basis.rank(); ++g) {
                        const auto& sp = solved->slots[static_cast<size_t>(g)];
                        for (size_t s = 0; s < sp.size(); ++s) {
                            const layout::PassageInfo& p =
                                pr.passages[static_cast<size_t>(sp[s])];
                            d.curves[static_cast<size_t>(p.curve)][static_cast<size_t>(p.pos)] =
                                Passage{g, static_cast<int>(s), p.sign};
                        }
                    }
                    bool ok = validate_diagram(d).empty();
                    for (size_t c = 0; ok && c < words.size(); ++c)
                        ok = curve_word(d, names[c]) == CyclicWord(words[c]);
                    if (ok) return d;
                }
            }
            size_t h = 0;
            while (h < pick.size()) {
                if (++pick[h] < hole_orders[h].size()) break;
                pick[h] = 0;
                ++h;
            }
            if (h == pick.size()) break;
        }
        return std::nullopt;
    };

    // split plans: none, then one bundle in two families, then two bundles
    std::vector<std::vector<int>> base_sizes(nb);
    for (size_t b = 0; b < nb; ++b) base_sizes[b] = {pr.bundle_size[b]};
    if (auto d = try_families(layout::make_families(pr, base_sizes))) return *d;
    for (size_t b1 = 0; b1 < nb; ++b1) {
        for (int a = 1; a < pr.bundle_size[b1]; ++a) {
            auto sizes = base_sizes;
            sizes[b1] = {a, pr.bundle_size[b1] - a};
            if (auto d = try_families(layout::make_families(pr, sizes))) return *d;
        }
    }
    for (size_t b1 = 0; b1 < nb; ++b1) {
        for (size_t b2 = b1 + 1; b2 < nb; ++b2) {
            for (int a = 1; a < pr.bundle_size[b1]; ++a) {
                for (int c = 1; c < pr.bundle_size[b2]; ++c) {
                    auto sizes = base_sizes;
                    sizes[b1] = {a, pr.bundle_size[b1] - a};
                    sizes[b2] = {c, pr.bundle_size[b2] - c};
                    if (auto d = try_families(layout::make_families(pr, sizes))) return *d;
                }
            }
        }
    }
    throw std::runtime_error("diagram_from_words: no embedded realization found");
}

/// Embedded diagram of the deformed tunnel-neighbourhood picture, with
/// curves D1, D2 and the longitude lam.
inline HeegaardDiagram pretzel_diagram(const PretzelParams& params) {
    PretzelWords w = pretzel_words(params);
    HeegaardDiagram d = diagram_from_words(w.basis, {"D1", "D2", "lam"},
                                           {w.d1, w.d2, w.longitude});
    return d;
}

// ---- the certification pipeline -------------------------------------------------

struct CoverCertificate {
    PretzelParams params;
    FamilyForm form;
    int cover_order = 3;
    int cover_slope_m = 2, cover_slope_n = 1;   // base slope is (3m)/n
    PretzelWords words;
    HomologyResult homology_result;
    CoverContext cover;
    std::vector<DisjointPair> weak_reducibility;
    StabilizationReport stabilization;
    std::vector<std::string> hbar_curves, cbar_curves;
    MhaReport hbar, cbar;
    bool pass = false;
    std::vector<std::string> notes;
};

/// Certify the induced splitting of the 3-fold cover: build the base
/// diagram, fill the boundary with the slope curve, lift, compress both
/// sides and run the multi-handle checks of the two compressed pictures.
/// The certificate passes iff the homology gate and both checks pass.
inline CoverCertificate certify_cover_splitting(const PretzelParams& params, int slope_m,
                                             int slope_n, bool parallel = false) {
    if (std::gcd(slope_m, slope_n) != 1)
        throw std::invalid_argument("pipeline: slope coordinates must be coprime");
    if (slope_n != 1)
        throw std::invalid_argument(
            "pipeline: only integer cover slopes m/1 are realizable as diagram spirals");
    CoverCertificate cert;
    cert.params = params;
    cert.form = normalize_family(params);
    cert.cover_slope_m = slope_m;
    cert.cover_slope_n = slope_n;
    if (std::abs(slope_m) < 2)
        cert.notes.push_back("cover slope |m| < 2: incompressibility is not certified for "
                             "fillings this close to the trivial one");

    cert.words = pretzel_words(params);
    const Basis& b = cert.words.basis;
    cert.homology_result = homology({cert.words.d1, cert.words.d2}, b);
    bool homology_ok = cert.homology_result.free_rank == 1 && cert.homology_result.torsion.empty();

    // base diagram; the longitude carries the filling slope, so it enters
    // the diagram under the meridian-disk spiral name Dt
    HeegaardDiagram base = diagram_from_words(
        b, {"D1", "D2", "Dt"}, {cert.words.d1, cert.words.d2, cert.words.longitude});
    HeegaardDiagram filled = attach_meridian_spiral(base, "Dt", "x", 3 * std::abs(slope_m));

    CyclicHom hom(cert.cover_order, std::vector<int>(static_cast<size_t>(b.rank()), 1));
    cert.cover = cover_basis(b, hom, "y");

    // word-level cover data
    auto d1_lifts = lift_closed_curve(CyclicWord(cert.words.d1), cert.cover);
    auto d2_lifts = lift_closed_curve(CyclicWord(cert.words.d2), cert.cover);
    std::vector<std::string> lift_names;
    std::vector<CyclicWord> lift_words;
    for (int j = 1; j <= 3; ++j) {
        lift_names.push_back("D1" + std::to_string(j));
        lift_words.push_back(d1_lifts[j]);
    }
    for (int j = 1; j <= 3; ++j) {
        lift_names.push_back("D2" + std::to_string(j));
        lift_words.push_back(d2_lifts[j]);
    }
    cert.weak_reducibility = weak_reducibility_report(cert.cover, lift_names, lift_words,
                                                      cert.cover.lifted.names());

    // diagram-level cover
    HeegaardDiagram lifted = lift_diagram(filled, hom, "y");
    {
        auto bad = validate_diagram(lifted);
        if (!bad.empty())
            throw std::logic_error("pipeline: lifted diagram invalid: " + bad.front());
    }
    cert.stabilization = stabilization_report(lifted);

    auto system_of = [](const HeegaardDiagram& d, const std::vector<std::string>& curves) {
        CurveSystem s;
        s.basis = d.disk_basis();
        for (const std::string& c : curves) {
            s.names.push_back(c);
            s.words.push_back(curve_word(d, c));
        }
        return s;
    };

    // handlebody side: compress the sheet-3 disks, keep the sheet-3 lifts
    std::string x3 = CoverContext::lift_name("x", 3);
    std::string y3 = CoverContext::lift_name("y", 3);
    std::string z3 = CoverContext::lift_name("z", 3);
    CompressResult hbar_raw = compress(lifted, {x3, y3, z3});
    cert.hbar_curves = {"D13", "D23"};
    HeegaardDiagram hbar_diag = restrict_curves(hbar_raw.diagram, cert.hbar_curves);
    {
        auto bad = validate_diagram(hbar_diag);
        if (!bad.empty())
            throw std::logic_error("pipeline: compressed handlebody diagram invalid: " +
                                   bad.front());
    }
    CurveSystem hbar_sys = system_of(hbar_diag, cert.hbar_curves);

    // compression-body side: re-cut along the lifted disk system of the
    // filled side and compress away the two sheet-3 disks
    std::vector<std::string> c_system{"D11", "D12", "D13", "D21", "D22", "D23", "Dt3"};
    DualizeResult dual = dualize(lifted, c_system);
    CompressResult cbar_raw = compress(dual.diagram, {"D13", "D23"});
    cert.cbar_curves = {x3, y3, z3};
    HeegaardDiagram cbar_diag = restrict_curves(cbar_raw.diagram, cert.cbar_curves);
    {
        auto bad = validate_diagram(cbar_diag);
        if (!bad.empty())
            throw std::logic_error("pipeline: compressed dual diagram invalid: " + bad.front());
    }
    CurveSystem cbar_sys = system_of(cbar_diag, cert.cbar_curves);

    if (parallel) {
        auto fh = std::async(std::launch::async, [&] { return mha_check(hbar_sys, false); });
        cert.cbar = mha_check(cbar_sys, false);
        cert.hbar = fh.get();
    } else {
        cert.hbar = mha_check(hbar_sys, false);
        cert.cbar = mha_check(cbar_sys, false);
    }

    if (!homology_ok) cert.notes.push_back("homology gate failed: H1 is not Z");
    cert.pass = homology_ok && cert.hbar.passed() && cert.cbar.passed();
    return cert;
}

} // namespace heegaard
