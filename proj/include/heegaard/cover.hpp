// n-fold cyclic covers of a handlebody presented by a free basis: lifted
// bases, word lifting along the sheet action, and the slope/filling words.
//
// Sheets are labelled 1..n.  Crossing the disk of generator g forwards
// from sheet j lands in sheet j + h(g); the n lifts of that disk are
// named g1..gn by their departure sheet.  One generator (the "tree"
// generator t, whose value must be a unit mod n) is used to join the
// sheets: the disks t1..t(n-1) are collapsed away and only tn survives,
// giving the cover basis rank n(k-1)+1.  Lift superscripts are calibrated
// so that the lift of a null-valued word avoiding every index-n disk is
// the one carrying superscript n.
#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "freegroup.hpp"

namespace heegaard {

/// Homomorphism onto Z_n given by a residue per generator.
struct CyclicHom {
    int modulus = 2;
    std::vector<int> values;  // one per base generator, reduced mod n

    CyclicHom() = default;
    CyclicHom(int n, std::vector<int> vals) : modulus(n), values(std::move(vals)) {
        if (n < 1) throw std::invalid_argument("cyclic hom: modulus must be positive");
        for (int& v : values) v = ((v % n) + n) % n;
        bool has_unit = false;
        for (int v : values)
            if (std::gcd(v, n) == 1) has_unit = true;
        if (!has_unit && n > 1)
            throw std::invalid_argument("cyclic hom: no generator maps to a unit");
    }

    int value(const Letter& l) const {
        int v = values.at(static_cast<size_t>(l.gen)) * l.sign;
        return ((v % modulus) + modulus) % modulus;
    }

    int value_of_word(const std::vector<Letter>& ls) const {
        int v = 0;
        for (const Letter& l : ls) v = (v + value(l)) % modulus;
        return v;
    }
};

struct CoverContext {
    Basis base;
    CyclicHom hom;
    int tree_gen = 0;  // index into base
    Basis lifted;      // rank n(k-1)+1

    int sheets() const { return hom.modulus; }

    /// lifted generator name for base generator g departing from sheet j
    static std::string lift_name(const std::string& base_name, int sheet) {
        return base_name + std::to_string(sheet);
    }

    bool is_tree_disk(int gen, int sheet) const {
        return gen == tree_gen && sheet != hom.modulus;
    }

    int lifted_index(int gen, int sheet) const {
        return lifted.index(lift_name(base.name(gen), sheet));
    }
};

/// Basis of the n-fold cover: every non-tree generator contributes all n
/// sheet copies, the tree generator only its sheet-n copy.
inline CoverContext cover_basis(const Basis& base, const CyclicHom& hom,
                                const std::string& tree_generator) {
    if (static_cast<int>(hom.values.size()) != base.rank())
        throw std::invalid_argument("cover_basis: hom arity mismatch");
    int tree = base.index(tree_generator);
    if (tree < 0) throw std::invalid_argument("cover_basis: unknown tree generator");
    if (std::gcd(hom.values[static_cast<size_t>(tree)], hom.modulus) != 1)
        throw std::invalid_argument("cover_basis: tree generator must map to a unit");
    CoverContext ctx;
    ctx.base = base;
    ctx.hom = hom;
    ctx.tree_gen = tree;
    std::vector<std::string> names;
    int n = hom.modulus;
    for (int g = 0; g < base.rank(); ++g) {
        if (g == tree) continue;
        for (int j = 1; j <= n; ++j) names.push_back(CoverContext::lift_name(base.name(g), j));
    }
    names.push_back(CoverContext::lift_name(base.name(tree), n));
    ctx.lifted = Basis{names};
    return ctx;
}

inline int normalize_sheet(int s, int n) { return ((s - 1) % n + n) % n + 1; }

/// A lift of a base word: closed (a cyclic word over the lifted basis) or
/// an open path ending in another sheet.
struct LiftResult {
    bool closed = false;
    CyclicWord word;     // valid when closed
    int start_sheet = 1;
    int end_sheet = 1;   // differs from start_sheet on open paths
};

namespace detail {

/// One pass of the sheet bookkeeping; collapse_tree drops the letters of
/// the eliminated tree disks.
inline LiftResult lift_letters(const std::vector<Letter>& base_letters,
                               const CoverContext& ctx, int start_sheet, bool collapse_tree) {
    int n = ctx.sheets();
    int s = normalize_sheet(start_sheet, n);
    LiftResult out;
    out.start_sheet = s;
    std::vector<Letter> lifted;
    for (const Letter& l : base_letters) {
        int h = ctx.hom.values[static_cast<size_t>(l.gen)];
        int depart = l.sign > 0 ? s : normalize_sheet(s - h, n);
        int target = l.sign > 0 ? normalize_sheet(s + h, n) : normalize_sheet(s - h, n);
        if (!(collapse_tree && ctx.is_tree_disk(l.gen, depart))) {
            int idx = ctx.lifted_index(l.gen, depart);
            if (idx < 0) throw std::logic_error("lift: missing lifted generator");
            lifted.push_back({idx, l.sign});
        }
        s = target;
    }
    out.end_sheet = s;
    out.closed = (s == out.start_sheet);
    if (out.closed) out.word = CyclicWord(ctx.lifted, std::move(lifted));
    return out;
}

} // namespace detail

/// Lift a cyclic word starting from the given sheet; open paths report
/// their end sheet instead of a word.
inline LiftResult lift_word(const CyclicWord& w, const CoverContext& ctx, int start_sheet) {
    if (w.basis() != ctx.base) throw std::invalid_argument("lift_word: wrong basis");
    return detail::lift_letters(w.letters(), ctx, start_sheet, true);
}

/// All lifts of a closed-lifting word, keyed by superscript.  Superscript j
/// denotes the lift starting in sheet j-1, so the lift avoiding the
/// index-n disks (when the word has one) is named with superscript n.
inline std::map<int, CyclicWord> lift_closed_curve(const CyclicWord& w, const CoverContext& ctx) {
    std::map<int, CyclicWord> out;
    if (ctx.hom.value_of_word(w.letters()) != 0)
        throw std::invalid_argument("lift_closed_curve: word does not lift closed");
    int n = ctx.sheets();
    for (int j = 1; j <= n; ++j) {
        LiftResult r = lift_word(w, ctx, normalize_sheet(j - 1, n));
        if (!r.closed) throw std::logic_error("lift_closed_curve: open lift of a closed word");
        out[j] = r.word;
    }
    return out;
}

/// Project a lifted cyclic word back down, reinserting the collapsed tree
/// letters from the sheet gaps.  Returns a conjugate of the base word.
///
/// The lifted basis is the Reidemeister-Schreier basis for the transversal
/// tau(s) = t^{e(s)} with e(s) * h(t) = s - 1 (mod n) and e(s) in [0, n);
/// a gap from exit sheet b to the next enter sheet a was bridged by the
/// collapsed tree path t^{e(a) - e(b)}, a *signed* exponent.
inline CyclicWord project_word(const CyclicWord& lifted, const CoverContext& ctx) {
    int n = ctx.sheets();
    int tree_h = ctx.hom.values[static_cast<size_t>(ctx.tree_gen)];
    struct Step { Letter base; int enter; int exit; };
    std::vector<Step> steps;
    for (const Letter& l : lifted.letters()) {
        const std::string& name = ctx.lifted.name(l.gen);
        int g = -1, sheet = 0;
        for (int bg = 0; bg < ctx.base.rank(); ++bg) {
            const std::string& bn = ctx.base.name(bg);
            if (name.size() > bn.size() && name.compare(0, bn.size(), bn) == 0) {
                int sh = std::stoi(name.substr(bn.size()));
                if (ctx.lifted_index(bg, sh) == l.gen) { g = bg; sheet = sh; break; }
            }
        }
        if (g < 0) throw std::invalid_argument("project_word: foreign letter");
        int h = ctx.hom.values[static_cast<size_t>(g)];
        int enter = l.sign > 0 ? sheet : normalize_sheet(sheet + h, n);
        int exit = l.sign > 0 ? normalize_sheet(sheet + h, n) : sheet;
        steps.push_back({Letter{g, l.sign}, enter, exit});
    }
    if (steps.empty()) return CyclicWord(ctx.base, {});
    int inv = n == 1 ? 0 : 0;
    for (int c = 1; c < n; ++c)
        if ((c * tree_h) % n == 1 % n) inv = c;
    auto exponent = [&](int sheet) { return ((sheet - 1) * inv) % n; };
    std::vector<Letter> base_letters;
    for (size_t i = 0; i < steps.size(); ++i) {
        base_letters.push_back(steps[i].base);
        int delta = exponent(steps[(i + 1) % steps.size()].enter) - exponent(steps[i].exit);
        for (int r = 0; r < std::abs(delta); ++r)
            base_letters.push_back(Letter{ctx.tree_gen, delta > 0 ? 1 : -1});
    }
    return CyclicWord(ctx.base, std::move(base_letters));
}

/// Slope curve on the boundary torus: cyclic reduction of
/// longitude^n * meridian^m; (m, n) must be coprime and (+-1, 0) is the
/// trivial filling.
inline CyclicWord slope_word(int m, int n, const Word& meridian, const Word& longitude) {
    if (std::gcd(m, n) != 1)
        throw std::invalid_argument("slope_word: slope coordinates must be coprime");
    if (n == 0)
        throw std::invalid_argument("slope_word: trivial filling slope 1/0");
    return CyclicWord(concat(power(longitude, n), power(meridian, m)));
}

/// Maximal disjoint pairs: subsets S_A of the curve system and S_B of the
/// lifted disks with no word of S_A using any disk of S_B.
struct DisjointPair {
    std::vector<std::string> curves;
    std::vector<std::string> disks;
};

inline std::vector<DisjointPair> weak_reducibility_report(
    const CoverContext& ctx, const std::vector<std::string>& names,
    const std::vector<CyclicWord>& curves, const std::vector<std::string>& disks) {
    if (names.size() != curves.size())
        throw std::invalid_argument("weak_reducibility_report: name/word mismatch");
    auto avoids = [&](const CyclicWord& w, const std::string& disk) {
        int di = ctx.lifted.index(disk);
        for (const Letter& l : w.letters())
            if (l.gen == di) return false;
        return true;
    };
    // each nonempty disk subset determines the maximal curve set avoiding
    // it; canonicalize each arising curve set with the full disk set its
    // members avoid, then keep the non-dominated pairs
    size_t nd = disks.size();
    std::map<std::set<std::string>, std::set<std::string>> by_curves;
    for (size_t mask = 1; mask < (size_t(1) << nd); ++mask) {
        std::set<std::string> cset;
        for (size_t c = 0; c < curves.size(); ++c) {
            bool ok = true;
            for (size_t i = 0; i < nd && ok; ++i)
                if (mask & (size_t(1) << i)) ok = avoids(curves[c], disks[i]);
            if (ok) cset.insert(names[c]);
        }
        if (cset.empty() || by_curves.count(cset)) continue;
        std::set<std::string> dset;
        for (const std::string& d : disks) {
            bool all_avoid = true;
            for (size_t c = 0; c < curves.size(); ++c)
                if (cset.count(names[c]) && !avoids(curves[c], d)) all_avoid = false;
            if (all_avoid) dset.insert(d);
        }
        by_curves[cset] = dset;
    }
    std::vector<DisjointPair> out;
    for (const auto& [cset, dset] : by_curves) {
        bool dominated = false;
        for (const auto& [c2, d2] : by_curves) {
            if (c2 == cset && d2 == dset) continue;
            if (std::includes(c2.begin(), c2.end(), cset.begin(), cset.end()) &&
                std::includes(d2.begin(), d2.end(), dset.begin(), dset.end()))
                dominated = true;
        }
        if (dominated) continue;
        DisjointPair p;
        p.curves.assign(cset.begin(), cset.end());
        p.disks.assign(dset.begin(), dset.end());
        out.push_back(p);
    }
    return out;
}

} // namespace heegaard
