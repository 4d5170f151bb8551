// Embedded Heegaard diagrams as combinatorial data: a cut surface with a
// pair of holes per disk, marked points in cyclic order, and disjoint arcs
// joining them.  Internally a diagram is stored as the passage sequences
// of its curves:
//
//   passage = (disk, slot, sign)
//
// where slot is the position of the crossing in the disk's cyclic order
// (the same slot on the plus and minus hole is the same crossing; the
// through-pairing is index-matched) and sign +1 means the curve runs from
// the minus side to the plus side.  Arcs and hole point lists are derived
// views.  Embeddedness is certified by the Euler count of the glued
// ribbon complex.
#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cover.hpp"
#include "freegroup.hpp"

namespace heegaard {

struct Passage {
    int disk = 0;
    int slot = 0;
    int sign = 1;

    bool operator==(const Passage& o) const {
        return disk == o.disk && slot == o.slot && sign == o.sign;
    }
};

struct HeegaardDiagram {
    std::vector<std::string> disk_names;
    std::vector<size_t> disk_sizes;                 // slots per disk
    std::vector<std::string> curve_names;
    std::vector<std::vector<Passage>> curves;       // cyclic passage sequences

    int disk_index(const std::string& name) const {
        for (size_t i = 0; i < disk_names.size(); ++i)
            if (disk_names[i] == name) return static_cast<int>(i);
        return -1;
    }
    int curve_index(const std::string& name) const {
        for (size_t i = 0; i < curve_names.size(); ++i)
            if (curve_names[i] == name) return static_cast<int>(i);
        return -1;
    }
    size_t total_crossings() const {
        size_t n = 0;
        for (const auto& c : curves) n += c.size();
        return n;
    }
    Basis disk_basis() const { return Basis{disk_names}; }

    bool operator==(const HeegaardDiagram& o) const {
        return disk_names == o.disk_names && disk_sizes == o.disk_sizes &&
               curve_names == o.curve_names && curves == o.curves;
    }
};

// ---- derived arc view -------------------------------------------------------

/// Directed arc along a curve: from the departure point of one passage to
/// the arrival point of the next.  side: 0 = plus hole, 1 = minus hole.
struct DiagramArc {
    int curve = 0;
    int pos = 0;                 // index along the curve
    int from_disk = 0, from_slot = 0, from_side = 0;
    int to_disk = 0, to_slot = 0, to_side = 0;
};

inline std::vector<DiagramArc> diagram_arcs(const HeegaardDiagram& d) {
    std::vector<DiagramArc> arcs;
    for (size_t c = 0; c < d.curves.size(); ++c) {
        const auto& ps = d.curves[c];
        for (size_t t = 0; t < ps.size(); ++t) {
            const Passage& a = ps[t];
            const Passage& b = ps[(t + 1) % ps.size()];
            DiagramArc arc;
            arc.curve = static_cast<int>(c);
            arc.pos = static_cast<int>(t);
            arc.from_disk = a.disk;
            arc.from_slot = a.slot;
            arc.from_side = a.sign > 0 ? 0 : 1;   // departs on the plus side iff sign +
            arc.to_disk = b.disk;
            arc.to_slot = b.slot;
            arc.to_side = b.sign > 0 ? 1 : 0;     // arrives on the minus side iff sign +
            arcs.push_back(arc);
        }
    }
    return arcs;
}

// ---- ribbon complex ---------------------------------------------------------

/// Cell structure of the cut surface (the holed sphere): one vertex per
/// marked point (disk, slot, side), one edge per arc and per hole-boundary
/// segment, rotations [to-next-point, arc, to-prev-point] at every point.
/// The minus hole winds opposite to the plus hole, so "next" runs with the
/// slot order on plus holes and against it on minus holes.
///
/// A diagram is an embedded system iff every connected component of this
/// complex traces a sphere (V - E + F = 2 per component).  The glued
/// closed-surface count V - E + F = 2 - 2*(number of disks) follows for
/// connected complexes.
struct RibbonComplex {
    size_t vertices = 0;
    size_t edges = 0;
    size_t faces = 0;
    size_t components = 0;
    // per face: (edge id, is_arc) boundary list; arcs indexed as diagram_arcs
    std::vector<std::vector<std::pair<int, bool>>> face_edges;
    std::vector<long> component_euler;  // V - E + F per component

    long euler() const {
        return static_cast<long>(vertices) - static_cast<long>(edges) +
               static_cast<long>(faces);
    }
    bool planar() const {
        for (long e : component_euler)
            if (e != 2) return false;
        return true;
    }
    /// V - E + F of the glued closed surface (faces lose the hole disks)
    long glued_euler(size_t holes) const {
        long V = static_cast<long>(vertices) / 2;
        long E = static_cast<long>(vertices);  // arcs + glued segment pairs
        long F = static_cast<long>(faces) - static_cast<long>(holes);
        return V - E + F;
    }
};

inline RibbonComplex build_ribbon(const HeegaardDiagram& d) {
    RibbonComplex rc;
    std::vector<size_t> voffset(d.disk_sizes.size() + 1, 0);
    for (size_t g = 0; g < d.disk_sizes.size(); ++g)
        voffset[g + 1] = voffset[g] + d.disk_sizes[g];
    size_t pairs = voffset.back();
    rc.vertices = 2 * pairs;  // side 0 = plus hole copy, side 1 = minus
    auto vid = [&](int disk, int slot, int side) {
        return 2 * (static_cast<int>(voffset[static_cast<size_t>(disk)]) + slot) + side;
    };

    std::vector<DiagramArc> arcs = diagram_arcs(d);
    size_t n_arc_edges = arcs.size();
    struct Seg { int disk, slot, side; };  // from (slot, side) to (slot+1, side)
    std::vector<Seg> segs;
    for (size_t g = 0; g < d.disk_sizes.size(); ++g)
        for (size_t s = 0; s < d.disk_sizes[g]; ++s)
            for (int side = 0; side < 2; ++side)
                segs.push_back({static_cast<int>(g), static_cast<int>(s), side});
    rc.edges = n_arc_edges + segs.size();

    // darts 2e, 2e+1; opposite = dart ^ 1
    size_t n_darts = 2 * rc.edges;
    std::vector<int> tail(n_darts, -1);
    struct VertexDarts { int to_next = -1, arc = -1, to_prev = -1; };
    std::vector<VertexDarts> at(rc.vertices);

    for (size_t e = 0; e < n_arc_edges; ++e) {
        const DiagramArc& a = arcs[e];
        int d0 = static_cast<int>(2 * e), d1 = d0 + 1;
        int vf = vid(a.from_disk, a.from_slot, a.from_side);
        int vt = vid(a.to_disk, a.to_slot, a.to_side);
        tail[static_cast<size_t>(d0)] = vf;
        tail[static_cast<size_t>(d1)] = vt;
        if (at[static_cast<size_t>(vf)].arc >= 0 || at[static_cast<size_t>(vt)].arc >= 0)
            throw std::invalid_argument("ribbon: two arcs at one marked point");
        at[static_cast<size_t>(vf)].arc = d0;
        at[static_cast<size_t>(vt)].arc = d1;
    }
    for (size_t e = 0; e < segs.size(); ++e) {
        const Seg& sg = segs[e];
        size_t m = d.disk_sizes[static_cast<size_t>(sg.disk)];
        int d0 = static_cast<int>(2 * (n_arc_edges + e)), d1 = d0 + 1;
        int vf = vid(sg.disk, sg.slot, sg.side);
        int vt = vid(sg.disk, static_cast<int>((static_cast<size_t>(sg.slot) + 1) % m), sg.side);
        tail[static_cast<size_t>(d0)] = vf;
        tail[static_cast<size_t>(d1)] = vt;
        // plus hole: slot order is the boundary order; minus hole: reversed
        if (sg.side == 0) {
            at[static_cast<size_t>(vf)].to_next = d0;
            at[static_cast<size_t>(vt)].to_prev = d1;
        } else {
            at[static_cast<size_t>(vf)].to_prev = d0;
            at[static_cast<size_t>(vt)].to_next = d1;
        }
    }

    for (size_t v = 0; v < rc.vertices; ++v) {
        const VertexDarts& vd = at[v];
        if (vd.arc < 0)
            throw std::invalid_argument("ribbon: marked point not on any arc");
        if (vd.to_next < 0 || vd.to_prev < 0)
            throw std::invalid_argument("ribbon: broken hole boundary");
    }

    std::vector<int> next_rot(n_darts, -1);
    for (size_t v = 0; v < rc.vertices; ++v) {
        const VertexDarts& vd = at[v];
        int order[3] = {vd.to_next, vd.arc, vd.to_prev};
        for (int i = 0; i < 3; ++i) next_rot[static_cast<size_t>(order[i])] = order[(i + 1) % 3];
    }

    // faces: orbits of dart -> rotation successor of its opposite
    std::vector<int> face_of(n_darts, -1);
    for (size_t start = 0; start < n_darts; ++start) {
        if (face_of[start] >= 0) continue;
        std::vector<std::pair<int, bool>> face;
        size_t dart = start;
        while (face_of[dart] < 0) {
            face_of[dart] = static_cast<int>(rc.face_edges.size());
            size_t edge = dart / 2;
            face.emplace_back(static_cast<int>(edge), edge < n_arc_edges);
            dart = static_cast<size_t>(next_rot[dart ^ 1]);
        }
        rc.face_edges.push_back(std::move(face));
    }
    rc.faces = rc.face_edges.size();

    // per-component euler counts
    std::vector<int> comp(rc.vertices, -1);
    std::vector<std::vector<int>> adjv(rc.vertices);
    for (size_t e = 0; e < rc.edges; ++e) {
        int a = tail[2 * e], b = tail[2 * e + 1];
        adjv[static_cast<size_t>(a)].push_back(b);
        adjv[static_cast<size_t>(b)].push_back(a);
    }
    size_t ncomp = 0;
    for (size_t v = 0; v < rc.vertices; ++v) {
        if (comp[v] >= 0) continue;
        std::vector<int> stack{static_cast<int>(v)};
        comp[v] = static_cast<int>(ncomp);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adjv[static_cast<size_t>(u)])
                if (comp[static_cast<size_t>(w)] < 0) {
                    comp[static_cast<size_t>(w)] = static_cast<int>(ncomp);
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    rc.components = ncomp;
    std::vector<long> V(ncomp, 0), E(ncomp, 0), F(ncomp, 0);
    for (size_t v = 0; v < rc.vertices; ++v) V[static_cast<size_t>(comp[v])]++;
    for (size_t e = 0; e < rc.edges; ++e) E[static_cast<size_t>(comp[tail[2 * e]])]++;
    for (size_t f = 0; f < rc.face_edges.size(); ++f) {
        // a face belongs to the component of any dart on it
        for (size_t dd = 0; dd < n_darts; ++dd)
            if (face_of[dd] == static_cast<int>(f)) {
                F[static_cast<size_t>(comp[tail[dd]])]++;
                break;
            }
    }
    for (size_t cidx = 0; cidx < ncomp; ++cidx)
        rc.component_euler.push_back(V[cidx] - E[cidx] + F[cidx]);
    return rc;
}

// ---- validation -------------------------------------------------------------

/// Structural and topological checks; an empty list certifies the diagram.
inline std::vector<std::string> validate_diagram(const HeegaardDiagram& d) {
    std::vector<std::string> bad;
    std::set<std::string> dn(d.disk_names.begin(), d.disk_names.end());
    if (dn.size() != d.disk_names.size()) bad.push_back("duplicate disk name");
    if (d.disk_sizes.size() != d.disk_names.size()) {
        bad.push_back("disk size table does not match disk names");
        return bad;
    }
    std::set<std::string> cn(d.curve_names.begin(), d.curve_names.end());
    if (cn.size() != d.curve_names.size()) bad.push_back("duplicate curve name");
    if (d.curves.size() != d.curve_names.size()) {
        bad.push_back("curve table does not match curve names");
        return bad;
    }

    // every slot is crossed exactly once: the through-pairing is the
    // index-matched bijection and every marked point ends exactly one arc
    std::vector<std::vector<int>> hits(d.disk_names.size());
    for (size_t g = 0; g < d.disk_sizes.size(); ++g)
        hits[g].assign(d.disk_sizes[g], 0);
    for (size_t c = 0; c < d.curves.size(); ++c)
        for (const Passage& p : d.curves[c]) {
            if (p.disk < 0 || p.disk >= static_cast<int>(d.disk_names.size())) {
                bad.push_back("curve " + d.curve_names[c] + ": passage through unknown disk");
                return bad;
            }
            if (p.slot < 0 ||
                p.slot >= static_cast<int>(d.disk_sizes[static_cast<size_t>(p.disk)])) {
                bad.push_back("curve " + d.curve_names[c] + ": slot out of range on disk " +
                              d.disk_names[static_cast<size_t>(p.disk)]);
                return bad;
            }
            hits[static_cast<size_t>(p.disk)][static_cast<size_t>(p.slot)]++;
        }
    for (size_t g = 0; g < hits.size(); ++g)
        for (size_t s = 0; s < hits[g].size(); ++s)
            if (hits[g][s] != 1)
                bad.push_back("through_pairing not bijective at disk " + d.disk_names[g] +
                              " slot " + std::to_string(s) +
                              (hits[g][s] == 0 ? " (no crossing)" : " (multiple crossings)"));
    if (!bad.empty()) return bad;

    if (d.total_crossings() == 0) return bad;  // nothing to trace

    RibbonComplex rc;
    try {
        rc = build_ribbon(d);
    } catch (const std::exception& e) {
        bad.push_back(std::string("ribbon construction failed: ") + e.what());
        return bad;
    }
    for (size_t cidx = 0; cidx < rc.component_euler.size(); ++cidx)
        if (rc.component_euler[cidx] != 2)
            bad.push_back("component " + std::to_string(cidx) + " has euler count " +
                          std::to_string(rc.component_euler[cidx]) +
                          " != 2 (arc system is not embeddable in the cut surface)");
    return bad;
}

// ---- word extraction ----------------------------------------------------------

/// Read the cyclic word of a curve over the disk basis: each minus-to-plus
/// passage through disk g contributes the letter g.
inline CyclicWord curve_word(const HeegaardDiagram& d, const std::string& curve) {
    int c = d.curve_index(curve);
    if (c < 0) throw std::invalid_argument("curve_word: unknown curve " + curve);
    Basis b = d.disk_basis();
    std::vector<Letter> ls;
    for (const Passage& p : d.curves[static_cast<size_t>(c)]) ls.push_back({p.disk, p.sign});
    return CyclicWord(b, std::move(ls));
}

// ---- compression ----------------------------------------------------------------

struct CompressResult {
    HeegaardDiagram diagram;
    std::vector<std::string> warnings;  // vanished or disk-free curves
};

/// Delete the named hole pairs and splice the arcs through them; in the
/// passage representation that is exactly dropping the passages.  Curves
/// left without any crossing vanish (warned, not an error).
inline CompressResult compress(const HeegaardDiagram& d, const std::vector<std::string>& disks) {
    CompressResult out;
    std::set<int> kill;
    for (const std::string& n : disks) {
        int g = d.disk_index(n);
        if (g < 0) throw std::invalid_argument("compress: unknown disk " + n);
        kill.insert(g);
    }
    std::vector<int> remap(d.disk_names.size(), -1);
    for (size_t g = 0; g < d.disk_names.size(); ++g) {
        if (kill.count(static_cast<int>(g))) continue;
        remap[g] = static_cast<int>(out.diagram.disk_names.size());
        out.diagram.disk_names.push_back(d.disk_names[g]);
        out.diagram.disk_sizes.push_back(d.disk_sizes[g]);
    }
    for (size_t c = 0; c < d.curves.size(); ++c) {
        std::vector<Passage> ps;
        for (const Passage& p : d.curves[c]) {
            if (kill.count(p.disk)) continue;
            ps.push_back({remap[static_cast<size_t>(p.disk)], p.slot, p.sign});
        }
        if (ps.empty()) {
            out.warnings.push_back("curve " + d.curve_names[c] +
                                   " vanished (no remaining disk crossings)");
            continue;
        }
        out.diagram.curve_names.push_back(d.curve_names[c]);
        out.diagram.curves.push_back(std::move(ps));
    }
    return out;
}

/// Keep only the named curves.  Slots of the remaining crossings are
/// renumbered to close the gaps.
inline HeegaardDiagram restrict_curves(const HeegaardDiagram& d,
                                       const std::vector<std::string>& keep) {
    HeegaardDiagram out;
    out.disk_names = d.disk_names;
    std::set<std::string> keepset(keep.begin(), keep.end());
    std::vector<std::vector<bool>> used(d.disk_names.size());
    for (size_t g = 0; g < d.disk_sizes.size(); ++g) used[g].assign(d.disk_sizes[g], false);
    for (size_t c = 0; c < d.curves.size(); ++c) {
        if (!keepset.count(d.curve_names[c])) continue;
        for (const Passage& p : d.curves[c])
            used[static_cast<size_t>(p.disk)][static_cast<size_t>(p.slot)] = true;
    }
    std::vector<std::vector<int>> remap(d.disk_names.size());
    for (size_t g = 0; g < d.disk_sizes.size(); ++g) {
        remap[g].assign(d.disk_sizes[g], -1);
        int next = 0;
        for (size_t s = 0; s < d.disk_sizes[g]; ++s)
            if (used[g][s]) remap[g][s] = next++;
        out.disk_sizes.push_back(static_cast<size_t>(next));
    }
    for (size_t c = 0; c < d.curves.size(); ++c) {
        if (!keepset.count(d.curve_names[c])) continue;
        std::vector<Passage> ps;
        for (const Passage& p : d.curves[c])
            ps.push_back({p.disk, remap[static_cast<size_t>(p.disk)][static_cast<size_t>(p.slot)],
                          p.sign});
        out.curve_names.push_back(d.curve_names[c]);
        out.curves.push_back(std::move(ps));
    }
    return out;
}

// ---- dualization ---------------------------------------------------------------

struct DualizeResult {
    HeegaardDiagram diagram;
    std::vector<std::string> dropped_curves;  // old curves not promoted to disks
};

/// Re-cut the surface along the named curves: they become the disks, the
/// old disk boundaries become the curve family.  Old curves not selected
/// are erased (their crossings disappear from the new readings).  The new
/// slot order around disk c is the crossing order along the old curve c,
/// and the dual sign flips.
inline DualizeResult dualize(const HeegaardDiagram& d, const std::vector<std::string>& new_disks) {
    DualizeResult out;
    std::vector<int> sel;  // old curve index per new disk
    for (const std::string& n : new_disks) {
        int c = d.curve_index(n);
        if (c < 0) throw std::invalid_argument("dualize: unknown curve " + n);
        sel.push_back(c);
    }
    std::vector<int> new_disk_of_curve(d.curves.size(), -1);
    for (size_t i = 0; i < sel.size(); ++i) {
        if (new_disk_of_curve[static_cast<size_t>(sel[i])] >= 0)
            throw std::invalid_argument("dualize: curve selected twice");
        new_disk_of_curve[static_cast<size_t>(sel[i])] = static_cast<int>(i);
        out.diagram.disk_names.push_back(d.curve_names[static_cast<size_t>(sel[i])]);
        out.diagram.disk_sizes.push_back(d.curves[static_cast<size_t>(sel[i])].size());
    }
    for (size_t c = 0; c < d.curves.size(); ++c)
        if (new_disk_of_curve[c] < 0)
            out.dropped_curves.push_back(d.curve_names[c]);

    // locate, for every old (disk, slot), the selected curve crossing it
    struct Crossing { int new_disk = -1; int pos = 0; int sign = 1; };
    std::vector<std::vector<Crossing>> table(d.disk_names.size());
    for (size_t g = 0; g < d.disk_names.size(); ++g)
        table[g].assign(d.disk_sizes[g], Crossing{});
    for (size_t c = 0; c < d.curves.size(); ++c) {
        for (size_t t = 0; t < d.curves[c].size(); ++t) {
            const Passage& p = d.curves[c][t];
            Crossing& cr = table[static_cast<size_t>(p.disk)][static_cast<size_t>(p.slot)];
            cr.new_disk = new_disk_of_curve[c];
            cr.pos = static_cast<int>(t);
            cr.sign = p.sign;
        }
    }

    // each old disk boundary becomes a curve, read in slot order
    for (size_t g = 0; g < d.disk_names.size(); ++g) {
        std::vector<Passage> ps;
        for (size_t s = 0; s < d.disk_sizes[g]; ++s) {
            const Crossing& cr = table[g][s];
            if (cr.new_disk < 0) continue;  // crossing of a dropped curve
            ps.push_back({cr.new_disk, cr.pos, -cr.sign});
        }
        out.diagram.curve_names.push_back(d.disk_names[g]);
        out.diagram.curves.push_back(std::move(ps));
    }
    return out;
}

// ---- bigon reduction and stabilization ------------------------------------------

struct StabilizationPair {
    std::string curve;
    std::string disk;
    size_t count = 0;
    bool stabilizing = false;  // count == 1
};

struct StabilizationReport {
    std::vector<StabilizationPair> pairs;
    size_t bigons_removed = 0;
    // counts depend on the arc routing of the fixture, not only on its words
    std::string caveat = "intersection counts are routing-dependent";

    bool any_stabilizing() const {
        for (const auto& p : pairs)
            if (p.stabilizing) return true;
        return false;
    }
};

namespace detail {

/// Find an innermost (curve, disk) bigon: a two-sided face with one arc
/// edge and one circle edge.  Returns (curve, pos of the bigon arc).
inline std::optional<std::pair<int, int>> find_bigon(const HeegaardDiagram& d) {
    RibbonComplex rc = build_ribbon(d);
    std::vector<DiagramArc> arcs = diagram_arcs(d);
    for (const auto& face : rc.face_edges) {
        if (face.size() != 2) continue;
        bool arc0 = face[0].second, arc1 = face[1].second;
        if (arc0 == arc1) continue;
        int arc_edge = arc0 ? face[0].first : face[1].first;
        const DiagramArc& a = arcs[static_cast<size_t>(arc_edge)];
        return std::make_pair(a.curve, a.pos);
    }
    return std::nullopt;
}

/// Remove the bigon formed by arc (curve, pos): the passages at both ends
/// cancel and the neighbouring arcs splice.
inline HeegaardDiagram remove_bigon(const HeegaardDiagram& d, int curve, int pos) {
    HeegaardDiagram out = d;
    auto& ps = out.curves[static_cast<size_t>(curve)];
    size_t n = ps.size();
    size_t i = static_cast<size_t>(pos);        // arc pos runs passage i -> i+1
    size_t j = (i + 1) % n;
    Passage a = ps[i], b = ps[j];
    if (a.disk != b.disk)
        throw std::logic_error("remove_bigon: arc does not return to its disk");
    // erase the two passages
    std::vector<Passage> np;
    for (size_t t = 0; t < n; ++t)
        if (t != i && t != j) np.push_back(ps[t]);
    ps = np;
    if (ps.empty()) {
        out.curve_names.erase(out.curve_names.begin() + curve);
        out.curves.erase(out.curves.begin() + curve);
    }
    // close the slot gaps on the disk
    int g = a.disk;
    std::vector<int> slot_remap(out.disk_sizes[static_cast<size_t>(g)], -1);
    int next = 0;
    for (size_t s = 0; s < d.disk_sizes[static_cast<size_t>(g)]; ++s) {
        if (static_cast<int>(s) == a.slot || static_cast<int>(s) == b.slot) continue;
        slot_remap[s] = next++;
    }
    out.disk_sizes[static_cast<size_t>(g)] -= 2;
    for (auto& cps : out.curves)
        for (Passage& p : cps)
            if (p.disk == g) p.slot = slot_remap[static_cast<size_t>(p.slot)];
    return out;
}

} // namespace detail

/// Geometric intersection counts per (curve, disk) after removing innermost
/// bigons to a fixed point; a count of 1 flags a stabilizing pair.
inline StabilizationReport stabilization_report(const HeegaardDiagram& d) {
    HeegaardDiagram cur = d;
    StabilizationReport rep;
    while (cur.total_crossings() > 0) {
        auto bigon = detail::find_bigon(cur);
        if (!bigon) break;
        cur = detail::remove_bigon(cur, bigon->first, bigon->second);
        ++rep.bigons_removed;
    }
    for (size_t c = 0; c < d.curve_names.size(); ++c) {
        for (size_t g = 0; g < d.disk_names.size(); ++g) {
            StabilizationPair p;
            p.curve = d.curve_names[c];
            p.disk = d.disk_names[g];
            int rc_idx = cur.curve_index(d.curve_names[c]);
            if (rc_idx >= 0)
                for (const Passage& q : cur.curves[static_cast<size_t>(rc_idx)])
                    if (cur.disk_names[static_cast<size_t>(q.disk)] == d.disk_names[g]) ++p.count;
            p.stabilizing = p.count == 1;
            rep.pairs.push_back(p);
        }
    }
    return rep;
}

// ---- diagram-level cover lift ----------------------------------------------------

/// Lift the whole diagram to the n-fold cyclic cover: n sheet copies glued
/// along the disks by the sheet action, with the eliminated tree disks
/// spliced away.  Every curve must lift closed.
inline HeegaardDiagram lift_diagram(const HeegaardDiagram& d, const CyclicHom& hom,
                                    const std::string& tree_generator) {
    if (static_cast<int>(hom.values.size()) != static_cast<int>(d.disk_names.size()))
        throw std::invalid_argument("lift_diagram: hom arity mismatch");
    int tree = d.disk_index(tree_generator);
    if (tree < 0) throw std::invalid_argument("lift_diagram: unknown tree disk");
    int n = hom.modulus;

    HeegaardDiagram out;
    // cover disk (g, j): departure sheet j; tree keeps only sheet n
    std::map<std::pair<int, int>, int> disk_id;
    for (size_t g = 0; g < d.disk_names.size(); ++g) {
        if (static_cast<int>(g) == tree) continue;
        for (int j = 1; j <= n; ++j) {
            disk_id[{static_cast<int>(g), j}] = static_cast<int>(out.disk_names.size());
            out.disk_names.push_back(CoverContext::lift_name(d.disk_names[g], j));
            out.disk_sizes.push_back(d.disk_sizes[g]);
        }
    }
    disk_id[{tree, n}] = static_cast<int>(out.disk_names.size());
    out.disk_names.push_back(CoverContext::lift_name(d.disk_names[static_cast<size_t>(tree)], n));
    out.disk_sizes.push_back(d.disk_sizes[static_cast<size_t>(tree)]);

    for (size_t c = 0; c < d.curves.size(); ++c) {
        int hval = 0;
        for (const Passage& p : d.curves[c])
            hval = (hval + hom.value(Letter{p.disk, p.sign})) % n;
        if (hval != 0)
            throw std::invalid_argument("lift_diagram: curve " + d.curve_names[c] +
                                        " does not lift closed");
        for (int j = 1; j <= n; ++j) {
            int s = normalize_sheet(j - 1, n);  // superscript j = start sheet j-1
            std::vector<Passage> ps;
            for (const Passage& p : d.curves[c]) {
                int h = hom.values[static_cast<size_t>(p.disk)];
                int depart = p.sign > 0 ? s : normalize_sheet(s - h, n);
                int target = p.sign > 0 ? normalize_sheet(s + h, n) : normalize_sheet(s - h, n);
                if (!(p.disk == tree && depart != n))
                    ps.push_back({disk_id.at({p.disk, depart}), p.slot, p.sign});
                s = target;
            }
            out.curve_names.push_back(d.curve_names[c] + std::to_string(j));
            out.curves.push_back(std::move(ps));
        }
    }
    return out;
}

// ---- routed curve insertion --------------------------------------------------------

namespace detail {

/// Faces of a diagram whose last curve may still be open (its first
/// arrival point and final departure point carry no arc yet).  Exposed
/// points get degree-2 rotations so the face walk passes through them.
/// Returns per face: the gaps (disk, side, slot-before) on its boundary,
/// or an empty list for hole-interior faces; exposed vertices are reported
/// with the faces that carry them.
struct PartialFaces {
    // face -> gaps (disk, side, k): segment between slot k and k+1
    std::vector<std::vector<std::array<int, 3>>> face_gaps;
    std::vector<std::vector<int>> face_exposed;  // exposed vertex ids per face
};

inline PartialFaces partial_faces(const HeegaardDiagram& d, int open_curve) {
    PartialFaces out;
    std::vector<size_t> voffset(d.disk_sizes.size() + 1, 0);
    for (size_t g = 0; g < d.disk_sizes.size(); ++g)
        voffset[g + 1] = voffset[g] + d.disk_sizes[g];
    size_t pairs = voffset.back();
    size_t nvert = 2 * pairs;
    auto vid = [&](int disk, int slot, int side) {
        return 2 * (static_cast<int>(voffset[static_cast<size_t>(disk)]) + slot) + side;
    };

    // arcs; for the open curve the wrap-around arc is omitted
    struct End { int disk, slot, side; };
    std::vector<std::pair<End, End>> arcs;
    for (size_t c = 0; c < d.curves.size(); ++c) {
        const auto& ps = d.curves[c];
        size_t upto = ps.size();
        if (static_cast<int>(c) == open_curve) {
            if (ps.size() < 2) continue;  // no arcs yet
            upto = ps.size() - 1;
        }
        for (size_t t = 0; t < upto; ++t) {
            const Passage& a = ps[t];
            const Passage& b = ps[(t + 1) % ps.size()];
            arcs.push_back({{a.disk, a.slot, a.sign > 0 ? 0 : 1},
                            {b.disk, b.slot, b.sign > 0 ? 1 : 0}});
        }
    }

    size_t n_arc = arcs.size();
    struct Seg { int disk, slot, side; };
    std::vector<Seg> segs;
    for (size_t g = 0; g < d.disk_sizes.size(); ++g)
        for (size_t s = 0; s < d.disk_sizes[g]; ++s)
            for (int side = 0; side < 2; ++side)
                segs.push_back({static_cast<int>(g), static_cast<int>(s), side});
    size_t nedge = n_arc + segs.size();
    size_t ndart = 2 * nedge;
    std::vector<int> tail(ndart, -1);
    struct VD { int to_next = -1, arc = -1, to_prev = -1; };
    std::vector<VD> at(nvert);

    for (size_t e = 0; e < n_arc; ++e) {
        int d0 = static_cast<int>(2 * e), d1 = d0 + 1;
        int vf = vid(arcs[e].first.disk, arcs[e].first.slot, arcs[e].first.side);
        int vt = vid(arcs[e].second.disk, arcs[e].second.slot, arcs[e].second.side);
        tail[static_cast<size_t>(d0)] = vf;
        tail[static_cast<size_t>(d1)] = vt;
        if (at[static_cast<size_t>(vf)].arc >= 0 || at[static_cast<size_t>(vt)].arc >= 0)
            throw std::invalid_argument("partial_faces: two arcs at one point");
        at[static_cast<size_t>(vf)].arc = d0;
        at[static_cast<size_t>(vt)].arc = d1;
    }
    for (size_t e = 0; e < segs.size(); ++e) {
        const Seg& sg = segs[e];
        size_t m = d.disk_sizes[static_cast<size_t>(sg.disk)];
        int d0 = static_cast<int>(2 * (n_arc + e)), d1 = d0 + 1;
        int vf = vid(sg.disk, sg.slot, sg.side);
        int vt = vid(sg.disk, static_cast<int>((static_cast<size_t>(sg.slot) + 1) % m), sg.side);
        tail[static_cast<size_t>(d0)] = vf;
        tail[static_cast<size_t>(d1)] = vt;
        if (sg.side == 0) {
            at[static_cast<size_t>(vf)].to_next = d0;
            at[static_cast<size_t>(vt)].to_prev = d1;
        } else {
            at[static_cast<size_t>(vf)].to_prev = d0;
            at[static_cast<size_t>(vt)].to_next = d1;
        }
    }

    std::vector<int> next_rot(ndart, -1);
    std::vector<bool> exposed(nvert, false);
    for (size_t v = 0; v < nvert; ++v) {
        const VD& vd = at[v];
        if (vd.to_next < 0 || vd.to_prev < 0)
            throw std::invalid_argument("partial_faces: broken hole boundary");
        if (vd.arc >= 0) {
            int order[3] = {vd.to_next, vd.arc, vd.to_prev};
            for (int i = 0; i < 3; ++i)
                next_rot[static_cast<size_t>(order[i])] = order[(i + 1) % 3];
        } else {
            exposed[v] = true;
            next_rot[static_cast<size_t>(vd.to_next)] = vd.to_prev;
            next_rot[static_cast<size_t>(vd.to_prev)] = vd.to_next;
        }
    }

    std::vector<int> face_of(ndart, -1);
    for (size_t start = 0; start < ndart; ++start) {
        if (face_of[start] >= 0) continue;
        int fid = static_cast<int>(out.face_gaps.size());
        out.face_gaps.emplace_back();
        out.face_exposed.emplace_back();
        size_t dart = start;
        std::set<int> exposed_here;
        while (face_of[dart] < 0) {
            face_of[dart] = fid;
            size_t edge = dart / 2;
            if (edge >= n_arc) {
                const Seg& sg = segs[edge - n_arc];
                out.face_gaps.back().push_back({sg.disk, sg.side, sg.slot});
            }
            if (exposed[static_cast<size_t>(tail[dart])])
                exposed_here.insert(tail[dart]);
            dart = static_cast<size_t>(next_rot[dart ^ 1]);
        }
        out.face_exposed.back().assign(exposed_here.begin(), exposed_here.end());
    }

    // hole interiors are the orbits that never leave one circle: on the plus
    // side the forward segment darts, on the minus side the backward ones;
    // they are not routable regions
    for (size_t g = 0; g < d.disk_sizes.size(); ++g) {
        if (d.disk_sizes[g] == 0) continue;
        for (int side = 0; side < 2; ++side) {
            // the segment (g, slot 0, side): find its edge index
            size_t e = 0;
            while (e < segs.size() &&
                   !(segs[e].disk == static_cast<int>(g) && segs[e].slot == 0 &&
                     segs[e].side == side))
                ++e;
            size_t dart = 2 * (n_arc + e) + (side == 0 ? 0 : 1);
            int fid = face_of[dart];
            out.face_gaps[static_cast<size_t>(fid)].clear();
            out.face_exposed[static_cast<size_t>(fid)].clear();
        }
    }
    return out;
}

} // namespace detail

/// Insert a new closed curve realizing `word`, routed through the faces of
/// the existing diagram; the first embedded routing in search order is
/// returned.  Throws when no embedded routing exists.
inline HeegaardDiagram route_curve(const HeegaardDiagram& base, const std::string& name,
                                   const CyclicWord& word, size_t node_budget = 2000000) {
    if (word.empty()) throw std::invalid_argument("route_curve: empty word");
    if (word.basis() != base.disk_basis())
        throw std::invalid_argument("route_curve: word must be over the disk basis");
    const auto& ls = word.letters();
    size_t L = ls.size();

    size_t nodes = 0;

    std::function<std::optional<HeegaardDiagram>(HeegaardDiagram&, size_t)> extend =
        [&](HeegaardDiagram& cur, size_t t) -> std::optional<HeegaardDiagram> {
        if (++nodes > node_budget)
            throw std::runtime_error("route_curve: search budget exhausted");
        int cid = cur.curve_index(name);
        auto vid_of = [&](const HeegaardDiagram& d, int disk, int slot, int side) {
            int off = 0;
            for (int g = 0; g < disk; ++g) off += static_cast<int>(d.disk_sizes[static_cast<size_t>(g)]);
            return 2 * (off + slot) + side;
        };
        if (t == L) {
            // close up: the pen and the start arrival must share a face
            detail::PartialFaces pf = detail::partial_faces(cur, cid);
            const Passage& first = cur.curves[static_cast<size_t>(cid)].front();
            const Passage& last = cur.curves[static_cast<size_t>(cid)].back();
            int start_v = vid_of(cur, first.disk, first.slot, first.sign > 0 ? 1 : 0);
            int pen_v = vid_of(cur, last.disk, last.slot, last.sign > 0 ? 0 : 1);
            for (size_t f = 0; f < pf.face_exposed.size(); ++f) {
                const auto& ex = pf.face_exposed[f];
                bool has_start = std::find(ex.begin(), ex.end(), start_v) != ex.end();
                bool has_pen = std::find(ex.begin(), ex.end(), pen_v) != ex.end();
                if (has_start && has_pen) {
                    if (validate_diagram(cur).empty() &&
                        curve_word(cur, name) == word)
                        return cur;
                    return std::nullopt;
                }
            }
            return std::nullopt;
        }

        const Letter& l = ls[t];
        int g = l.gen;
        int arrival_side = l.sign > 0 ? 1 : 0;

        // candidate gaps: when t == 0 any gap of the disk, otherwise the
        // gaps of the face carrying the pen's exposed corner
        std::vector<int> positions;
        if (t == 0) {
            for (size_t k = 0; k <= cur.disk_sizes[static_cast<size_t>(g)]; ++k)
                if (k < std::max<size_t>(cur.disk_sizes[static_cast<size_t>(g)], 1))
                    positions.push_back(static_cast<int>(k));
            if (cur.disk_sizes[static_cast<size_t>(g)] == 0) positions = {0};
        } else {
            detail::PartialFaces pf = detail::partial_faces(cur, cid);
            const Passage& last = cur.curves[static_cast<size_t>(cid)].back();
            int pen_v = vid_of(cur, last.disk, last.slot, last.sign > 0 ? 0 : 1);
            int pen_face = -1;
            for (size_t f = 0; f < pf.face_exposed.size() && pen_face < 0; ++f)
                if (std::find(pf.face_exposed[f].begin(), pf.face_exposed[f].end(), pen_v) !=
                    pf.face_exposed[f].end())
                    pen_face = static_cast<int>(f);
            if (pen_face < 0) return std::nullopt;
            std::set<int> uniq;
            for (const auto& gap : pf.face_gaps[static_cast<size_t>(pen_face)])
                if (gap[0] == g && gap[1] == arrival_side)
                    uniq.insert((gap[2] + 1) % std::max<int>(
                        1, static_cast<int>(cur.disk_sizes[static_cast<size_t>(g)])));
            positions.assign(uniq.begin(), uniq.end());
        }

        for (int pos : positions) {
            HeegaardDiagram next = cur;
            next.disk_sizes[static_cast<size_t>(g)]++;
            for (auto& ps : next.curves)
                for (Passage& p : ps)
                    if (p.disk == g && p.slot >= pos) p.slot++;
            next.curves[static_cast<size_t>(next.curve_index(name))].push_back(
                {g, pos, l.sign});
            if (auto done = extend(next, t + 1)) return done;
        }
        return std::nullopt;
    };

    HeegaardDiagram start = base;
    if (start.curve_index(name) >= 0)
        throw std::invalid_argument("route_curve: curve name already present");
    start.curve_names.push_back(name);
    start.curves.emplace_back();
    if (auto done = extend(start, 0)) return *done;
    throw std::runtime_error("route_curve: no embedded routing found");
}

// ---- slope curve surgery -----------------------------------------------------------

/// Replace a longitude-like curve by the integer slope curve that follows
/// it once and then winds m times through the meridian disk.  The winding
/// block is inserted next to the hole in the unique position and direction
/// that keeps the system embedded (searched, certified by validation).
inline HeegaardDiagram attach_meridian_spiral(const HeegaardDiagram& d, const std::string& curve,
                                              const std::string& meridian_disk, int m) {
    if (m < 1) throw std::invalid_argument("attach_meridian_spiral: need m >= 1");
    int c = d.curve_index(curve);
    int g = d.disk_index(meridian_disk);
    if (c < 0 || g < 0)
        throw std::invalid_argument("attach_meridian_spiral: unknown curve or disk");

    size_t old_size = d.disk_sizes[static_cast<size_t>(g)];
    for (int insert_at = 0; insert_at <= static_cast<int>(old_size); ++insert_at) {
        for (int dir = 0; dir < 2; ++dir) {
            HeegaardDiagram trial = d;
            trial.disk_sizes[static_cast<size_t>(g)] = old_size + static_cast<size_t>(m);
            for (auto& ps : trial.curves)
                for (Passage& p : ps)
                    if (p.disk == g && p.slot >= insert_at) p.slot += m;
            auto& ps = trial.curves[static_cast<size_t>(c)];
            for (int r = 0; r < m; ++r) {
                int slot = insert_at + (dir == 0 ? r : m - 1 - r);
                ps.push_back({g, slot, 1});
            }
            if (validate_diagram(trial).empty()) return trial;
        }
    }
    throw std::runtime_error("attach_meridian_spiral: no embedded insertion found");
}

} // namespace heegaard
