// JSON (de)serialization for curve systems, diagrams, separability traces,
// handle-addition reports and pipeline certificates.  Objects use sorted
// keys and contain no timestamps, so identical inputs serialize to
// identical bytes.
#pragma once

#include <json.hpp>

#include "diagram.hpp"
#include "factor.hpp"
#include "pretzel.hpp"

namespace heegaard {

using nlohmann::json;

inline constexpr const char* kToolName = "heegaard";
inline constexpr int kFormatVersion = 1;

// ---- curve systems -----------------------------------------------------------

/// { "basis": [names...], "curves": { name: word-string, ... } }
inline json system_to_json(const CurveSystem& s) {
    json j;
    j["basis"] = s.basis.names();
    json curves = json::object();
    for (size_t i = 0; i < s.words.size(); ++i)
        curves[s.names[i]] = format_word(s.words[i]);
    j["curves"] = curves;
    return j;
}

inline CurveSystem system_from_json(const json& j) {
    CurveSystem s;
    s.basis = Basis{j.at("basis").get<std::vector<std::string>>()};
    for (auto it = j.at("curves").begin(); it != j.at("curves").end(); ++it) {
        s.names.push_back(it.key());
        s.words.emplace_back(parse_word(it.value().get<std::string>(), s.basis));
    }
    return s;
}

// ---- diagrams ------------------------------------------------------------------

/// Schema: { "disks": [...], "holes": { "g+": [ids...], "g-": [ids...] },
/// "arcs": [ { "curve": name, "index": i, "ends": [[hole,id],[hole,id]] } ] }.
/// The k-th id on a plus hole pairs with the k-th id on the minus hole.
inline json diagram_to_json(const HeegaardDiagram& d) {
    json j;
    j["disks"] = d.disk_names;
    // point id = curve name ":" position of the passage crossing that slot
    std::vector<std::vector<std::string>> ids(d.disk_names.size());
    for (size_t g = 0; g < d.disk_sizes.size(); ++g)
        ids[g].resize(d.disk_sizes[g]);
    for (size_t c = 0; c < d.curves.size(); ++c)
        for (size_t t = 0; t < d.curves[c].size(); ++t) {
            const Passage& p = d.curves[c][t];
            ids[static_cast<size_t>(p.disk)][static_cast<size_t>(p.slot)] =
                d.curve_names[c] + ":" + std::to_string(t);
        }
    json holes = json::object();
    for (size_t g = 0; g < d.disk_names.size(); ++g) {
        holes[d.disk_names[g] + "+"] = ids[g];
        holes[d.disk_names[g] + "-"] = ids[g];
    }
    j["holes"] = holes;
    json arcs = json::array();
    for (const DiagramArc& a : diagram_arcs(d)) {
        json arc;
        arc["curve"] = d.curve_names[static_cast<size_t>(a.curve)];
        arc["index"] = a.pos;
        std::string from_hole = d.disk_names[static_cast<size_t>(a.from_disk)] +
                                (a.from_side == 0 ? "+" : "-");
        std::string to_hole = d.disk_names[static_cast<size_t>(a.to_disk)] +
                              (a.to_side == 0 ? "+" : "-");
        arc["ends"] = json::array(
            {json::array({from_hole, ids[static_cast<size_t>(a.from_disk)]
                                        [static_cast<size_t>(a.from_slot)]}),
             json::array({to_hole, ids[static_cast<size_t>(a.to_disk)]
                                      [static_cast<size_t>(a.to_slot)]})});
        arcs.push_back(arc);
    }
    j["arcs"] = arcs;
    return j;
}

inline HeegaardDiagram diagram_from_json(const json& j) {
    HeegaardDiagram d;
    d.disk_names = j.at("disks").get<std::vector<std::string>>();
    const json& holes = j.at("holes");
    std::map<std::pair<std::string, std::string>, std::pair<int, int>> point_pos;
    for (size_t g = 0; g < d.disk_names.size(); ++g) {
        auto plus = holes.at(d.disk_names[g] + "+").get<std::vector<std::string>>();
        auto minus = holes.at(d.disk_names[g] + "-").get<std::vector<std::string>>();
        if (plus.size() != minus.size())
            throw std::invalid_argument("diagram json: hole pair of unequal sizes at disk " +
                                        d.disk_names[g]);
        d.disk_sizes.push_back(plus.size());
        for (size_t s = 0; s < plus.size(); ++s) {
            point_pos[{d.disk_names[g] + "+", plus[s]}] = {static_cast<int>(g),
                                                           static_cast<int>(s)};
            point_pos[{d.disk_names[g] + "-", minus[s]}] = {static_cast<int>(g),
                                                            static_cast<int>(s)};
        }
    }
    // group arcs by curve, ordered by index; reconstruct passages from the
    // arrival ends
    struct RawArc { std::string from_hole, from_id, to_hole, to_id; };
    std::map<std::string, std::map<int, RawArc>> by_curve;
    for (const json& arc : j.at("arcs")) {
        RawArc r;
        r.from_hole = arc.at("ends").at(0).at(0).get<std::string>();
        r.from_id = arc.at("ends").at(0).at(1).get<std::string>();
        r.to_hole = arc.at("ends").at(1).at(0).get<std::string>();
        r.to_id = arc.at("ends").at(1).at(1).get<std::string>();
        by_curve[arc.at("curve").get<std::string>()][arc.at("index").get<int>()] = r;
    }
    for (const auto& [curve, arcs] : by_curve) {
        std::vector<Passage> ps;
        size_t n = arcs.size();
        for (size_t t = 0; t < n; ++t) {
            auto it = arcs.find(static_cast<int>(t));
            if (it == arcs.end())
                throw std::invalid_argument("diagram json: missing arc index for curve " + curve);
            const RawArc& r = it->second;
            auto pp = point_pos.find({r.to_hole, r.to_id});
            if (pp == point_pos.end())
                throw std::invalid_argument("diagram json: unknown end point " + r.to_id);
            bool minus_side = r.to_hole.back() == '-';
            // arrival on the minus side means a positive passage; the
            // passage receiving this arrival is the next one along
            ps.push_back({pp->second.first, pp->second.second, minus_side ? 1 : -1});
        }
        // arc t arrives at passage t+1
        std::rotate(ps.begin(), ps.begin() + static_cast<long>(n - 1), ps.end());
        // cross-check the departure ends
        for (size_t t = 0; t < n; ++t) {
            const RawArc& r = arcs.at(static_cast<int>(t));
            auto pp = point_pos.find({r.from_hole, r.from_id});
            if (pp == point_pos.end())
                throw std::invalid_argument("diagram json: unknown end point " + r.from_id);
            bool plus_side = r.from_hole.back() == '+';
            const Passage& p = ps[t];
            if (pp->second.first != p.disk || pp->second.second != p.slot ||
                plus_side != (p.sign > 0))
                throw std::invalid_argument("diagram json: arc ends of curve " + curve +
                                            " do not follow the through pairing");
        }
        d.curve_names.push_back(curve);
        d.curves.push_back(std::move(ps));
    }
    return d;
}

// ---- cover contexts ---------------------------------------------------------------

inline json cover_to_json(const CoverContext& ctx) {
    json j;
    j["base_basis"] = ctx.base.names();
    j["modulus"] = ctx.hom.modulus;
    j["hom"] = ctx.hom.values;
    j["tree_generator"] = ctx.base.name(ctx.tree_gen);
    j["lifted_basis"] = ctx.lifted.names();
    return j;
}

// ---- whitehead traces and reports -----------------------------------------------

inline json move_to_json(const WhiteheadMove& m, const Basis& basis) {
    json j;
    j["multiplier"] = format_letter(basis, m.multiplier);
    std::vector<std::string> set;
    for (const Letter& l : m.set_a) set.push_back(format_letter(basis, l));
    j["set"] = set;
    return j;
}

inline json verdict_to_json(const SeparabilityVerdict& v, const Basis& basis) {
    json j;
    j["verdict"] = v.separable() ? "separable" : "diskbusting";
    json trace = json::array();
    for (const TraceStep& s : v.trace) {
        json step;
        step["move"] = move_to_json(s.move, basis);
        step["complexity_after"] = s.complexity_after;
        trace.push_back(step);
    }
    j["trace"] = trace;
    json terminal = json::array();
    for (size_t i = 0; i < v.terminal.words.size(); ++i)
        terminal.push_back(format_word(v.terminal.words[i]));
    j["terminal_system"] = terminal;
    std::vector<std::string> v1;
    for (int vt : v.initial_analysis.valence_one_vertices)
        v1.push_back(vertex_name(basis, vt));
    j["valence_one_vertices"] = v1;
    json bridges = json::array();
    for (auto [p, q] : v.initial_analysis.two_vertex_bridge_patterns)
        bridges.push_back(json::array({vertex_name(basis, p), vertex_name(basis, q)}));
    j["bridge_patterns"] = bridges;
    if (v.separable()) {
        json comps = json::array();
        for (const auto& comp : v.witness_components) {
            std::vector<std::string> names;
            for (int vt : comp) names.push_back(vertex_name(basis, vt));
            comps.push_back(names);
        }
        j["witness_components"] = comps;
    }
    return j;
}

inline json binding_to_json(const FactorBindingReport& r, const Basis& basis) {
    json j;
    j["target_rank"] = r.target_rank;
    j["status"] = to_string(r.status);
    j["rationale"] = to_string(r.rationale);
    j["support"] = r.support;
    json min = json::array();
    for (const auto& w : r.minimized.words) min.push_back(format_word(w));
    j["minimized_system"] = min;
    j["separability"] = verdict_to_json(r.separability, basis);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json mha_to_json(const MhaReport& r, const Basis& basis) {
    json j;
    j["rank"] = r.rank;
    j["curves"] = r.curves;
    j["condition0"] = verdict_to_json(r.condition0, basis);
    json subsets = json::array();
    for (const SubsetReport& sr : r.subsets) {
        json s;
        s["p"] = sr.p;
        s["curves"] = sr.curves;
        s["binding"] = binding_to_json(sr.binding, basis);
        subsets.push_back(s);
    }
    j["subsets"] = subsets;
    j["overall"] = to_string(r.overall);
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

inline json stabilization_to_json(const StabilizationReport& r) {
    json j;
    json pairs = json::array();
    for (const StabilizationPair& p : r.pairs) {
        json e;
        e["curve"] = p.curve;
        e["disk"] = p.disk;
        e["count"] = p.count;
        e["stabilizing"] = p.stabilizing;
        pairs.push_back(e);
    }
    j["pairs"] = pairs;
    j["bigons_removed"] = r.bigons_removed;
    j["caveat"] = r.caveat;
    return j;
}

inline json certificate_to_json(const CoverCertificate& c) {
    json j;
    j["tool"] = kToolName;
    j["format"] = kFormatVersion;
    j["tangles"] = c.params.tangles;
    j["case"] = c.form.case_tag;
    j["i"] = c.form.i;
    j["j"] = c.form.j;
    j["cover_order"] = c.cover_order;
    j["cover_slope"] = std::to_string(c.cover_slope_m) + "/" + std::to_string(c.cover_slope_n);
    j["base_slope"] = std::to_string(3 * c.cover_slope_m) + "/" + std::to_string(c.cover_slope_n);
    json w;
    w["D1"] = format_word(c.words.d1);
    w["D2"] = format_word(c.words.d2);
    w["longitude"] = format_word(c.words.longitude);
    j["words"] = w;
    json h;
    h["free_rank"] = c.homology_result.free_rank;
    h["torsion"] = c.homology_result.torsion;
    j["homology"] = h;
    j["cover"] = cover_to_json(c.cover);
    json wr = json::array();
    for (const DisjointPair& p : c.weak_reducibility) {
        json e;
        e["curves"] = p.curves;
        e["disks"] = p.disks;
        wr.push_back(e);
    }
    j["weak_reducibility"] = wr;
    j["stabilization"] = stabilization_to_json(c.stabilization);
    j["handlebody_side"] = mha_to_json(c.hbar, Basis{{"x1", "x2", "z1", "z2"}});
    j["compression_side"] = mha_to_json(c.cbar, Basis{{"D11", "D12", "D21", "D22", "Dt3"}});
    j["notes"] = c.notes;
    j["pass"] = c.pass;
    return j;
}

inline std::string dump_deterministic(const json& j) { return j.dump(2) + "\n"; }

} // namespace heegaard
