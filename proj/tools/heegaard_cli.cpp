// Command line driver: word generation, homology, Whitehead graphs and
// separability, multi-handle addition checks, cyclic covers and the full
// certification pipeline.
//
// Exit codes: 0 = success / positive verdict, 1 = negative verdict,
// 2 = input error, 3 = inconclusive.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include <heegaard/json_io.hpp>

using namespace heegaard;

namespace {

constexpr const char* kVersionLine = "heegaard 1 (deterministic output)";

struct CommonOpts {
    int rank = 2;
    std::string word;
    std::string system_file;
    std::string diagram_file;
    std::string pretzel;
    int cover_order = 3;
    std::string tree = "y";
    std::string slope = "2/1";
    std::string dot_dir;
    bool as_json = false;
    bool parallel = false;
};

Basis default_basis(int rank) {
    std::vector<std::string> names;
    for (int i = 0; i < rank; ++i) {
        if (rank <= 3) names.push_back(std::string(1, "xyz"[i]));
        else names.push_back("g" + std::to_string(i));
    }
    return Basis{names};
}

PretzelParams parse_pretzel(const std::string& s) {
    PretzelParams p;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) p.tangles.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (p.tangles.empty()) throw std::invalid_argument("empty tangle list");
    return p;
}

std::pair<int, int> parse_slope(const std::string& s) {
    auto pos = s.find('/');
    if (pos == std::string::npos) return {std::stoi(s), 1};
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1))};
}

CurveSystem load_system(const CommonOpts& o) {
    if (!o.system_file.empty()) {
        std::ifstream in(o.system_file);
        if (!in) throw std::invalid_argument("cannot open " + o.system_file);
        json j;
        in >> j;
        return system_from_json(j);
    }
    if (!o.word.empty()) {
        Basis b = default_basis(o.rank);
        CurveSystem s;
        s.basis = b;
        s.names = {"w0"};
        s.words = {CyclicWord(parse_word(o.word, b))};
        return s;
    }
    throw std::invalid_argument("need --word or --system");
}

HeegaardDiagram load_diagram(const CommonOpts& o) {
    if (!o.diagram_file.empty()) {
        std::ifstream in(o.diagram_file);
        if (!in) throw std::invalid_argument("cannot open " + o.diagram_file);
        json j;
        in >> j;
        return diagram_from_json(j);
    }
    if (!o.pretzel.empty()) return pretzel_diagram(parse_pretzel(o.pretzel));
    throw std::invalid_argument("need --diagram or --pretzel");
}

void write_dot(const CommonOpts& o, const std::string& name, const WhiteheadGraph& g) {
    if (o.dot_dir.empty()) return;
    std::filesystem::create_directories(o.dot_dir);
    std::ofstream out(std::filesystem::path(o.dot_dir) / (name + ".dot"));
    out << to_dot(g);
}

void emit(const CommonOpts& o, const json& j, const std::string& text) {
    if (o.as_json)
        std::cout << dump_deterministic(j);
    else
        std::cout << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Whitehead-graph certification of curve systems on handlebodies"};
    app.set_version_flag("--version", kVersionLine);
    app.require_subcommand(1);

    CommonOpts o;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--rank", o.rank, "free rank for --word input");
        cmd->add_option("--word", o.word, "one cyclic word");
        cmd->add_option("--system", o.system_file, "curve system JSON file");
        cmd->add_option("--diagram", o.diagram_file, "diagram JSON file");
        cmd->add_option("--pretzel", o.pretzel, "tangle list p,q,r");
        cmd->add_option("--cover-order", o.cover_order, "cyclic cover order");
        cmd->add_option("--tree", o.tree, "tree generator for covers");
        cmd->add_option("--slope", o.slope, "cover filling slope M/N");
        cmd->add_option("--dot", o.dot_dir, "directory for DOT output");
        cmd->add_flag("--json", o.as_json, "machine-readable output");
        cmd->add_flag("--parallel", o.parallel, "evaluate handle-addition subsets concurrently");
    };

    auto* words_cmd = app.add_subcommand("words", "presentation and longitude words of a pretzel exterior");
    auto* homology_cmd = app.add_subcommand("homology", "first homology of the presentation");
    auto* graph_cmd = app.add_subcommand("graph", "Whitehead graph with analysis and DOT export");
    auto* separable_cmd = app.add_subcommand("separable", "separability / diskbusting decision");
    auto* mha_cmd = app.add_subcommand("mha", "multi-handle addition check");
    auto* cover_cmd = app.add_subcommand("cover", "lift words or a diagram to the cyclic cover");
    auto* dual_cmd = app.add_subcommand("dual", "re-cut a diagram along named curves");
    auto* compress_cmd = app.add_subcommand("compress", "compress a diagram along named disks");
    auto* stab_cmd = app.add_subcommand("stabilization", "bigon-reduced intersection counts");
    auto* pipeline_cmd = app.add_subcommand("pipeline", "full certification pipeline");
    auto* components_cmd = app.add_subcommand("components", "pretzel link component count");

    for (auto* c : {words_cmd, homology_cmd, graph_cmd, separable_cmd, mha_cmd, cover_cmd,
                    dual_cmd, compress_cmd, stab_cmd, pipeline_cmd})
        add_common(c);

    std::vector<std::string> dual_curves, compress_disks;
    dual_cmd->add_option("--curves", dual_curves, "curves that become the new disks");
    compress_cmd->add_option("--disks", compress_disks, "disks to compress away");
    std::string components_arg;
    components_cmd->add_option("tangles", components_arg, "tangle list p1,p2,...")->required();
    std::string out_file;
    pipeline_cmd->add_option("--out", out_file, "write the certificate JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (words_cmd->parsed()) {
            PretzelWords w = pretzel_words(parse_pretzel(o.pretzel));
            json j;
            j["D1"] = format_word(w.d1);
            j["D2"] = format_word(w.d2);
            j["lambda"] = format_word(w.longitude);
            emit(o, j,
                 "D1 = " + format_word(w.d1) + "\nD2 = " + format_word(w.d2) +
                     "\nlambda = " + format_word(w.longitude) + "\n");
            return 0;
        }
        if (homology_cmd->parsed()) {
            HomologyResult h;
            if (!o.pretzel.empty()) {
                PretzelWords w = pretzel_words(parse_pretzel(o.pretzel));
                h = homology({w.d1, w.d2}, w.basis);
            } else {
                CurveSystem s = load_system(o);
                h = homology(s.words, s.basis);
            }
            json j;
            j["free_rank"] = h.free_rank;
            j["torsion"] = h.torsion;
            std::string text = "H1 = ";
            bool first = true;
            for (int i = 0; i < h.free_rank; ++i) {
                text += first ? "Z" : " + Z";
                first = false;
            }
            for (auto t : h.torsion) {
                text += first ? "Z/" + std::to_string(t) : " + Z/" + std::to_string(t);
                first = false;
            }
            if (first) text += "0";
            emit(o, j, text + "\n");
            return 0;
        }
        if (graph_cmd->parsed()) {
            CurveSystem s = load_system(o);
            WhiteheadGraph g = build_graph(s);
            GraphAnalysis a = analyze(g);
            write_dot(o, "graph", g);
            json j;
            j["edges"] = g.edges.size();
            j["components"] = a.components.size();
            std::vector<std::string> cuts, v1;
            for (int v : a.cut_vertices) cuts.push_back(vertex_name(s.basis, v));
            for (int v : a.valence_one_vertices) v1.push_back(vertex_name(s.basis, v));
            j["cut_vertices"] = cuts;
            j["valence_one"] = v1;
            json bridges = json::array();
            for (auto [p, q] : a.two_vertex_bridge_patterns)
                bridges.push_back(json::array({vertex_name(s.basis, p), vertex_name(s.basis, q)}));
            j["bridge_patterns"] = bridges;
            std::string text = "edges " + std::to_string(g.edges.size()) + ", components " +
                               std::to_string(a.components.size()) + ", cut vertices:";
            for (const auto& c : cuts) text += " " + c;
            emit(o, j, text + "\n");
            return 0;
        }
        if (separable_cmd->parsed()) {
            CurveSystem s = load_system(o);
            SeparabilityVerdict v = decide_separability(s);
            write_dot(o, "terminal", build_graph(v.terminal));
            emit(o, verdict_to_json(v, s.basis),
                 std::string(v.separable() ? "SEPARABLE" : "DISKBUSTING") + "\n");
            return v.separable() ? 1 : 0;
        }
        if (mha_cmd->parsed()) {
            CurveSystem s = load_system(o);
            MhaReport rep = mha_check(s, o.parallel);
            emit(o, mha_to_json(rep, s.basis), to_string(rep.overall) + "\n");
            if (rep.overall == MhaOutcome::Pass) return 0;
            return rep.overall == MhaOutcome::Fail ? 1 : 3;
        }
        if (cover_cmd->parsed()) {
            if (!o.diagram_file.empty()) {
                HeegaardDiagram d = load_diagram(o);
                CyclicHom hom(o.cover_order,
                              std::vector<int>(d.disk_names.size(), 1));
                HeegaardDiagram lifted = lift_diagram(d, hom, o.tree);
                std::cout << dump_deterministic(diagram_to_json(lifted));
                return 0;
            }
            CurveSystem s = !o.pretzel.empty() ? [&] {
                PretzelWords w = pretzel_words(parse_pretzel(o.pretzel));
                CurveSystem sys;
                sys.basis = w.basis;
                sys.names = {"D1", "D2", "lambda"};
                sys.words = {CyclicWord(w.d1), CyclicWord(w.d2), CyclicWord(w.longitude)};
                return sys;
            }() : load_system(o);
            CyclicHom hom(o.cover_order, std::vector<int>(static_cast<size_t>(s.basis.rank()), 1));
            CoverContext ctx = cover_basis(s.basis, hom, o.tree);
            json j = cover_to_json(ctx);
            json lifts = json::object();
            std::string text = "cover basis:";
            for (const auto& n : ctx.lifted.names()) text += " " + n;
            text += "\n";
            for (size_t c = 0; c < s.words.size(); ++c) {
                if (ctx.hom.value_of_word(s.words[c].letters()) != 0) {
                    LiftResult r = lift_word(s.words[c], ctx, 1);
                    lifts[s.names[c]] = json{{"closed", false}, {"end_sheet", r.end_sheet}};
                    text += s.names[c] + ": open path to sheet " + std::to_string(r.end_sheet) + "\n";
                    continue;
                }
                auto ls = lift_closed_curve(s.words[c], ctx);
                json cl = json::object();
                for (auto& [jdx, w] : ls) {
                    cl[s.names[c] + std::to_string(jdx)] = format_word(w);
                    text += s.names[c] + std::to_string(jdx) + " = " + format_word(w) + "\n";
                }
                lifts[s.names[c]] = cl;
            }
            j["lifts"] = lifts;
            emit(o, j, text);
            return 0;
        }
        if (dual_cmd->parsed()) {
            HeegaardDiagram d = load_diagram(o);
            DualizeResult r = dualize(d, dual_curves);
            std::cout << dump_deterministic(diagram_to_json(r.diagram));
            for (const auto& w : r.dropped_curves)
                std::cerr << "dropped curve: " << w << "\n";
            return 0;
        }
        if (compress_cmd->parsed()) {
            HeegaardDiagram d = load_diagram(o);
            CompressResult r = compress(d, compress_disks);
            std::cout << dump_deterministic(diagram_to_json(r.diagram));
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
            return 0;
        }
        if (stab_cmd->parsed()) {
            HeegaardDiagram d = load_diagram(o);
            if (!o.pretzel.empty() && o.cover_order > 1) {
                CyclicHom hom(o.cover_order, std::vector<int>(d.disk_names.size(), 1));
                d = lift_diagram(d, hom, o.tree);
            }
            StabilizationReport rep = stabilization_report(d);
            std::string text;
            for (const auto& p : rep.pairs)
                if (p.count > 0)
                    text += p.curve + " x " + p.disk + " = " + std::to_string(p.count) +
                            (p.stabilizing ? "  (stabilizing)" : "") + "\n";
            text += "note: " + rep.caveat + "\n";
            emit(o, stabilization_to_json(rep), text);
            return rep.any_stabilizing() ? 0 : 1;
        }
        if (pipeline_cmd->parsed()) {
            auto [m, n] = parse_slope(o.slope);
            CoverCertificate cert = certify_cover_splitting(parse_pretzel(o.pretzel), m, n, o.parallel);
            json j = certificate_to_json(cert);
            if (!out_file.empty()) {
                std::ofstream out(out_file);
                out << dump_deterministic(j);
            }
            emit(o, j,
                 std::string("certificate: ") + (cert.pass ? "PASS" : "FAIL") +
                     " (handlebody side " + to_string(cert.hbar.overall) +
                     ", compression side " + to_string(cert.cbar.overall) + ")\n");
            return cert.pass ? 0 : 1;
        }
        if (components_cmd->parsed()) {
            PretzelParams p = parse_pretzel(components_arg);
            std::cout << component_count(p.tangles) << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
