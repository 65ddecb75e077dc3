// prk: periodic rigidity kit command line.
//
// Subcommands: check, reduce, generate, rank, tgain, decompose, export-svg.
// Exit codes: 0 success / rigid / true, 1 flexible / not reducible, 2 input
// error. PRK_BRUTE_FORCE_BOUND overrides the subset-enumeration vertex bound.

#include "prk/prk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitRigid = 0;
constexpr int kExitFlexible = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw prk::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct LoadedDocument {
    prk::Document doc;
    nlohmann::json raw;
};

LoadedDocument load_document(const std::string& path,
                             const std::optional<std::string>& model_override) {
    LoadedDocument loaded;
    try {
        loaded.raw = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw prk::ParseError(path + ": " + e.what());
    }
    loaded.doc = prk::parse_document_json(loaded.raw);
    if (model_override) {
        auto m = prk::model_from_name(*model_override);
        if (!m) throw prk::ParseError("unknown model \"" + *model_override + "\"");
        if (*m != loaded.doc.model) {
            if (prk::gain_arity(*m) != loaded.doc.graph.arity())
                throw prk::ParseError("--model " + *model_override +
                                      " expects a different gain arity than the document");
            std::cerr << "warning: overriding document model \""
                      << prk::model_name(loaded.doc.model) << "\" with \"" << *model_override
                      << "\"\n";
            loaded.doc.model = *m;
        }
    }
    return loaded;
}

nlohmann::ordered_json witness_json(const prk::GainWitness& w) {
    nlohmann::ordered_json j;
    j["condition"] = w.condition;
    j["subset"] = w.subset;
    auto& gens = j["generators"] = nlohmann::ordered_json::array();
    for (const auto& g : w.generators) {
        gens.push_back({g.x.convert_to<long long>(), g.y.convert_to<long long>()});
    }
    if (w.removed_edge) j["removed_edge"] = *w.removed_edge;
    return j;
}

std::string witness_text(const prk::GainWitness& w) {
    std::string s = w.condition;
    if (!w.subset.empty()) {
        s += "; subset {";
        for (size_t i = 0; i < w.subset.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(w.subset[i]);
        }
        s += "}";
    }
    if (w.removed_edge) s += " minus edge " + std::to_string(*w.removed_edge);
    return s;
}

int run_check_one(const std::string& path, const std::optional<std::string>& model_override,
                  int trials, std::uint64_t seed, bool json_out, bool oracle,
                  std::ostream& out) {
    LoadedDocument loaded = load_document(path, model_override);
    const prk::OrbitGraph& g = loaded.doc.graph;
    prk::DecideResult dec = prk::decide(g, loaded.doc.model);
    std::optional<bool> oracle_rigid;
    if (oracle) oracle_rigid = prk::is_inf_rigid(g, loaded.doc.model, trials, seed);

    if (json_out) {
        nlohmann::ordered_json j;
        j["file"] = path;
        j["model"] = prk::model_name(loaded.doc.model);
        j["verdict"] = dec.status == prk::Rigidity::Rigid ? "rigid"
                       : dec.status == prk::Rigidity::Flexible ? "flexible"
                                                               : "count-mismatch";
        j["detail"] = dec.detail;
        if (dec.certificate) j["certificate"] = prk::certificate_to_json(*dec.certificate);
        if (dec.witness) j["witness"] = witness_json(*dec.witness);
        if (oracle_rigid) {
            j["oracle_rigid"] = *oracle_rigid;
            j["oracle_agrees"] = *oracle_rigid == dec.rigid();
        }
        out << j.dump(2) << "\n";
    } else {
        out << path << ": " << (dec.status == prk::Rigidity::Rigid ? "rigid"
                                : dec.status == prk::Rigidity::Flexible ? "flexible"
                                                                        : "count mismatch")
            << " (" << dec.detail << ")\n";
        if (dec.witness) out << "  witness: " << witness_text(*dec.witness) << "\n";
        if (oracle_rigid) {
            out << "  rank oracle: " << (*oracle_rigid ? "rigid" : "flexible")
                << (*oracle_rigid == dec.rigid() ? " (agrees)" : " (DISAGREES)") << "\n";
        }
    }
    return dec.rigid() ? kExitRigid : kExitFlexible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic rigidity kit: decide generic rigidity of periodic orbit frameworks"};
    app.require_subcommand(1);

    std::string path;
    std::string out_path;
    std::optional<std::string> model_override;
    std::string batch_dir;
    int trials = 3;
    std::uint64_t seed = 1;
    bool json_out = false;
    bool oracle = false;

    auto add_model_flag = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_override,
                        "override the document model (fixed, x-variable, y-variable, angle, "
                        "cylinder, circle-fixed, circle-flexible)");
    };

    // check
    auto* check = app.add_subcommand("check", "decide minimal rigidity");
    check->add_option("file", path, "orbit-graph document");
    check->add_option("--batch", batch_dir, "process every .json file in a directory");
    add_model_flag(check);
    check->add_option("--trials", trials, "rank oracle trials");
    check->add_option("--seed", seed, "rank oracle seed");
    check->add_flag("--json", json_out, "machine-readable output");
    check->add_flag("--oracle", oracle, "also run the exact rank oracle and report agreement");

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "compute a Henneberg construction certificate");
    reduce_cmd->add_option("file", path, "orbit-graph document")->required();
    add_model_flag(reduce_cmd);
    reduce_cmd->add_flag("--json", json_out, "machine-readable output");
    reduce_cmd->add_option("--out", out_path, "write the certificate JSON to a file");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "generate a rigid graph with its certificate");
    int gen_n = 1;
    gen_cmd->add_option("-n,--vertices", gen_n, "vertex count")->required();
    gen_cmd->add_option("--seed", seed, "generator seed");
    add_model_flag(gen_cmd);
    gen_cmd->add_option("--out", out_path, "write output to a file");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "exact generic rank of the rigidity matrix");
    rank_cmd->add_option("file", path, "orbit-graph document")->required();
    add_model_flag(rank_cmd);
    rank_cmd->add_option("--trials", trials, "placement trials");
    rank_cmd->add_option("--seed", seed, "placement seed");
    rank_cmd->add_flag("--json", json_out, "machine-readable output");

    // tgain
    auto* tgain_cmd = app.add_subcommand("tgain", "T-gain table for a spanning tree");
    std::string tree_spec;
    int root = -1;
    tgain_cmd->add_option("file", path, "orbit-graph document")->required();
    tgain_cmd->add_option("--tree", tree_spec, "comma-separated tree edge ids (default: BFS)");
    tgain_cmd->add_option("--root", root, "root vertex (default: smallest id)");
    tgain_cmd->add_flag("--json", json_out, "machine-readable output");

    // decompose
    auto* dec_cmd = app.add_subcommand("decompose", "spanning tree + connected map decomposition");
    dec_cmd->add_option("file", path, "orbit-graph document")->required();
    dec_cmd->add_flag("--json", json_out, "machine-readable output");

    // export-svg
    auto* svg_cmd = app.add_subcommand("export-svg", "draw a derived framework fragment");
    std::string window_spec = "3x3";
    svg_cmd->add_option("file", path, "orbit-graph document")->required();
    svg_cmd->add_option("--window", window_spec, "window size WxH (default 3x3)");
    svg_cmd->add_option("--out", out_path, "output SVG path (default: stdout)");
    svg_cmd->add_option("--seed", seed, "placement seed when the document has no positions");
    add_model_flag(svg_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            if (!batch_dir.empty()) {
                std::vector<std::string> files;
                for (const auto& entry : std::filesystem::directory_iterator(batch_dir)) {
                    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
                }
                std::sort(files.begin(), files.end());
                if (files.empty()) {
                    std::cerr << "error: no .json files in " << batch_dir << "\n";
                    return kExitInputError;
                }
                // Per-file isolation: each file runs independently and
                // failures do not stop the batch.
                std::vector<std::future<std::pair<int, std::string>>> tasks;
                for (const auto& f : files) {
                    tasks.push_back(std::async(std::launch::async, [&, f]() {
                        std::ostringstream os;
                        int code;
                        try {
                            code = run_check_one(f, model_override, trials, seed, json_out,
                                                 oracle, os);
                        } catch (const std::exception& e) {
                            os << f << ": error (" << e.what() << ")\n";
                            code = kExitInputError;
                        }
                        return std::make_pair(code, os.str());
                    }));
                }
                int worst = kExitRigid;
                for (auto& t : tasks) {
                    auto [code, text] = t.get();
                    std::cout << text;
                    worst = std::max(worst, code);
                }
                return worst;
            }
            if (path.empty()) {
                std::cerr << "error: a file or --batch directory is required\n";
                return kExitInputError;
            }
            return run_check_one(path, model_override, trials, seed, json_out, oracle, std::cout);
        }

        if (reduce_cmd->parsed()) {
            LoadedDocument loaded = load_document(path, model_override);
            prk::DecideResult dec = prk::decide(loaded.doc.graph, loaded.doc.model);
            if (!dec.rigid() || !dec.certificate) {
                if (json_out) {
                    nlohmann::ordered_json j;
                    j["verdict"] = "not-reducible";
                    j["detail"] = dec.detail;
                    if (dec.witness) j["witness"] = witness_json(*dec.witness);
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << path << ": not reducible (" << dec.detail << ")\n";
                    if (dec.witness) std::cout << "  witness: " << witness_text(*dec.witness) << "\n";
                }
                return kExitFlexible;
            }
            std::string cert_text = prk::certificate_to_json(*dec.certificate).dump(2) + "\n";
            if (!out_path.empty()) {
                write_file(out_path, cert_text);
                std::cout << path << ": certificate with " << dec.certificate->moves.size()
                          << " moves written to " << out_path << "\n";
            } else {
                std::cout << cert_text;
            }
            return kExitRigid;
        }

        if (gen_cmd->parsed()) {
            prk::TorusModel model = prk::TorusModel::XVariable;
            if (model_override) {
                auto m = prk::model_from_name(*model_override);
                if (!m) throw prk::ParseError("unknown model \"" + *model_override + "\"");
                model = *m;
            }
            auto result = prk::generate(gen_n, seed, model);
            nlohmann::ordered_json j;
            j["graph"] = prk::serialize_document_json(prk::Document{model, result.graph});
            j["certificate"] = prk::certificate_to_json(result.certificate);
            std::string text = j.dump(2) + "\n";
            if (!out_path.empty()) write_file(out_path, text);
            else std::cout << text;
            return kExitRigid;
        }

        if (rank_cmd->parsed()) {
            LoadedDocument loaded = load_document(path, model_override);
            int rank = prk::generic_rank(loaded.doc.graph, loaded.doc.model, trials, seed);
            int threshold =
                prk::rigidity_rank_threshold(loaded.doc.model, loaded.doc.graph.n_vertices());
            bool rigid = rank == threshold;
            if (json_out) {
                nlohmann::ordered_json j;
                j["rank"] = rank;
                j["threshold"] = threshold;
                j["rigid"] = rigid;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << path << ": rank " << rank << " of threshold " << threshold << " ("
                          << (rigid ? "rigid" : "flexible") << ")\n";
            }
            return rigid ? kExitRigid : kExitFlexible;
        }

        if (tgain_cmd->parsed()) {
            LoadedDocument loaded = load_document(path, std::nullopt);
            const prk::OrbitGraph& g = loaded.doc.graph;
            prk::TGainTable table;
            if (!tree_spec.empty()) {
                std::vector<int> tree;
                std::stringstream ss(tree_spec);
                std::string tok;
                while (std::getline(ss, tok, ',')) tree.push_back(std::stoi(tok));
                table = prk::t_gain_procedure(g, tree, root < 0 ? 0 : root);
            } else {
                table = prk::t_gain_auto(g);
            }
            if (json_out) {
                nlohmann::ordered_json j;
                j["tree_edges"] = table.tree_edges;
                j["roots"] = table.roots;
                auto pair_of = [](const prk::Gain& gn) {
                    return nlohmann::ordered_json::array(
                        {gn.x.convert_to<long long>(), gn.y.convert_to<long long>()});
                };
                auto& pots = j["potentials"] = nlohmann::ordered_json::array();
                for (const auto& p : table.potentials) pots.push_back(pair_of(p));
                auto& tg = j["t_gains"] = nlohmann::ordered_json::array();
                for (const auto& t : table.t_gains) tg.push_back(pair_of(t));
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "tree edges:";
                for (int id : table.tree_edges) std::cout << " " << id;
                std::cout << "\nroots:";
                for (int r : table.roots) std::cout << " " << r;
                std::cout << "\npotentials:\n";
                for (int v = 0; v < g.n_vertices(); ++v)
                    std::cout << "  v" << v << " "
                              << prk::to_string(table.potentials[static_cast<size_t>(v)]) << "\n";
                std::cout << "t-gains:\n";
                for (int e = 0; e < g.n_edges(); ++e)
                    std::cout << "  e" << e << " "
                              << prk::to_string(table.t_gains[static_cast<size_t>(e)]) << "\n";
            }
            return kExitRigid;
        }

        if (dec_cmd->parsed()) {
            LoadedDocument loaded = load_document(path, std::nullopt);
            prk::OrbitGraph g = loaded.doc.graph;
            if (g.arity() == 1) g = prk::lift_cylinder(g);
            prk::TreeMapDecomposition d;
            try {
                d = prk::tree_map_decompose(g);
            } catch (const std::invalid_argument& e) {
                std::cout << path << ": " << e.what() << "\n";
                return kExitFlexible;
            }
            if (json_out) {
                nlohmann::ordered_json j;
                j["tree_edges"] = d.tree_edges;
                j["map_edges"] = d.map_edges;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "tree edges:";
                for (int id : d.tree_edges) std::cout << " " << id;
                std::cout << "\nmap edges:";
                for (int id : d.map_edges) std::cout << " " << id;
                std::cout << "\n";
            }
            return kExitRigid;
        }

        if (svg_cmd->parsed()) {
            LoadedDocument loaded = load_document(path, model_override);
            prk::OrbitGraph g = loaded.doc.graph;
            prk::TorusModel model = loaded.doc.model;
            if (model == prk::TorusModel::CircleFixed || model == prk::TorusModel::CircleFlexible)
                throw prk::ParseError("export-svg supports torus and cylinder models");
            if (g.arity() == 1) g = prk::lift_cylinder(g);

            auto x_pos = window_spec.find('x');
            int w = 0, h = 0;
            try {
                if (x_pos == std::string::npos) throw std::invalid_argument("window");
                w = std::stoi(window_spec.substr(0, x_pos));
                h = std::stoi(window_spec.substr(x_pos + 1));
            } catch (const std::exception&) {
                throw prk::ParseError("bad --window, expected WxH, e.g. 3x2");
            }
            if (w < 1 || h < 1) throw prk::ParseError("bad --window, dimensions must be positive");

            prk::Rng rng(seed);
            prk::Placement placement =
                prk::random_placement(g, model == prk::TorusModel::Cylinder
                                             ? prk::TorusModel::XVariable
                                             : model,
                                      rng);
            // Optional exact placement data next to the graph.
            if (loaded.raw.contains("positions")) {
                const auto& pos = loaded.raw["positions"];
                if (!pos.is_array() || static_cast<int>(pos.size()) != g.n_vertices())
                    throw prk::ParseError("positions: one [x, y] pair per vertex expected");
                for (int v = 0; v < g.n_vertices(); ++v) {
                    placement.positions[static_cast<size_t>(v)][0] =
                        prk::Rational(pos[static_cast<size_t>(v)].at(0).get<double>());
                    placement.positions[static_cast<size_t>(v)][1] =
                        prk::Rational(pos[static_cast<size_t>(v)].at(1).get<double>());
                }
            }
            if (loaded.raw.contains("lattice")) {
                const auto& lat = loaded.raw["lattice"];
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        placement.lattice[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                            prk::Rational(lat.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>());
            }
            auto frag = prk::derive(g, prk::box_window(w, h));
            std::string svg = prk::render_svg(g, placement, frag);
            if (!out_path.empty()) {
                write_file(out_path, svg);
                std::cout << "wrote " << out_path << " (" << frag.vertices.size() << " vertices, "
                          << frag.edges.size() << " edges in window)\n";
            } else {
                std::cout << svg;
            }
            return kExitRigid;
        }
    } catch (const prk::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const prk::BoundExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
