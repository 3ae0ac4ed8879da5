// Command-line interface: every subcommand operates on the multilayer
// edge-list and community file formats and prints plain text, CSV or JSON.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlmod/analysis.hpp"
#include "mlmod/bounds.hpp"
#include "mlmod/commstruct.hpp"
#include "mlmod/coupling.hpp"
#include "mlmod/mlnet.hpp"
#include "mlmod/modularity.hpp"
#include "mlmod/optimizer.hpp"
#include "mlmod/resolution.hpp"
#include "mlmod/util.hpp"

using nlohmann::json;

namespace {

struct EngineFlags {
    std::string resolution = "redundancy";
    std::string coupling = "sym";
    std::string ordering = "unordered";
    bool descending = false;
    bool time_aware = false;
    std::string layer_order_file;
    unsigned threads = 1;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
    cmd->add_option("--resolution", flags.resolution,
                    "Resolution factor: redundancy | fixed:<value>")
        ->capture_default_str();
    cmd->add_option("--coupling", flags.coupling,
                    "Inter-layer coupling: none | sym | asym-inner | asym-outer")
        ->capture_default_str();
    cmd->add_option("--ordering", flags.ordering,
                    "Layer pairing scheme: unordered | adjacent | succeeding")
        ->capture_default_str();
    cmd->add_flag("--descending", flags.descending, "Reverse the layer order");
    cmd->add_flag("--time-aware", flags.time_aware,
                  "Smooth couplings by temporal distance (ordered schemes only)");
    cmd->add_option("--threads", flags.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
}

mlmod::ResolutionSpec parse_resolution(const std::string& text) {
    if (text == "redundancy") return mlmod::ResolutionSpec::redundancy();
    if (text.rfind("fixed:", 0) == 0)
        return mlmod::ResolutionSpec::fixed(std::stod(text.substr(6)));
    throw mlmod::DomainError("unknown --resolution value: " + text);
}

mlmod::PairingKind parse_ordering(const std::string& text) {
    if (text == "unordered") return mlmod::PairingKind::Unordered;
    if (text == "adjacent") return mlmod::PairingKind::Adjacent;
    if (text == "succeeding") return mlmod::PairingKind::Succeeding;
    throw mlmod::DomainError("unknown --ordering value: " + text);
}

mlmod::CouplingSpec parse_coupling(const EngineFlags& flags) {
    mlmod::OrderingScheme scheme(parse_ordering(flags.ordering), {}, flags.descending);
    mlmod::CouplingSpec spec;
    if (flags.coupling == "none") {
        spec = mlmod::CouplingSpec::none(scheme);
    } else if (flags.coupling == "sym") {
        spec = mlmod::CouplingSpec::symmetric(scheme);
    } else if (flags.coupling == "asym-inner") {
        spec = mlmod::CouplingSpec::asymmetric_inner(scheme);
    } else if (flags.coupling == "asym-outer") {
        spec = mlmod::CouplingSpec::asymmetric_outer(scheme);
    } else {
        throw mlmod::DomainError("unknown --coupling value: " + flags.coupling);
    }
    spec.time_aware = flags.time_aware;
    spec.validate();
    return spec;
}

mlmod::MultilayerNetwork load_net(const std::string& path, const EngineFlags& flags) {
    mlmod::NetworkLoadOptions options;
    if (!flags.layer_order_file.empty()) options.layer_order_file = flags.layer_order_file;
    return mlmod::load_network(path, options);
}

mlmod::CommunityStructure load_comm(const std::string& path, const mlmod::MultilayerNetwork& net,
                                    const std::string& mode) {
    mlmod::CommunityFileMode file_mode;
    if (mode == "node-layer") {
        file_mode = mlmod::CommunityFileMode::PerNodeLayer;
    } else if (mode == "entity") {
        file_mode = mlmod::CommunityFileMode::PerEntity;
    } else if (mode == "auto") {
        // decide by the first record's field count
        std::ifstream probe(path);
        if (!probe) throw mlmod::Error("cannot open community file: " + path);
        std::string line;
        file_mode = mlmod::CommunityFileMode::PerNodeLayer;
        while (std::getline(probe, line)) {
            auto tokens = mlmod::split_ws(line);
            if (tokens.empty() || tokens[0].starts_with('#')) continue;
            file_mode = tokens.size() == 2 ? mlmod::CommunityFileMode::PerEntity
                                           : mlmod::CommunityFileMode::PerNodeLayer;
            break;
        }
    } else {
        throw mlmod::DomainError("unknown --mode value: " + mode);
    }
    std::vector<std::string> warnings;
    auto cs = mlmod::load_communities(path, net, file_mode, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return cs;
}

void print_csv(const mlmod::SweepTable& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << table.header[i] << (i + 1 < table.header.size() ? "," : "\n");
    for (const auto& row : table.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

json table_to_json(const mlmod::SweepTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = row[i];
        rows.push_back(obj);
    }
    return rows;
}

json report_to_json(const mlmod::QReport& report, const mlmod::MultilayerNetwork& net,
                    const mlmod::CommunityStructure& cs) {
    json out;
    out["q"] = report.q_global;
    out["normalizer"] = report.normalizer;
    json per_community = json::array();
    for (mlmod::CommunityId c = 0; c < cs.community_count(); ++c) {
        json entry;
        entry["community"] = c;
        entry["contribution"] = report.community_contribution[c];
        json gammas;
        for (mlmod::LayerId l = 0; l < net.layer_count(); ++l)
            gammas[net.layer_label(l)] = report.gamma_at(c, l, net.layer_count());
        entry["gamma"] = gammas;
        per_community.push_back(entry);
    }
    out["communities"] = per_community;
    json couplings = json::array();
    for (const auto& entry : report.ic_values) {
        couplings.push_back({{"community", entry.community},
                             {"from", net.layer_label(entry.from)},
                             {"to", net.layer_label(entry.to)},
                             {"value", entry.value}});
    }
    out["couplings"] = couplings;
    return out;
}

std::string fixed3(double x) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << x;
    return out.str();
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) values.push_back(std::stod(item));
    return values;
}

std::vector<std::uint32_t> parse_uint_list(const std::string& text) {
    std::vector<std::uint32_t> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ','))
        values.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    return values;
}

int run(int argc, char** argv) {
    CLI::App app{"Multilayer network modularity toolkit"};
    app.require_subcommand(1);

    EngineFlags flags;
    bool as_json = false;
    std::string net_path, comm_path, comm_mode = "auto";

    // --- q ---
    auto* q_cmd = app.add_subcommand("q", "Multilayer modularity Q of a community structure");
    add_engine_flags(q_cmd, flags);
    std::string report_kind = "global";
    q_cmd->add_option("--report", report_kind, "global | per-community | full-json")
        ->capture_default_str();
    q_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    q_cmd->add_option("--mode", comm_mode, "Community file mode: auto | node-layer | entity")
        ->capture_default_str();
    q_cmd->add_flag("--json", as_json, "JSON output");
    q_cmd->add_option("network", net_path, "Network file")->required();
    q_cmd->add_option("communities", comm_path, "Community file")->required();
    q_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        const auto report = mlmod::q_multilayer(net, cs, parse_resolution(flags.resolution),
                                                parse_coupling(flags), flags.threads);
        if (report_kind == "full-json" || as_json) {
            std::cout << report_to_json(report, net, cs).dump(2) << '\n';
        } else if (report_kind == "per-community") {
            std::cout << "community,contribution\n";
            for (mlmod::CommunityId c = 0; c < cs.community_count(); ++c)
                std::cout << c << ',' << std::setprecision(12) << report.community_contribution[c]
                          << '\n';
            std::cout << "q," << std::setprecision(12) << report.q_global << '\n';
        } else {
            std::cout << std::setprecision(12) << report.q_global << '\n';
        }
    });

    // --- qms ---
    auto* qms_cmd = app.add_subcommand("qms", "Multislice modularity with constant coupling");
    std::string gamma_text = "1";
    double omega = 1.0;
    qms_cmd->add_option("--gamma", gamma_text, "Resolution: a value or a per-layer file")
        ->capture_default_str();
    qms_cmd->add_option("--omega", omega, "Constant coupling weight")->capture_default_str();
    qms_cmd->add_option("--ordering", flags.ordering, "unordered | adjacent | succeeding")
        ->capture_default_str();
    qms_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    qms_cmd->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    qms_cmd->add_flag("--json", as_json, "JSON output");
    qms_cmd->add_option("network", net_path, "Network file")->required();
    qms_cmd->add_option("communities", comm_path, "Community file")->required();
    qms_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        mlmod::QmsParams params;
        params.omega = omega;
        try {
            params.gamma_per_layer.assign(net.layer_count(), std::stod(gamma_text));
        } catch (const std::invalid_argument&) {
            std::ifstream in(gamma_text);
            if (!in) throw mlmod::Error("cannot open per-layer gamma file: " + gamma_text);
            double value;
            while (in >> value) params.gamma_per_layer.push_back(value);
        }
        const double q = mlmod::q_multislice(net, cs, params,
                                             mlmod::OrderingScheme(parse_ordering(flags.ordering)));
        if (as_json) {
            std::cout << json{{"q_ms", q}}.dump(2) << '\n';
        } else {
            std::cout << std::setprecision(12) << q << '\n';
        }
    });

    // --- gamma-table ---
    auto* gt_cmd = app.add_subcommand("gamma-table",
                                      "Redundancy-based resolution factor per community and layer");
    gt_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    gt_cmd->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    gt_cmd->add_flag("--json", as_json, "JSON output");
    gt_cmd->add_option("network", net_path, "Network file")->required();
    gt_cmd->add_option("communities", comm_path, "Community file")->required();
    gt_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        const auto index = mlmod::RedundantPairIndex::build(net, cs, flags.threads);
        if (as_json) {
            json out = json::array();
            for (mlmod::CommunityId c = 0; c < cs.community_count(); ++c) {
                json row;
                row["community"] = c;
                for (mlmod::LayerId l = 0; l < net.layer_count(); ++l) {
                    if (cs.projection(c, l).empty())
                        row[net.layer_label(l)] = nullptr;
                    else
                        row[net.layer_label(l)] = mlmod::gamma_from_nrp(index.nrp(l, c));
                }
                out.push_back(row);
            }
            std::cout << out.dump(2) << '\n';
            return;
        }
        std::cout << "community";
        for (mlmod::LayerId l = 0; l < net.layer_count(); ++l)
            std::cout << ',' << net.layer_label(l);
        std::cout << '\n';
        for (mlmod::CommunityId c = 0; c < cs.community_count(); ++c) {
            std::cout << c;
            for (mlmod::LayerId l = 0; l < net.layer_count(); ++l) {
                std::cout << ',';
                if (!cs.projection(c, l).empty())
                    std::cout << fixed3(mlmod::gamma_from_nrp(index.nrp(l, c)));
            }
            std::cout << '\n';
        }
    });

    // --- ic-table ---
    auto* ic_cmd = app.add_subcommand(
        "ic-table", "Inter-layer coupling variants cumulated over admissible pairings");
    ic_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    ic_cmd->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    ic_cmd->add_flag("--time-aware", flags.time_aware, "Apply temporal smoothing");
    ic_cmd->add_flag("--json", as_json, "JSON output");
    ic_cmd->add_option("network", net_path, "Network file")->required();
    ic_cmd->add_option("communities", comm_path, "Community file")->required();
    ic_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        struct VariantSpec {
            std::string name;
            mlmod::CouplingSpec spec;
        };
        using mlmod::CouplingSpec;
        using mlmod::OrderingScheme;
        using mlmod::PairingKind;
        std::vector<VariantSpec> variants = {
            {"ic_s", CouplingSpec::symmetric(OrderingScheme(PairingKind::Unordered))},
            {"ic_a", CouplingSpec::asymmetric_inner(OrderingScheme(PairingKind::Unordered))},
            {"ic_ia_adj", CouplingSpec::asymmetric_inner(OrderingScheme(PairingKind::Adjacent))},
            {"ic_oa_adj", CouplingSpec::asymmetric_outer(OrderingScheme(PairingKind::Adjacent))},
            {"ic_ia_suc", CouplingSpec::asymmetric_inner(OrderingScheme(PairingKind::Succeeding))},
            {"ic_oa_suc", CouplingSpec::asymmetric_outer(OrderingScheme(PairingKind::Succeeding))},
        };
        if (flags.time_aware)
            for (auto& v : variants)
                if (v.spec.scheme.kind() != PairingKind::Unordered) v.spec.time_aware = true;
        json json_rows = json::array();
        std::cout << "community";
        for (const auto& v : variants)
            std::cout << ',' << v.name << "_sum," << v.name << "_mean," << v.name << "_sd,"
                      << v.name << "_mean_nonempty," << v.name << "_sd_nonempty";
        std::cout << '\n';
        for (mlmod::CommunityId c = 0; c < cs.community_count(); ++c) {
            std::cout << c;
            json row;
            row["community"] = c;
            for (const auto& v : variants) {
                const mlmod::ResolvedOrdering ordering(net, v.spec.scheme);
                std::vector<double> values;
                std::vector<double> nonempty;
                for (mlmod::LayerId l = 0; l < net.layer_count(); ++l) {
                    for (mlmod::LayerId lp : ordering.pairings(l)) {
                        const double value = mlmod::ic(v.spec, cs, net, c, l, lp, ordering);
                        values.push_back(value);
                        const mlmod::LayerId src =
                            v.spec.variant == CouplingSpec::Variant::AsymmetricOuter ? lp : l;
                        const mlmod::LayerId dst = src == l ? lp : l;
                        if (!cs.projection(c, src).empty() && !cs.projection(c, dst).empty())
                            nonempty.push_back(value);
                    }
                }
                auto mean_sd = [](const std::vector<double>& xs) -> std::pair<double, double> {
                    if (xs.empty()) return {0.0, 0.0};
                    double mean = 0.0;
                    for (double x : xs) mean += x;
                    mean /= static_cast<double>(xs.size());
                    double var = 0.0;
                    for (double x : xs) var += (x - mean) * (x - mean);
                    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
                };
                double sum = 0.0;
                for (double x : values) sum += x;
                const auto [mean_all, sd_all] = mean_sd(values);
                const auto [mean_ne, sd_ne] = mean_sd(nonempty);
                std::cout << ',' << fixed3(sum) << ',' << fixed3(mean_all) << ',' << fixed3(sd_all)
                          << ',' << fixed3(mean_ne) << ',' << fixed3(sd_ne);
                row[v.name] = {{"sum", sum},
                               {"mean", mean_all},
                               {"sd", sd_all},
                               {"mean_nonempty", mean_ne},
                               {"sd_nonempty", sd_ne}};
            }
            std::cout << '\n';
            json_rows.push_back(row);
        }
        if (as_json) std::cout << json_rows.dump(2) << '\n';
    });

    // --- bounds ---
    auto* bounds_cmd =
        app.add_subcommand("bounds", "Closed-form Q extremes of the canonical constructions");
    std::uint32_t bound_n = 8, bound_layers = 2;
    int bound_eta = 0, bound_beta = 1;
    std::string bound_scheme = "unordered", bound_gamma = "redundancy";
    bool verify = false;
    bounds_cmd->add_option("--n", bound_n, "Entity count (even, >= 4)")->capture_default_str();
    bounds_cmd->add_option("--layers", bound_layers, "Layer count")->capture_default_str();
    bounds_cmd->add_option("--scheme", bound_scheme, "unordered | adjacent | succeeding")
        ->capture_default_str();
    bounds_cmd->add_option("--eta", bound_eta, "0 = symmetric, 1 = asymmetric coupling")
        ->capture_default_str();
    bounds_cmd->add_option("--beta", bound_beta, "0 = no coupling term")->capture_default_str();
    bounds_cmd->add_option("--gamma-variant", bound_gamma, "redundancy | fixed1")
        ->capture_default_str();
    bounds_cmd->add_flag("--verify", verify, "Evaluate the engine on the generated graphs");
    bounds_cmd->add_flag("--json", as_json, "JSON output");
    bounds_cmd->callback([&] {
        mlmod::BoundSpec spec;
        spec.n = bound_n;
        spec.ell = bound_layers;
        spec.scheme = parse_ordering(bound_scheme);
        spec.eta = bound_eta;
        spec.beta = bound_beta;
        spec.gamma = bound_gamma == "fixed1" ? mlmod::BoundSpec::Gamma::FixedOne
                                             : mlmod::BoundSpec::Gamma::RedundancyBased;
        const double lower = mlmod::lower_bound(spec);
        const double upper = mlmod::upper_bound(spec);
        json out;
        out["lower"] = lower;
        out["upper"] = upper;
        out["p"] = mlmod::pairing_total(spec.scheme, spec.ell);
        if (verify) {
            const auto rspec = spec.gamma == mlmod::BoundSpec::Gamma::FixedOne
                                   ? mlmod::ResolutionSpec::fixed(1.0)
                                   : mlmod::ResolutionSpec::redundancy();
            mlmod::OrderingScheme scheme(spec.scheme);
            mlmod::CouplingSpec cspec = spec.eta == 0 ? mlmod::CouplingSpec::symmetric(scheme)
                                                      : mlmod::CouplingSpec::asymmetric_inner(scheme);
            cspec.beta = spec.beta;
            const auto [bip_net, bip_cs] = mlmod::gen_bipartite_canonical(spec.n, spec.ell);
            const auto [clq_net, clq_cs] = mlmod::gen_clique_canonical(spec.n, spec.ell);
            const double q_bip = mlmod::q_multilayer(bip_net, bip_cs, rspec, cspec).q_global;
            const double q_clq = mlmod::q_multilayer(clq_net, clq_cs, rspec, cspec).q_global;
            out["engine_lower"] = q_bip;
            out["engine_upper"] = q_clq;
            out["delta_lower"] = std::abs(q_bip - lower);
            out["delta_upper"] = std::abs(q_clq - upper);
        }
        if (as_json) {
            std::cout << out.dump(2) << '\n';
        } else {
            std::cout << std::setprecision(12) << "lower " << lower << "\nupper " << upper << '\n';
            if (verify)
                std::cout << "engine_lower " << out["engine_lower"].get<double>()
                          << " (delta " << out["delta_lower"].get<double>() << ")\n"
                          << "engine_upper " << out["engine_upper"].get<double>() << " (delta "
                          << out["delta_upper"].get<double>() << ")\n";
        }
    });

    // --- stats ---
    auto* stats_cmd =
        app.add_subcommand("stats", "Per-community structural statistics (and Q correlation)");
    bool correlate = false;
    add_engine_flags(stats_cmd, flags);
    stats_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    stats_cmd->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    stats_cmd->add_flag("--correlate", correlate,
                        "Append Pearson correlation of each statistic with the per-community Q");
    stats_cmd->add_flag("--json", as_json, "JSON output");
    stats_cmd->add_option("network", net_path, "Network file")->required();
    stats_cmd->add_option("communities", comm_path, "Community file")->required();
    stats_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        const auto stats = mlmod::community_stats(net, cs);
        std::vector<double> contributions;
        if (correlate) {
            const auto report = mlmod::q_multilayer(net, cs, parse_resolution(flags.resolution),
                                                    parse_coupling(flags), flags.threads);
            contributions = report.community_contribution;
        }
        json out;
        json rows = json::array();
        std::cout << "community,apl,cc,node_coverage,edge_coverage,redundancy";
        if (correlate) std::cout << ",q_contribution";
        std::cout << '\n';
        for (mlmod::CommunityId c = 0; c < stats.size(); ++c) {
            const auto& s = stats[c];
            std::cout << c << ',' << s.avg_path_length << ',' << s.clustering_coeff << ','
                      << s.node_coverage << ',' << s.edge_coverage << ',' << s.redundancy;
            if (correlate) std::cout << ',' << std::setprecision(12) << contributions[c];
            std::cout << '\n';
            rows.push_back({{"community", c},
                            {"apl", s.avg_path_length},
                            {"cc", s.clustering_coeff},
                            {"node_coverage", s.node_coverage},
                            {"edge_coverage", s.edge_coverage},
                            {"redundancy", s.redundancy}});
        }
        out["communities"] = rows;
        if (correlate && stats.size() >= 2) {
            auto column = [&](auto getter) {
                std::vector<double> xs;
                for (const auto& s : stats) xs.push_back(getter(s));
                return xs;
            };
            const std::vector<std::pair<std::string, std::vector<double>>> columns = {
                {"apl", column([](const auto& s) { return s.avg_path_length; })},
                {"cc", column([](const auto& s) { return s.clustering_coeff; })},
                {"node_coverage", column([](const auto& s) { return s.node_coverage; })},
                {"edge_coverage", column([](const auto& s) { return s.edge_coverage; })},
                {"redundancy", column([](const auto& s) { return s.redundancy; })},
            };
            json corr;
            std::cout << "# pearson_vs_q";
            for (const auto& [name, xs] : columns) {
                std::string cell;
                try {
                    const double r = mlmod::pearson(xs, contributions);
                    cell = fixed3(r);
                    corr[name] = r;
                } catch (const mlmod::DomainError&) {
                    cell = "undefined";
                    corr[name] = nullptr;
                }
                std::cout << ' ' << name << '=' << cell;
            }
            std::cout << '\n';
            out["pearson_vs_q"] = corr;
        }
        if (as_json) std::cout << out.dump(2) << '\n';
    });

    // --- gen ---
    auto* gen_cmd = app.add_subcommand("gen", "Synthetic network generators");
    gen_cmd->require_subcommand(1);
    std::uint32_t gen_n = 128, gen_k = 4, gen_layers = 1, gen_replicate = 1;
    double gen_p = 0.1, gen_p_in = 0.5, gen_p_out = 0.05;
    std::uint64_t gen_seed = 1;
    std::string out_net, out_comm, out_order;
    std::vector<std::string> compose_files;

    auto add_output_options = [&](CLI::App* cmd, bool with_comm) {
        cmd->add_option("--out", out_net, "Output network file (default stdout)");
        if (with_comm)
            cmd->add_option("--out-communities", out_comm, "Write the planted communities");
        cmd->add_option("--out-layer-order", out_order, "Write the layer-order file");
    };
    auto write_network = [&](const mlmod::MultilayerNetwork& net) {
        if (out_net.empty()) {
            mlmod::save_network(net, std::cout);
        } else {
            std::ofstream out(out_net);
            if (!out) throw mlmod::Error("cannot write " + out_net);
            mlmod::save_network(net, out);
        }
        if (!out_order.empty()) {
            std::ofstream out(out_order);
            if (!out) throw mlmod::Error("cannot write " + out_order);
            mlmod::save_layer_order(net, out);
        }
    };
    auto write_communities = [&](const mlmod::MultilayerNetwork& net,
                                 const mlmod::CommunityStructure& cs) {
        if (out_comm.empty()) return;
        std::ofstream out(out_comm);
        if (!out) throw mlmod::Error("cannot write " + out_comm);
        mlmod::save_communities(cs, net, out);
    };

    auto* gen_er_cmd = gen_cmd->add_subcommand("er", "Erdos-Renyi layers");
    gen_er_cmd->add_option("--n", gen_n, "Entities")->capture_default_str();
    gen_er_cmd->add_option("--p", gen_p, "Edge probability")->capture_default_str();
    gen_er_cmd->add_option("--layers", gen_layers, "Independent layers")->capture_default_str();
    gen_er_cmd->add_option("--seed", gen_seed, "Seed")->capture_default_str();
    add_output_options(gen_er_cmd, false);
    gen_er_cmd->callback([&] {
        std::vector<mlmod::SingleLayerGraph> graphs;
        for (std::uint32_t i = 0; i < gen_layers; ++i)
            graphs.push_back(mlmod::gen_er(gen_n, gen_p, gen_seed + i));
        write_network(mlmod::compose_layers(graphs));
    });

    auto* gen_pl_cmd = gen_cmd->add_subcommand("planted", "Planted-partition layers");
    gen_pl_cmd->add_option("--n", gen_n, "Entities")->capture_default_str();
    gen_pl_cmd->add_option("--k", gen_k, "Blocks")->capture_default_str();
    gen_pl_cmd->add_option("--p-in", gen_p_in, "Intra-block probability")->capture_default_str();
    gen_pl_cmd->add_option("--p-out", gen_p_out, "Inter-block probability")->capture_default_str();
    gen_pl_cmd->add_option("--layers", gen_layers, "Replications of the layer")
        ->capture_default_str();
    gen_pl_cmd->add_option("--seed", gen_seed, "Seed")->capture_default_str();
    add_output_options(gen_pl_cmd, true);
    gen_pl_cmd->callback([&] {
        const auto base = mlmod::gen_planted(gen_n, gen_k, gen_p_in, gen_p_out, gen_seed);
        const auto net = mlmod::compose_layers(std::span(&base, 1), gen_layers);
        write_network(net);
        write_communities(net, mlmod::block_structure(net, gen_k));
    });

    auto* gen_bip_cmd = gen_cmd->add_subcommand("bipartite", "Canonical bipartite construction");
    gen_bip_cmd->add_option("--n", gen_n, "Entities (even)")->capture_default_str();
    gen_bip_cmd->add_option("--layers", gen_layers, "Layers")->capture_default_str();
    add_output_options(gen_bip_cmd, true);
    gen_bip_cmd->callback([&] {
        const auto [net, cs] = mlmod::gen_bipartite_canonical(gen_n, gen_layers);
        write_network(net);
        write_communities(net, cs);
    });

    auto* gen_clq_cmd = gen_cmd->add_subcommand("clique", "Canonical disjoint-clique construction");
    gen_clq_cmd->add_option("--n", gen_n, "Entities (even)")->capture_default_str();
    gen_clq_cmd->add_option("--layers", gen_layers, "Layers")->capture_default_str();
    add_output_options(gen_clq_cmd, true);
    gen_clq_cmd->callback([&] {
        const auto [net, cs] = mlmod::gen_clique_canonical(gen_n, gen_layers);
        write_network(net);
        write_communities(net, cs);
    });

    auto* gen_cmp_cmd =
        gen_cmd->add_subcommand("compose", "Stack single-layer edge lists into a multilayer network");
    gen_cmp_cmd->add_option("--replicate", gen_replicate, "Repeat the whole sequence")
        ->capture_default_str();
    gen_cmp_cmd->add_option("files", compose_files, "Single-layer edge lists")->required();
    add_output_options(gen_cmp_cmd, false);
    gen_cmp_cmd->callback([&] {
        // unify the entity universe across the inputs
        std::vector<mlmod::SingleLayerGraph> graphs;
        std::vector<std::string> labels;
        std::unordered_map<std::string, mlmod::EntityId> ids;
        auto intern = [&](const std::string& label) {
            auto [it, inserted] = ids.emplace(label, static_cast<mlmod::EntityId>(labels.size()));
            if (inserted) labels.push_back(label);
            return it->second;
        };
        std::vector<mlmod::SingleLayerGraph> raw;
        for (const auto& file : compose_files) raw.push_back(mlmod::load_single_layer(file));
        for (auto& g : raw)
            for (mlmod::EntityId u = 0; u < g.n; ++u) intern(g.entity_labels[u]);
        for (auto& g : raw) {
            mlmod::SingleLayerGraph remapped;
            remapped.n = static_cast<std::uint32_t>(labels.size());
            remapped.entity_labels = labels;
            for (const auto& e : g.edges) {
                mlmod::EntityId u = intern(g.entity_labels[e.u]);
                mlmod::EntityId v = intern(g.entity_labels[e.v]);
                if (u > v) std::swap(u, v);
                remapped.edges.push_back({u, v});
            }
            std::sort(remapped.edges.begin(), remapped.edges.end());
            graphs.push_back(std::move(remapped));
        }
        write_network(mlmod::compose_layers(graphs, gen_replicate));
    });

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid experiments over k, omega, gamma, layers");
    sweep_cmd->require_subcommand(1);
    std::string list_text;
    double sweep_gamma = 1.0;
    std::uint64_t sweep_seed = 1;

    auto* sweep_k = sweep_cmd->add_subcommand("k", "Q over block structures of k communities");
    add_engine_flags(sweep_k, flags);
    sweep_k->add_option("--k", list_text, "Comma-separated k values")->required();
    sweep_k->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    sweep_k->add_flag("--json", as_json, "JSON output");
    sweep_k->add_option("network", net_path, "Network file")->required();
    sweep_k->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto ks = parse_uint_list(list_text);
        const auto table = mlmod::sweep_partition_k(net, ks, parse_resolution(flags.resolution),
                                                    parse_coupling(flags), flags.threads);
        if (as_json)
            std::cout << table_to_json(table).dump(2) << '\n';
        else
            print_csv(table, std::cout);
    });

    auto* sweep_omega = sweep_cmd->add_subcommand("omega", "Q_ms over omega with fixed gamma");
    sweep_omega->add_option("--omega", list_text, "Comma-separated omega values")->required();
    sweep_omega->add_option("--gamma", sweep_gamma, "Fixed resolution")->capture_default_str();
    sweep_omega->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    sweep_omega->add_flag("--json", as_json, "JSON output");
    sweep_omega->add_option("network", net_path, "Network file")->required();
    sweep_omega->add_option("communities", comm_path, "Community file")->required();
    sweep_omega->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        const auto omegas = parse_double_list(list_text);
        const auto table = mlmod::sweep_qms_omega(net, cs, sweep_gamma, omegas);
        if (as_json)
            std::cout << table_to_json(table).dump(2) << '\n';
        else
            print_csv(table, std::cout);
    });

    auto* sweep_gamma_cmd =
        sweep_cmd->add_subcommand("gamma", "Q_ms over gamma with omega = 1 - gamma");
    sweep_gamma_cmd->add_option("--gamma", list_text, "Comma-separated gamma values")->required();
    sweep_gamma_cmd->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    sweep_gamma_cmd->add_flag("--json", as_json, "JSON output");
    sweep_gamma_cmd->add_option("network", net_path, "Network file")->required();
    sweep_gamma_cmd->add_option("communities", comm_path, "Community file")->required();
    sweep_gamma_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto cs = load_comm(comm_path, net, comm_mode);
        const auto gammas = parse_double_list(list_text);
        const auto table = mlmod::sweep_qms_gamma(net, cs, gammas);
        if (as_json)
            std::cout << table_to_json(table).dump(2) << '\n';
        else
            print_csv(table, std::cout);
    });

    auto* sweep_layers = sweep_cmd->add_subcommand(
        "layers", "Timing grid over replicated planted-partition networks");
    std::string layers_text = "2,3,4,5,6,7,8,9,10";
    std::string nodes_text = "128,256,384,512,640,768,896,1024";
    add_engine_flags(sweep_layers, flags);
    sweep_layers->add_option("--layers", layers_text, "Comma-separated layer counts")
        ->capture_default_str();
    sweep_layers->add_option("--nodes", nodes_text, "Comma-separated node counts")
        ->capture_default_str();
    sweep_layers->add_option("--seed", sweep_seed, "Seed")->capture_default_str();
    sweep_layers->add_flag("--json", as_json, "JSON output");
    sweep_layers->callback([&] {
        const auto table = mlmod::sweep_timing(parse_uint_list(layers_text),
                                               parse_uint_list(nodes_text), sweep_seed,
                                               parse_resolution(flags.resolution),
                                               parse_coupling(flags), flags.threads);
        if (as_json)
            std::cout << table_to_json(table).dump(2) << '\n';
        else
            print_csv(table, std::cout);
    });

    // --- detect ---
    auto* detect_cmd = app.add_subcommand("detect", "Greedy agglomerative Q maximization");
    std::string init_text = "singletons";
    std::size_t max_passes = 0;
    bool debug_check = false;
    add_engine_flags(detect_cmd, flags);
    detect_cmd->add_option("--init", init_text, "singletons | entity-singletons")
        ->capture_default_str();
    detect_cmd->add_option("--max-passes", max_passes, "Merge cap (0 = unbounded)")
        ->capture_default_str();
    detect_cmd->add_flag("--debug-check", debug_check,
                         "Re-verify every accepted merge with the full engine");
    detect_cmd->add_option("--out", out_comm, "Write the structure to a file");
    detect_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    detect_cmd->add_flag("--json", as_json, "JSON output");
    detect_cmd->add_option("network", net_path, "Network file")->required();
    detect_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        const auto init = init_text == "entity-singletons" ? mlmod::DetectInit::EntitySingletons
                                                           : mlmod::DetectInit::Singletons;
        const auto result =
            mlmod::greedy_maximize(net, parse_resolution(flags.resolution), parse_coupling(flags),
                                   init, max_passes, debug_check);
        if (!out_comm.empty()) {
            std::ofstream out(out_comm);
            if (!out) throw mlmod::Error("cannot write " + out_comm);
            mlmod::save_communities(result.structure, net, out);
        } else if (!as_json) {
            mlmod::save_communities(result.structure, net, std::cout);
        }
        if (as_json) {
            json out;
            out["q"] = result.report.q_global;
            out["communities"] = result.structure.community_count();
            out["merges"] = result.merge_log.size();
            std::cout << out.dump(2) << '\n';
        } else {
            std::cout << "# q " << std::setprecision(12) << result.report.q_global
                      << " communities " << result.structure.community_count() << " merges "
                      << result.merge_log.size() << '\n';
        }
    });

    // --- validate ---
    auto* validate_cmd =
        app.add_subcommand("validate", "Check a network/community pair against the invariants");
    validate_cmd->add_option("--layer-order", flags.layer_order_file, "Layer-order file");
    validate_cmd->add_option("--mode", comm_mode, "Community file mode")->capture_default_str();
    validate_cmd->add_flag("--json", as_json, "JSON output");
    validate_cmd->add_option("network", net_path, "Network file")->required();
    validate_cmd->add_option("communities", comm_path, "Community file")
        ->required(false);
    validate_cmd->callback([&] {
        const auto net = load_net(net_path, flags);
        std::vector<std::string> checks;
        // handshake per layer
        for (mlmod::LayerId l = 0; l < net.layer_count(); ++l) {
            std::uint64_t sum = 0;
            for (mlmod::EntityId u : net.nodes(l)) sum += net.degree(u, l);
            if (sum != 2 * net.edge_count(l))
                throw mlmod::DomainError("handshake violated on layer " + net.layer_label(l));
        }
        checks.push_back("network: " + std::to_string(net.entity_count()) + " entities, " +
                         std::to_string(net.layer_count()) + " layers, " +
                         std::to_string(net.total_edge_count()) + " edges");
        if (!comm_path.empty()) {
            const auto cs = load_comm(comm_path, net, comm_mode);
            const auto table = mlmod::compute_degree_table(cs, net);
            for (mlmod::LayerId l = 0; l < net.layer_count(); ++l) {
                std::uint64_t total = 0;
                for (mlmod::CommunityId c = 0; c < cs.community_count(); ++c)
                    total += table.d(c, l);
                if (total != 2 * net.edge_count(l))
                    throw mlmod::DomainError("community degrees do not sum to 2|E| on layer " +
                                             net.layer_label(l));
            }
            checks.push_back("communities: " + std::to_string(cs.community_count()) +
                             " communities cover every occurrence");
        }
        if (as_json) {
            std::cout << json{{"ok", true}, {"checks", checks}}.dump(2) << '\n';
        } else {
            for (const auto& line : checks) std::cout << line << '\n';
            std::cout << "ok\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mlmod::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
