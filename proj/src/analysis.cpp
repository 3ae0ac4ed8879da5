#include "mlmod/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "mlmod/modularity.hpp"
#include "mlmod/util.hpp"

namespace mlmod {

namespace {

std::string format_double(double x) {
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::vector<CommunityStats> community_stats(const MultilayerNetwork& net,
                                            const CommunityStructure& cs) {
    const std::size_t ell = net.layer_count();
    const std::size_t k = cs.community_count();
    RedundantPairIndex pair_index = RedundantPairIndex::build(net, cs);

    std::vector<CommunityStats> stats(k);
    for (CommunityId c = 0; c < k; ++c) {
        double apl_sum = 0.0;
        std::size_t apl_layers = 0;
        double cc_sum = 0.0;
        std::size_t cc_layers = 0;
        double node_cov = 0.0, edge_cov = 0.0;

        for (LayerId l = 0; l < ell; ++l) {
            auto members = cs.projection(c, l);
            if (!net.nodes(l).empty())
                node_cov += static_cast<double>(members.size()) /
                            static_cast<double>(net.nodes(l).size());
            if (net.edge_count(l) > 0) {
                std::size_t internal_edges = 0;
                for (const Edge& e : net.edges(l))
                    if (cs.community_of(e.u, l) == c && cs.community_of(e.v, l) == c)
                        ++internal_edges;
                edge_cov += static_cast<double>(internal_edges) /
                            static_cast<double>(net.edge_count(l));
            }
            if (members.empty()) continue;

            // induced-subgraph shortest paths, disconnected pairs excluded
            if (members.size() >= 2) {
                std::uint64_t dist_sum = 0, pair_count = 0;
                std::vector<std::int64_t> dist(net.entity_count(), -1);
                std::vector<EntityId> queue;
                for (EntityId start : members) {
                    for (EntityId u : members) dist[u] = -1;
                    dist[start] = 0;
                    queue.assign(1, start);
                    for (std::size_t head = 0; head < queue.size(); ++head) {
                        const EntityId u = queue[head];
                        for (EntityId v : net.neighbors(u, l)) {
                            if (cs.community_of(v, l) != c || dist[v] >= 0) continue;
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                    for (EntityId u : members) {
                        if (u == start || dist[u] < 0) continue;
                        dist_sum += static_cast<std::uint64_t>(dist[u]);
                        ++pair_count;
                    }
                }
                if (pair_count > 0) {
                    apl_sum += static_cast<double>(dist_sum) / static_cast<double>(pair_count);
                    ++apl_layers;
                }
            }

            if (members.size() >= 3) {
                double local_sum = 0.0;
                for (EntityId u : members) {
                    std::vector<EntityId> inside;
                    for (EntityId v : net.neighbors(u, l))
                        if (cs.community_of(v, l) == c) inside.push_back(v);
                    if (inside.size() < 2) continue;  // local coefficient 0
                    std::size_t links = 0;
                    for (std::size_t i = 0; i < inside.size(); ++i)
                        for (std::size_t j = i + 1; j < inside.size(); ++j)
                            if (net.has_edge(inside[i], inside[j], l)) ++links;
                    local_sum += 2.0 * static_cast<double>(links) /
                                 (static_cast<double>(inside.size()) *
                                  static_cast<double>(inside.size() - 1));
                }
                cc_sum += local_sum / static_cast<double>(members.size());
                ++cc_layers;
            }
        }

        stats[c].avg_path_length = apl_layers ? apl_sum / static_cast<double>(apl_layers) : 0.0;
        stats[c].clustering_coeff = cc_layers ? cc_sum / static_cast<double>(cc_layers) : 0.0;
        stats[c].node_coverage = node_cov / static_cast<double>(ell);
        stats[c].edge_coverage = edge_cov / static_cast<double>(ell);
        stats[c].redundancy = pair_index.redundancy(c);
    }
    return stats;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DomainError("pearson: sequences differ in length");
    if (xs.size() < 2) throw DomainError("pearson: need at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DomainError("pearson: zero variance makes the correlation undefined");
    return sxy / std::sqrt(sxx * syy);
}

SingleLayerGraph gen_er(std::uint32_t n, double edge_prob, std::uint64_t seed) {
    if (edge_prob < 0.0 || edge_prob > 1.0) throw DomainError("gen_er: probability out of [0,1]");
    DeterministicRng rng(seed);
    SingleLayerGraph g;
    g.n = n;
    for (EntityId u = 0; u < n; ++u)
        for (EntityId v = u + 1; v < n; ++v)
            if (rng.next_unit() < edge_prob) g.edges.push_back(Edge{u, v});
    return g;
}

SingleLayerGraph gen_planted(std::uint32_t n, std::uint32_t k, double p_in, double p_out,
                             std::uint64_t seed) {
    if (k == 0 || n % k != 0) throw DomainError("gen_planted: n must be divisible by k");
    if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
        throw DomainError("gen_planted: probabilities out of [0,1]");
    const std::uint32_t block = n / k;
    DeterministicRng rng(seed);
    SingleLayerGraph g;
    g.n = n;
    for (EntityId u = 0; u < n; ++u) {
        for (EntityId v = u + 1; v < n; ++v) {
            const double p = (u / block == v / block) ? p_in : p_out;
            if (rng.next_unit() < p) g.edges.push_back(Edge{u, v});
        }
    }
    return g;
}

SingleLayerGraph gen_planted_avg_degree(std::uint32_t n, std::uint32_t k, double avg_degree,
                                        double mu, std::uint64_t seed) {
    if (k == 0 || n % k != 0) throw DomainError("gen_planted_avg_degree: n not divisible by k");
    const double block = static_cast<double>(n) / k;
    const double p_in = block > 1.0 ? std::min(1.0, avg_degree * (1.0 - mu) / (block - 1.0)) : 0.0;
    const double p_out =
        n > block ? std::min(1.0, avg_degree * mu / (static_cast<double>(n) - block)) : 0.0;
    return gen_planted(n, k, p_in, p_out, seed);
}

SingleLayerGraph load_single_layer(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open edge list: " + path.string());
    SingleLayerGraph g;
    std::unordered_map<std::string, EntityId> ids;
    std::string line;
    std::size_t lineno = 0;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = ids.emplace(label, static_cast<EntityId>(g.entity_labels.size()));
        if (inserted) g.entity_labels.push_back(label);
        return it->second;
    };
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        bool blank = true;
        for (char ch : line)
            if (ch != ' ' && ch != '\t' && ch != '\r') {
                blank = (ch == '#');
                break;
            }
        if (blank) continue;
        auto tokens = split_ws(line);
        if (tokens.size() != 2)
            throw ParseError("expected '<entity> <entity>' in single-layer edge list", lineno);
        EntityId u = intern(tokens[0]);
        EntityId v = intern(tokens[1]);
        if (u == v) throw ParseError("self-loop on entity '" + tokens[0] + "'", lineno);
        if (u > v) std::swap(u, v);
        edges.push_back(Edge{u, v});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.n = static_cast<std::uint32_t>(g.entity_labels.size());
    g.edges = std::move(edges);
    return g;
}

MultilayerNetwork compose_layers(std::span<const SingleLayerGraph> graphs,
                                 std::uint32_t replicate) {
    if (graphs.empty() || replicate == 0)
        throw DomainError("compose_layers: need at least one layer graph");
    const std::uint32_t n = graphs[0].n;
    for (const auto& g : graphs)
        if (g.n != n) throw DomainError("compose_layers: layer graphs must share the entity universe");
    MultilayerNetwork net;
    const auto& labels = graphs[0].entity_labels;
    for (EntityId u = 0; u < n; ++u)
        net.intern_entity(labels.size() == n ? labels[u] : "v" + std::to_string(u));
    LayerId next = 0;
    for (std::uint32_t r = 0; r < replicate; ++r) {
        for (const auto& g : graphs) {
            const LayerId layer = net.add_layer("L" + std::to_string(++next));
            for (EntityId u = 0; u < n; ++u) net.add_node(u, layer);
            for (const Edge& e : g.edges) net.add_edge(e.u, e.v, layer);
        }
    }
    net.finalize();
    return net;
}

CommunityStructure block_structure(const MultilayerNetwork& net, std::uint32_t k) {
    const std::size_t n = net.entity_count();
    if (k == 0 || k > n) throw DomainError("block_structure: k out of range");
    std::vector<CommunityId> by_entity(n);
    for (EntityId u = 0; u < n; ++u)
        by_entity[u] = static_cast<CommunityId>(static_cast<std::uint64_t>(u) * k / n);
    return CommunityStructure::from_entity_assignment(net, by_entity);
}

SweepTable sweep_partition_k(const MultilayerNetwork& net, std::span<const std::uint32_t> ks,
                             const ResolutionSpec& rspec, const CouplingSpec& cspec,
                             unsigned threads) {
    SweepTable table;
    table.header = {"k", "q", "seconds"};
    for (std::uint32_t k : ks) {
        const auto cs = block_structure(net, k);
        const auto start = std::chrono::steady_clock::now();
        const QReport report = q_multilayer(net, cs, rspec, cspec, threads);
        const double secs = elapsed_seconds(start);
        table.rows.push_back(
            {std::to_string(k), format_double(report.q_global), format_double(secs)});
    }
    return table;
}

namespace {

/// Multislice evaluation without the omega sign check; the published gamma
/// sweep pairs gamma in [0,2] with omega = 1-gamma, which goes negative.
double qms_unchecked(const MultilayerNetwork& net, const CommunityStructure& cs,
                     double gamma, double omega) {
    const std::size_t ell = net.layer_count();
    const ResolvedOrdering ordering(net, OrderingScheme{});
    const CommunityDegreeTable degrees = compute_degree_table(cs, net);
    long double normalizer = 0.0L;
    for (LayerId l = 0; l < ell; ++l) normalizer += 2.0L * net.edge_count(l);
    std::uint64_t slots = 0;
    for (LayerId l = 0; l < ell; ++l)
        for (LayerId lp : ordering.pairings(l)) slots += net.shared_node_count(l, lp);
    normalizer += static_cast<long double>(omega) * slots;
    if (normalizer == 0.0L) return std::numeric_limits<double>::quiet_NaN();
    long double acc = 0.0L;
    for (LayerId l = 0; l < ell; ++l) {
        const std::uint64_t m2 = 2 * net.edge_count(l);
        for (CommunityId c = 0; c < cs.community_count(); ++c) {
            acc += static_cast<long double>(degrees.d_int(c, l));
            if (m2 > 0) {
                const long double dl = static_cast<long double>(degrees.d(c, l));
                acc -= static_cast<long double>(gamma) * dl * dl / static_cast<long double>(m2);
            }
        }
    }
    if (omega != 0.0) {
        for (LayerId l = 0; l < ell; ++l)
            for (LayerId lp : ordering.pairings(l)) {
                std::uint64_t agreements = 0;
                for (EntityId u : net.nodes(l))
                    if (net.has_node(u, lp) && cs.community_of(u, l) == cs.community_of(u, lp))
                        ++agreements;
                acc += static_cast<long double>(omega) * agreements;
            }
    }
    return static_cast<double>(acc / normalizer);
}

} // namespace

SweepTable sweep_qms_omega(const MultilayerNetwork& net, const CommunityStructure& cs,
                           double gamma, std::span<const double> omegas) {
    SweepTable table;
    table.header = {"omega", "q_ms", "seconds"};
    for (double omega : omegas) {
        const auto start = std::chrono::steady_clock::now();
        const double q =
            q_multislice(net, cs, QmsParams::uniform(gamma, omega, net.layer_count()));
        table.rows.push_back(
            {format_double(omega), format_double(q), format_double(elapsed_seconds(start))});
    }
    return table;
}

SweepTable sweep_qms_gamma(const MultilayerNetwork& net, const CommunityStructure& cs,
                           std::span<const double> gammas) {
    SweepTable table;
    table.header = {"gamma", "omega", "q_ms", "seconds"};
    for (double gamma : gammas) {
        const double omega = 1.0 - gamma;
        const auto start = std::chrono::steady_clock::now();
        const double q = qms_unchecked(net, cs, gamma, omega);
        table.rows.push_back({format_double(gamma), format_double(omega), format_double(q),
                              format_double(elapsed_seconds(start))});
    }
    return table;
}

SweepTable sweep_timing(std::span<const std::uint32_t> layer_counts,
                        std::span<const std::uint32_t> node_counts, std::uint64_t seed,
                        const ResolutionSpec& rspec, const CouplingSpec& cspec,
                        unsigned threads) {
    SweepTable table;
    table.header = {"layers", "nodes", "q", "seconds"};
    for (std::uint32_t ell : layer_counts) {
        for (std::uint32_t n : node_counts) {
            const SingleLayerGraph base = gen_planted_avg_degree(n, 4, 16.0, 0.1, seed ^ n);
            const MultilayerNetwork net = compose_layers(std::span(&base, 1), ell);
            const CommunityStructure cs = block_structure(net, 4);
            const auto start = std::chrono::steady_clock::now();
            const QReport report = q_multilayer(net, cs, rspec, cspec, threads);
            const double secs = elapsed_seconds(start);
            table.rows.push_back({std::to_string(ell), std::to_string(n),
                                  format_double(report.q_global), format_double(secs)});
        }
    }
    return table;
}

} // namespace mlmod
