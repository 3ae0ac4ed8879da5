#include "mlmod/modularity.hpp"

#include <algorithm>
#include <cmath>

#include "mlmod/util.hpp"

namespace mlmod {

QmsParams QmsParams::uniform(double gamma, double omega, std::size_t layer_count) {
    QmsParams params;
    params.gamma_per_layer.assign(layer_count, gamma);
    params.omega = omega;
    return params;
}

void QmsParams::validate(const MultilayerNetwork& net) const {
    if (gamma_per_layer.size() != net.layer_count())
        throw DomainError("q_multislice: need one resolution value per layer");
    for (double g : gamma_per_layer)
        if (!(g >= 0.0)) throw DomainError("q_multislice: resolution values must be non-negative");
    if (!(omega >= 0.0)) throw DomainError("q_multislice: omega must be non-negative");
}

double q_ng(const MultilayerNetwork& net, const CommunityStructure& cs,
            std::optional<LayerId> layer) {
    LayerId l = 0;
    if (layer) {
        l = *layer;
        if (l >= net.layer_count()) throw DomainError("q_ng: layer id out of range");
    } else if (net.layer_count() != 1) {
        throw DomainError("q_ng: network has several layers; designate one");
    }
    const std::uint64_t m2 = 2 * net.edge_count(l);
    if (m2 == 0) throw DomainError("q_ng: layer has no edges, modularity undefined");

    const std::size_t k = cs.community_count();
    std::vector<std::uint64_t> degree(k, 0), internal(k, 0);
    for (EntityId u : net.nodes(l)) degree[cs.community_of(u, l)] += net.degree(u, l);
    for (const Edge& e : net.edges(l)) {
        const CommunityId cu = cs.community_of(e.u, l);
        if (cu == cs.community_of(e.v, l)) internal[cu] += 2;
    }
    const double d = static_cast<double>(m2);
    std::vector<double> terms(k);
    for (std::size_t c = 0; c < k; ++c) {
        const double dc = static_cast<double>(degree[c]);
        terms[c] = static_cast<double>(internal[c]) / d - (dc / d) * (dc / d);
    }
    return pairwise_sum(terms);
}

QReport q_multilayer(const MultilayerNetwork& net, const CommunityStructure& cs,
                     const ResolutionSpec& rspec, const CouplingSpec& cspec, unsigned threads) {
    cspec.validate();
    const std::size_t ell = net.layer_count();
    const std::size_t k = cs.community_count();
    const ResolvedOrdering ordering(net, cspec.scheme);

    const std::uint64_t d_total = total_degree(net, cspec.scheme, cspec.beta);
    if (d_total == 0) throw DomainError("q_multilayer: total degree is zero");
    const double d = static_cast<double>(d_total);

    QReport report;
    report.resolution = rspec;
    report.coupling = cspec;
    report.normalizer = d;
    report.community_contribution.assign(k, 0.0);
    report.gamma_values.assign(k * ell, 0.0);

    const CommunityDegreeTable degrees = compute_degree_table(cs, net);

    if (rspec.kind == ResolutionSpec::Kind::Fixed) {
        std::fill(report.gamma_values.begin(), report.gamma_values.end(), rspec.fixed_value);
    } else {
        const RedundantPairIndex index = RedundantPairIndex::build(net, cs, threads);
        for (CommunityId c = 0; c < k; ++c)
            for (LayerId l = 0; l < ell; ++l)
                report.gamma_values[c * ell + l] = gamma_from_nrp(index.nrp(l, c));
    }

    std::vector<std::vector<IcEntry>> ic_per_community(k);
    parallel_for(k, threads, [&](std::size_t c) {
        long double acc = 0.0L;
        for (LayerId l = 0; l < ell; ++l) {
            const long double dl = static_cast<long double>(degrees.d(static_cast<CommunityId>(c), l));
            acc += static_cast<long double>(degrees.d_int(static_cast<CommunityId>(c), l));
            acc -= static_cast<long double>(report.gamma_values[c * ell + l]) * dl * dl / d;
            if (cspec.beta != 0) {
                for (LayerId lp : ordering.pairings(l)) {
                    const double value =
                        ic(cspec, cs, net, static_cast<CommunityId>(c), l, lp, ordering);
                    acc += value;
                    ic_per_community[c].push_back(IcEntry{static_cast<CommunityId>(c), l, lp, value});
                }
            }
        }
        report.community_contribution[c] = static_cast<double>(acc / d);
    });

    for (auto& entries : ic_per_community)
        report.ic_values.insert(report.ic_values.end(), entries.begin(), entries.end());
    report.q_global = pairwise_sum(report.community_contribution);
    return report;
}

double q_multislice(const MultilayerNetwork& net, const CommunityStructure& cs,
                    const QmsParams& params, const OrderingScheme& scheme) {
    params.validate(net);
    const std::size_t ell = net.layer_count();
    const ResolvedOrdering ordering(net, scheme);
    const CommunityDegreeTable degrees = compute_degree_table(cs, net);
    const std::size_t k = cs.community_count();

    // normalizer: intra-layer degrees plus one omega per directed valid
    // pairing per shared entity (2*omega per unordered coupling edge)
    long double normalizer = 0.0L;
    for (LayerId l = 0; l < ell; ++l) normalizer += 2.0L * net.edge_count(l);
    std::uint64_t coupling_slots = 0;
    for (LayerId l = 0; l < ell; ++l)
        for (LayerId lp : ordering.pairings(l)) coupling_slots += net.shared_node_count(l, lp);
    normalizer += static_cast<long double>(params.omega) * coupling_slots;
    if (normalizer <= 0.0L)
        throw DomainError("q_multislice: total degree is zero");

    long double acc = 0.0L;
    for (LayerId l = 0; l < ell; ++l) {
        const std::uint64_t m2 = 2 * net.edge_count(l);
        for (CommunityId c = 0; c < k; ++c) {
            acc += static_cast<long double>(degrees.d_int(c, l));
            if (m2 > 0) {  // a layer without edges contributes no null-model term
                const long double dl = static_cast<long double>(degrees.d(c, l));
                acc -= static_cast<long double>(params.gamma_per_layer[l]) * dl * dl /
                       static_cast<long double>(m2);
            }
        }
    }
    if (params.omega > 0.0) {
        for (LayerId l = 0; l < ell; ++l) {
            for (LayerId lp : ordering.pairings(l)) {
                std::uint64_t agreements = 0;
                for (EntityId u : net.nodes(l)) {
                    if (!net.has_node(u, lp)) continue;
                    if (cs.community_of(u, l) == cs.community_of(u, lp)) ++agreements;
                }
                acc += static_cast<long double>(params.omega) * agreements;
            }
        }
    }
    return static_cast<double>(acc / normalizer);
}

// --- brute-force oracle -----------------------------------------------------
//
// Everything below re-derives Eq-level quantities by direct enumeration over
// node pairs, entity pairs and couplings, on purpose sharing none of the
// aggregated tables above.

namespace {

std::uint32_t oracle_degree(const MultilayerNetwork& net, EntityId u, LayerId l) {
    std::uint32_t deg = 0;
    for (const Edge& e : net.edges(l))
        if (e.u == u || e.v == u) ++deg;
    return deg;
}

bool oracle_has_edge(const MultilayerNetwork& net, EntityId u, EntityId v, LayerId l) {
    for (const Edge& e : net.edges(l))
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
    return false;
}

bool oracle_entity_in_community(const CommunityStructure& cs, const MultilayerNetwork& net,
                                EntityId u, CommunityId c) {
    for (LayerId l = 0; l < net.layer_count(); ++l)
        if (net.has_node(u, l) && cs.community_of(u, l) == c) return true;
    return false;
}

double oracle_gamma(const MultilayerNetwork& net, const CommunityStructure& cs,
                    const ResolutionSpec& rspec, LayerId layer, CommunityId c) {
    if (rspec.kind == ResolutionSpec::Kind::Fixed) return rspec.fixed_value;
    std::uint64_t redundant_with_layer = 0;
    const std::size_t n = net.entity_count();
    for (EntityId u = 0; u < n; ++u) {
        if (!oracle_entity_in_community(cs, net, u, c)) continue;
        for (EntityId v = u + 1; v < n; ++v) {
            if (!oracle_entity_in_community(cs, net, v, c)) continue;
            std::uint32_t linked_layers = 0;
            bool on_layer = false;
            for (LayerId l = 0; l < net.layer_count(); ++l) {
                if (oracle_has_edge(net, u, v, l)) {
                    ++linked_layers;
                    if (l == layer) on_layer = true;
                }
            }
            if (linked_layers >= 2 && on_layer) ++redundant_with_layer;
        }
    }
    return 2.0 / (1.0 + std::log2(1.0 + static_cast<double>(redundant_with_layer)));
}

std::vector<EntityId> oracle_projection(const MultilayerNetwork& net,
                                        const CommunityStructure& cs, CommunityId c, LayerId l) {
    std::vector<EntityId> members;
    for (EntityId u : net.nodes(l))
        if (cs.community_of(u, l) == c) members.push_back(u);
    return members;
}

double oracle_ic(const MultilayerNetwork& net, const CommunityStructure& cs,
                 const CouplingSpec& cspec, CommunityId c, LayerId l, LayerId lp,
                 std::uint32_t pos_l, std::uint32_t pos_lp) {
    LayerId src = l, dst = lp;
    if (cspec.variant == CouplingSpec::Variant::AsymmetricOuter) std::swap(src, dst);
    const std::vector<EntityId> proj_src = oracle_projection(net, cs, c, src);
    const std::vector<EntityId> proj_dst = oracle_projection(net, cs, c, dst);
    std::uint64_t shared = 0;
    for (EntityId u = 0; u < net.entity_count(); ++u)
        if (net.has_node(u, src) && net.has_node(u, dst)) ++shared;
    if (shared == 0) return 0.0;
    std::uint64_t overlap = 0;
    for (EntityId u : proj_src)
        if (std::find(proj_dst.begin(), proj_dst.end(), u) != proj_dst.end()) ++overlap;
    double value = static_cast<double>(overlap) / static_cast<double>(shared);
    if (cspec.variant != CouplingSpec::Variant::Symmetric) {
        if (proj_src.empty()) return 0.0;
        value *= static_cast<double>(net.nodes(src).size()) / static_cast<double>(proj_src.size());
    }
    if (cspec.time_aware) {
        const std::uint32_t lo = std::min(pos_l, pos_lp), hi = std::max(pos_l, pos_lp);
        value *= 2.0 / (1.0 + std::log2(1.0 + static_cast<double>(hi - lo)));
    }
    return value;
}

} // namespace

double q_oracle(const MultilayerNetwork& net, const CommunityStructure& cs,
                const ResolutionSpec& rspec, const CouplingSpec& cspec) {
    cspec.validate();
    const std::size_t n = net.entity_count();
    const std::size_t ell = net.layer_count();
    if (n * ell > 64) throw DomainError("q_oracle: instance too large (n*l must be <= 64)");

    const ResolvedOrdering ordering(net, cspec.scheme);

    // normalizer by direct counting
    long double d = 0.0L;
    for (LayerId l = 0; l < ell; ++l)
        for (EntityId u : net.nodes(l)) d += oracle_degree(net, u, l);
    if (cspec.beta != 0) {
        for (LayerId l = 0; l < ell; ++l)
            for (LayerId lp : ordering.pairings(l))
                for (EntityId u = 0; u < n; ++u)
                    if (net.has_node(u, l) && net.has_node(u, lp)) d += 1.0L;
    }
    if (d == 0.0L) throw DomainError("q_oracle: total degree is zero");

    long double q = 0.0L;
    for (LayerId l = 0; l < ell; ++l) {
        // gamma per community on this layer, derived by pair scan
        std::vector<double> gammas(cs.community_count());
        for (CommunityId c = 0; c < cs.community_count(); ++c)
            gammas[c] = oracle_gamma(net, cs, rspec, l, c);
        for (EntityId u : net.nodes(l)) {
            for (EntityId v : net.nodes(l)) {
                if (cs.community_of(u, l) != cs.community_of(v, l)) continue;
                const CommunityId c = cs.community_of(u, l);
                const double a = (u != v && oracle_has_edge(net, u, v, l)) ? 1.0 : 0.0;
                q += (a - gammas[c] * oracle_degree(net, u, l) * oracle_degree(net, v, l) /
                              static_cast<double>(d)) /
                     static_cast<double>(d);
            }
        }
    }
    if (cspec.beta != 0) {
        for (CommunityId c = 0; c < cs.community_count(); ++c)
            for (LayerId l = 0; l < ell; ++l)
                for (LayerId lp : ordering.pairings(l))
                    q += oracle_ic(net, cs, cspec, c, l, lp, ordering.position(l),
                                   ordering.position(lp)) /
                         static_cast<double>(d);
    }
    return static_cast<double>(q);
}

} // namespace mlmod
