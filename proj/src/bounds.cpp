#include "mlmod/bounds.hpp"

#include <cmath>
#include <string>

namespace mlmod {

void BoundSpec::validate() const {
    if (n < 4 || n % 2 != 0) throw DomainError("bounds: n must be even and >= 4");
    if (ell < 1) throw DomainError("bounds: need at least one layer");
    if (eta != 0 && eta != 1) throw DomainError("bounds: eta must be 0 or 1");
    if (beta != 0 && beta != 1) throw DomainError("bounds: beta must be 0 or 1");
}

std::uint64_t pairing_total(PairingKind scheme, std::uint32_t ell) {
    const std::uint64_t l = ell;
    switch (scheme) {
    case PairingKind::Unordered: return l * (l - 1);
    case PairingKind::Adjacent: return l - 1;
    case PairingKind::Succeeding: return (l * l - l) / 2;
    }
    return 0;
}

double clique_gamma_constant(std::uint32_t n) {
    const double half = n / 2.0;
    const double pairs = half * (half - 1.0) / 2.0;
    return 2.0 / (1.0 + std::log2(1.0 + pairs));
}

double lower_bound(const BoundSpec& spec) {
    spec.validate();
    const double n = spec.n;
    const double ell = spec.ell;
    // on the bipartite construction the redundancy-based factor is the
    // no-redundant-pairs value, 2
    const double g = spec.gamma == BoundSpec::Gamma::RedundancyBased ? 2.0 : 1.0;
    if (spec.beta == 0) return -g / (2.0 * ell);
    const double p = static_cast<double>(pairing_total(spec.scheme, spec.ell));
    const double null_term = -g * n * n * ell / (2.0 * (n * ell + 2.0 * p) * (n * ell + 2.0 * p));
    const double coupling = 2.0 * (1.0 + spec.eta) * p / (n * (n * ell + 2.0 * p));
    return null_term + coupling;
}

double upper_bound(const BoundSpec& spec) {
    spec.validate();
    const double n = spec.n;
    const double ell = spec.ell;
    const double g =
        spec.gamma == BoundSpec::Gamma::RedundancyBased ? clique_gamma_constant(spec.n) : 1.0;
    if (spec.beta == 0) return (2.0 * ell - g) / (2.0 * ell);
    const double p = static_cast<double>(pairing_total(spec.scheme, spec.ell));
    const double denom = (n / 2.0 - 1.0) * ell + p;
    const double actual = ell * (n / 2.0 - 1.0) / denom;
    const double null_term = 2.0 * g * ell * ((n / 2.0 - 1.0) / (2.0 * denom)) *
                             ((n / 2.0 - 1.0) / (2.0 * denom));
    const double coupling = (1.0 + spec.eta) * p / (n * denom);
    return actual - null_term + coupling;
}

namespace {

std::pair<MultilayerNetwork, CommunityStructure> gen_two_way(std::uint32_t n, std::uint32_t ell,
                                                             bool bipartite) {
    if (n < 4 || n % 2 != 0) throw DomainError("canonical generators need even n >= 4");
    if (ell < 1) throw DomainError("canonical generators need at least one layer");
    MultilayerNetwork net;
    for (EntityId u = 0; u < n; ++u) net.intern_entity("v" + std::to_string(u));
    const std::uint32_t half = n / 2;
    for (std::uint32_t l = 0; l < ell; ++l) {
        const LayerId layer = net.add_layer("L" + std::to_string(l + 1));
        if (bipartite) {
            for (EntityId u = 0; u < half; ++u)
                for (EntityId v = half; v < n; ++v) net.add_edge(u, v, layer);
        } else {
            for (EntityId u = 0; u < half; ++u)
                for (EntityId v = u + 1; v < half; ++v) net.add_edge(u, v, layer);
            for (EntityId u = half; u < n; ++u)
                for (EntityId v = u + 1; v < n; ++v) net.add_edge(u, v, layer);
        }
    }
    net.finalize();
    std::vector<CommunityId> by_entity(n);
    for (EntityId u = 0; u < n; ++u) by_entity[u] = u < half ? 0 : 1;
    auto cs = CommunityStructure::from_entity_assignment(net, by_entity);
    return {std::move(net), std::move(cs)};
}

} // namespace

std::pair<MultilayerNetwork, CommunityStructure> gen_bipartite_canonical(std::uint32_t n,
                                                                         std::uint32_t ell) {
    return gen_two_way(n, ell, true);
}

std::pair<MultilayerNetwork, CommunityStructure> gen_clique_canonical(std::uint32_t n,
                                                                      std::uint32_t ell) {
    return gen_two_way(n, ell, false);
}

} // namespace mlmod
