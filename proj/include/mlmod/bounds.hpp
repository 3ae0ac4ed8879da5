#pragma once

#include <cstdint>
#include <utility>

#include "mlmod/commstruct.hpp"
#include "mlmod/mlnet.hpp"

namespace mlmod {

/// Inputs of the closed-form Q extremes on the canonical constructions.
struct BoundSpec {
    enum class Gamma { RedundancyBased, FixedOne };

    std::uint32_t n = 4;  ///< entity count, even, ≥ 4
    std::uint32_t ell = 1;
    PairingKind scheme = PairingKind::Unordered;
    int eta = 0;   ///< 0 for symmetric coupling, 1 for asymmetric
    int beta = 1;  ///< 0 drops the coupling term
    Gamma gamma = Gamma::RedundancyBased;

    void validate() const;
};

/// p = Σ_L |P(L)| for the scheme: ℓ(ℓ−1), ℓ−1, (ℓ²−ℓ)/2.
std::uint64_t pairing_total(PairingKind scheme, std::uint32_t ell);

/// The constant redundancy-based γ realized on the canonical clique graph:
/// 2 (1 + log2(1 + (n/2)(n/2−1)/2))⁻¹.
double clique_gamma_constant(std::uint32_t n);

/// Closed-form Q of the canonical bipartite construction (the minimum-Q
/// configuration). β=0 gives −1/ℓ (redundancy-based γ) or −1/(2ℓ) (γ=1).
double lower_bound(const BoundSpec& spec);

/// Closed-form Q of the canonical disjoint-clique construction (the
/// maximum-Q configuration). β=0 gives (2ℓ−γ)/(2ℓ) with the clique γ
/// constant, or (2ℓ−1)/(2ℓ) for γ=1.
double upper_bound(const BoundSpec& spec);

/// Every layer is the complete bipartite graph across the two fixed entity
/// halves; all entities on all layers; the two halves are the communities on
/// every layer.
std::pair<MultilayerNetwork, CommunityStructure> gen_bipartite_canonical(std::uint32_t n,
                                                                         std::uint32_t ell);

/// Every layer holds two disjoint cliques on the fixed entity halves; all
/// entities on all layers; the halves are the communities on every layer.
std::pair<MultilayerNetwork, CommunityStructure> gen_clique_canonical(std::uint32_t n,
                                                                      std::uint32_t ell);

} // namespace mlmod
