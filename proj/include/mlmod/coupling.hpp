#pragma once

#include <cstdint>

#include "mlmod/commstruct.hpp"
#include "mlmod/mlnet.hpp"

namespace mlmod {

/// Inter-layer coupling configuration for the modularity engine.
struct CouplingSpec {
    enum class Variant { Symmetric, AsymmetricInner, AsymmetricOuter };

    int beta = 1;  ///< 0 drops the coupling term entirely
    Variant variant = Variant::Symmetric;
    bool time_aware = false;  ///< requires an ordered scheme
    OrderingScheme scheme;

    static CouplingSpec none(OrderingScheme scheme = {});
    static CouplingSpec symmetric(OrderingScheme scheme = {});
    static CouplingSpec asymmetric_inner(OrderingScheme scheme = {});
    static CouplingSpec asymmetric_outer(OrderingScheme scheme = {});

    /// Throws DomainError if time_aware is combined with Unordered.
    void validate() const;
};

/// IC_s(C, L_i, L_j) = |C^(i) ∩ C^(j)| / |V_i ∩ V_j|; 0 when the layers share
/// no node or either projection is empty.
double ic_sym(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c,
              LayerId li, LayerId lj);

/// IC_a(C, L_i, L_j) = IC_s × |V_i| / |C^(i)|; 0 when C^(i) is empty.
double ic_asym(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c,
               LayerId li, LayerId lj);

/// Temporal smoothing 2 / (1 + log2(1 + j - i)) over order positions, j > i.
/// Equals 1 exactly for adjacent positions.
double time_factor(std::uint32_t i, std::uint32_t j);

/// The coupling value IC(C, L, L') the engine sums for a valid pairing
/// (L, L'). L' must come from valid_pairings(scheme, L); violating that is a
/// programming error and throws std::logic_error.
double ic(const CouplingSpec& spec, const CommunityStructure& cs, const MultilayerNetwork& net,
          CommunityId c, LayerId l, LayerId lp, const ResolvedOrdering& ordering);

} // namespace mlmod
