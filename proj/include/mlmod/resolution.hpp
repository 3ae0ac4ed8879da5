#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlmod/commstruct.hpp"
#include "mlmod/mlnet.hpp"

namespace mlmod {

/// Which resolution factor γ(L,C) the modularity engine evaluates.
struct ResolutionSpec {
    enum class Kind { Fixed, RedundancyBased };

    Kind kind = Kind::RedundancyBased;
    double fixed_value = 1.0;

    static ResolutionSpec fixed(double v);
    static ResolutionSpec redundancy() { return {Kind::RedundancyBased, 1.0}; }
};

/// An entity pair linked on at least one layer, with its supporting layers.
struct LinkedPair {
    EntityId u;
    EntityId v;
    std::span<const LayerId> supporting_layers;
};

/// Redundant-pair bookkeeping for one community: P1 (pairs of community
/// entities linked somewhere), the redundant subset P2 (linked on ≥2 layers),
/// and nrp(L,C) = number of redundant pairs whose supporting layers include L.
struct CommunityPairStats {
    std::size_t p1_count = 0;
    std::size_t p2_count = 0;
    std::uint64_t supporting_layer_sum = 0;  // Σ_{P2} |SL(pair)|
    std::vector<std::uint32_t> nrp;          // per layer
};

/// Pair index for a (network, community structure) pair. Supporting-layer
/// sets are a property of the network alone; the per-community statistics
/// filter them by entity-level membership of both endpoints. Built once,
/// immutable and read-safe afterwards.
class RedundantPairIndex {
public:
    static RedundantPairIndex build(const MultilayerNetwork& net, const CommunityStructure& cs,
                                    unsigned threads = 1);

    const CommunityPairStats& community(CommunityId c) const { return stats_[c]; }

    std::uint32_t nrp(LayerId layer, CommunityId c) const { return stats_[c].nrp[layer]; }

    /// ρ(C) = Σ_{P2} |SL| / (ℓ · |P1|); 0 when P1 is empty.
    double redundancy(CommunityId c) const;

    /// All linked pairs of the community, for inspection and tests.
    std::vector<LinkedPair> pairs_of(CommunityId c) const;

    std::size_t layer_count() const { return layer_count_; }

private:
    struct PairEntry {
        EntityId u;
        EntityId v;
        std::uint32_t sl_begin;
        std::uint32_t sl_end;
    };

    std::vector<PairEntry> pairs_;              // all linked pairs, (u,v) sorted
    std::vector<LayerId> supporting_;           // concatenated SL sets
    std::vector<std::vector<std::uint32_t>> community_pairs_;  // indices into pairs_
    std::vector<CommunityPairStats> stats_;
    std::size_t layer_count_ = 0;
};

/// γ value from a redundant-pair count: 2 / (1 + log2(1 + nrp)).
/// Equals 2 iff nrp = 0 and lies in (0,1] otherwise.
double gamma_from_nrp(std::uint64_t nrp);

/// γ(L,C) under the spec: the fixed value, or the redundancy-based factor.
double gamma(const ResolutionSpec& spec, const RedundantPairIndex& index, LayerId layer,
             CommunityId c);

/// Convenience single-shot variants (build the index internally; prefer the
/// index for repeated queries).
double redundancy(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c);
std::uint32_t nrp(const CommunityStructure& cs, const MultilayerNetwork& net, LayerId layer,
                  CommunityId c);

} // namespace mlmod
