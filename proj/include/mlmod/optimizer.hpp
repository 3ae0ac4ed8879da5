#pragma once

#include <cstdint>
#include <vector>

#include "mlmod/commstruct.hpp"
#include "mlmod/modularity.hpp"

namespace mlmod {

/// Starting structure of the greedy maximizer.
enum class DetectInit {
    Singletons,        ///< every (entity, layer) occurrence its own community
    EntitySingletons,  ///< every entity one community across its layers
};

struct MergeEvent {
    CommunityId a;
    CommunityId b;
    double delta_q;
    double q_after;
};

struct DetectResult {
    CommunityStructure structure;
    QReport report;  ///< full evaluation of the final structure
    std::vector<MergeEvent> merge_log;
};

/// Greedy agglomerative maximizer of Q: repeatedly evaluates merges of
/// community pairs that are connected by an intra-layer edge or share an
/// entity across layers, accepts the largest positive ΔQ (ties broken by the
/// lowest community-id pair), and stops when no merge improves Q or
/// max_merges is reached (0 = unbounded). ΔQ uses incremental community
/// statistics; debug_check re-evaluates every accepted merge with the full
/// engine. Deterministic. A baseline, not a tuned detector.
DetectResult greedy_maximize(const MultilayerNetwork& net, const ResolutionSpec& rspec,
                             const CouplingSpec& cspec, DetectInit init = DetectInit::Singletons,
                             std::size_t max_merges = 0, bool debug_check = false);

} // namespace mlmod
