#pragma once

// Shared helpers for the unit and acceptance suites: deterministic random
// multilayer instances and terse builders for micro-instances.

#include <string>
#include <tuple>
#include <vector>

#include "mlmod/commstruct.hpp"
#include "mlmod/mlnet.hpp"
#include "mlmod/util.hpp"

namespace mlmod::testing {

struct Instance {
    MultilayerNetwork net;
    CommunityStructure cs;
};

/// Network from explicit occurrences and edges. Entities and layers are
/// numbered 0..; edges imply presence.
inline MultilayerNetwork make_net(std::uint32_t n, std::uint32_t ell,
                                  const std::vector<std::tuple<LayerId, EntityId, EntityId>>& edges,
                                  const std::vector<std::pair<LayerId, EntityId>>& extra_nodes = {}) {
    MultilayerNetwork net;
    for (EntityId u = 0; u < n; ++u) net.intern_entity("v" + std::to_string(u));
    for (LayerId l = 0; l < ell; ++l) net.add_layer("L" + std::to_string(l + 1));
    for (const auto& [l, u, v] : edges) net.add_edge(u, v, l);
    for (const auto& [l, u] : extra_nodes) net.add_node(u, l);
    net.finalize();
    return net;
}

/// Entity-level structure from a flat assignment vector.
inline CommunityStructure entity_structure(const MultilayerNetwork& net,
                                           const std::vector<CommunityId>& by_entity) {
    return CommunityStructure::from_entity_assignment(net, by_entity);
}

/// Seeded random instance: n in [4,12], ell in [1,4], random coverage (every
/// entity somewhere, at least one edge), random per-occurrence communities.
inline Instance random_instance(std::uint64_t seed, std::uint32_t max_n = 12,
                                std::uint32_t max_ell = 4) {
    DeterministicRng rng(seed);
    const std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(max_n - 3));
    const std::uint32_t ell = 1 + static_cast<std::uint32_t>(rng.next_below(max_ell));

    MultilayerNetwork net;
    for (EntityId u = 0; u < n; ++u) net.intern_entity("v" + std::to_string(u));
    for (LayerId l = 0; l < ell; ++l) net.add_layer("L" + std::to_string(l + 1));

    std::vector<std::vector<char>> present(ell, std::vector<char>(n, 0));
    for (EntityId u = 0; u < n; ++u) {
        bool anywhere = false;
        for (LayerId l = 0; l < ell; ++l) {
            if (rng.next_unit() < 0.7) {
                present[l][u] = 1;
                anywhere = true;
            }
        }
        if (!anywhere) present[rng.next_below(ell)][u] = 1;
    }
    std::size_t edge_count = 0;
    for (LayerId l = 0; l < ell; ++l) {
        for (EntityId u = 0; u < n; ++u) {
            if (!present[l][u]) continue;
            net.add_node(u, l);
            for (EntityId v = u + 1; v < n; ++v) {
                if (!present[l][v]) continue;
                if (rng.next_unit() < 0.3) {
                    net.add_edge(u, v, l);
                    ++edge_count;
                }
            }
        }
    }
    if (edge_count == 0) {
        // force one edge so the beta=0 normalizer is positive
        for (LayerId l = 0; l < ell && edge_count == 0; ++l) {
            EntityId first = kNone;
            for (EntityId u = 0; u < n; ++u) {
                if (!present[l][u]) continue;
                if (first == kNone) {
                    first = u;
                } else {
                    net.add_edge(first, u, l);
                    ++edge_count;
                    break;
                }
            }
        }
        if (edge_count == 0) {
            present[0][0] = present[0][1] = 1;
            net.add_node(0, 0);
            net.add_node(1, 0);
            net.add_edge(0, 1, 0);
        }
    }
    net.finalize();

    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next_below(4));
    std::vector<std::tuple<EntityId, LayerId, CommunityId>> assignments;
    for (LayerId l = 0; l < ell; ++l)
        for (EntityId u : net.nodes(l))
            assignments.emplace_back(u, l, static_cast<CommunityId>(rng.next_below(k)));
    auto cs = CommunityStructure::from_assignments(net, assignments);
    return Instance{std::move(net), std::move(cs)};
}

} // namespace mlmod::testing
