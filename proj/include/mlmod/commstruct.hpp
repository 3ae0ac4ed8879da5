#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlmod/mlnet.hpp"

namespace mlmod {

using CommunityId = std::uint32_t;

/// A partition of the occupied (entity, layer) occurrences into communities.
/// Community ids are dense 0..k-1; empty communities are dropped when the
/// structure is finalized. Immutable afterwards, concurrent-read safe.
class CommunityStructure {
public:
    CommunityStructure() = default;

    /// Builds from explicit per-occurrence assignments. Every occupied
    /// (entity, layer) pair of `net` must be assigned exactly once.
    static CommunityStructure from_assignments(
        const MultilayerNetwork& net,
        const std::vector<std::tuple<EntityId, LayerId, CommunityId>>& assignments,
        std::vector<std::string>* warnings = nullptr);

    /// Replicates an entity-level assignment to every layer the entity
    /// occupies. `by_entity[u]` may be kNone only if u has no occurrences.
    static CommunityStructure from_entity_assignment(const MultilayerNetwork& net,
                                                     const std::vector<CommunityId>& by_entity,
                                                     std::vector<std::string>* warnings = nullptr);

    std::uint32_t community_count() const { return k_; }

    /// Community of the occurrence; kNone if the entity is absent from the layer.
    CommunityId community_of(EntityId u, LayerId layer) const { return assign_[layer][u]; }

    /// Projection C^(i): entities of the community present on the layer, sorted.
    std::span<const EntityId> projection(CommunityId c, LayerId layer) const {
        return members_[c * layer_count_ + layer];
    }

    /// Entity-level members: entities assigned to c on at least one layer, sorted.
    std::span<const EntityId> entities_of(CommunityId c) const { return entity_members_[c]; }

    /// Communities entity u belongs to across layers, sorted unique.
    std::span<const CommunityId> communities_of_entity(EntityId u) const {
        return entity_communities_[u];
    }

    std::size_t layer_count() const { return layer_count_; }
    std::size_t entity_count() const { return assign_.empty() ? 0 : assign_[0].size(); }

private:
    std::vector<std::vector<CommunityId>> assign_;  // [layer][entity], kNone if absent
    std::vector<std::vector<EntityId>> members_;    // [c*ℓ+layer], sorted
    std::vector<std::vector<EntityId>> entity_members_;
    std::vector<std::vector<CommunityId>> entity_communities_;
    std::uint32_t k_ = 0;
    std::size_t layer_count_ = 0;
};

/// Projection of a community onto a layer (spec operation).
struct Projection {
    CommunityId community;
    LayerId layer;
    std::vector<EntityId> members;
};

Projection projection(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c,
                      LayerId layer);

/// (d_L(C), d_L^int(C)): degree and internal degree of the community on the
/// layer. The internal degree counts both endpoints of every intra-community
/// edge, so a fully internal community has d_int = d.
std::pair<std::uint64_t, std::uint64_t> community_layer_degrees(const CommunityStructure& cs,
                                                                const MultilayerNetwork& net,
                                                                CommunityId c, LayerId layer);

/// Bulk degree table used by the modularity engine: d and d_int for every
/// (community, layer) in one pass over the edges.
struct CommunityDegreeTable {
    std::size_t layer_count = 0;
    std::vector<std::uint64_t> degree;           // [c*ℓ+layer]
    std::vector<std::uint64_t> internal_degree;  // [c*ℓ+layer]

    std::uint64_t d(CommunityId c, LayerId l) const { return degree[c * layer_count + l]; }
    std::uint64_t d_int(CommunityId c, LayerId l) const {
        return internal_degree[c * layer_count + l];
    }
};

CommunityDegreeTable compute_degree_table(const CommunityStructure& cs,
                                          const MultilayerNetwork& net);

enum class CommunityFileMode {
    PerNodeLayer,  ///< `<entity> <layer> <community>` per line
    PerEntity,     ///< `<entity> <community>` per line
};

CommunityStructure load_communities(const std::filesystem::path& path,
                                    const MultilayerNetwork& net, CommunityFileMode mode,
                                    std::vector<std::string>* warnings = nullptr);
CommunityStructure parse_communities(std::istream& in, const MultilayerNetwork& net,
                                     CommunityFileMode mode,
                                     std::vector<std::string>* warnings = nullptr);

/// Emits the per-node-layer format sorted by (layer, entity).
void save_communities(const CommunityStructure& cs, const MultilayerNetwork& net,
                      std::ostream& out);

} // namespace mlmod
