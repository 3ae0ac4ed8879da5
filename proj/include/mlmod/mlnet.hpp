#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlmod/error.hpp"

namespace mlmod {

using EntityId = std::uint32_t;
using LayerId = std::uint32_t;

inline constexpr std::uint32_t kNone = 0xffffffffu;

/// Undirected intra-layer edge; endpoints are stored with u < v.
struct Edge {
    EntityId u;
    EntityId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// In-memory multilayer network: a set of entities, an ordered sequence of
/// layers, and per-layer node/edge sets. Entities and layers are interned to
/// dense ids in first-appearance order so runs are deterministic. Inter-layer
/// couplings are implicit (same entity on two layers) and never stored.
///
/// Instances are immutable once `finalize()` has run and are safe for
/// concurrent reads.
class MultilayerNetwork {
public:
    MultilayerNetwork() = default;

    // --- construction (loaders and generators only) ---

    LayerId add_layer(const std::string& label);
    EntityId intern_entity(const std::string& label);
    LayerId intern_layer(const std::string& label);
    void add_node(EntityId u, LayerId layer);
    /// Adds the edge and both endpoints to the layer. Throws DomainError on
    /// self-loops and duplicates.
    void add_edge(EntityId u, EntityId v, LayerId layer);
    /// Sorts node/edge sets, builds adjacency and degree tables, precomputes
    /// pairwise shared-node counts, and validates invariants. Must be called
    /// exactly once; the network is read-only afterwards.
    void finalize();
    bool finalized() const { return finalized_; }

    // --- queries ---

    std::size_t entity_count() const { return entity_labels_.size(); }
    std::size_t layer_count() const { return layers_.size(); }

    const std::string& entity_label(EntityId u) const { return entity_labels_[u]; }
    const std::string& layer_label(LayerId l) const { return layers_[l].label; }
    std::optional<EntityId> find_entity(const std::string& label) const;
    std::optional<LayerId> find_layer(const std::string& label) const;

    bool has_node(EntityId u, LayerId layer) const;
    /// Degree of u in the given layer; 0 if u is not present there.
    std::uint32_t degree(EntityId u, LayerId layer) const;
    std::span<const EntityId> nodes(LayerId layer) const { return layers_[layer].nodes; }
    std::span<const Edge> edges(LayerId layer) const { return layers_[layer].edges; }
    std::span<const EntityId> neighbors(EntityId u, LayerId layer) const;
    bool has_edge(EntityId u, EntityId v, LayerId layer) const;

    std::size_t edge_count(LayerId layer) const { return layers_[layer].edges.size(); }
    std::size_t total_edge_count() const;

    /// |V_i ∩ V_j|, precomputed at finalize time.
    std::size_t shared_node_count(LayerId a, LayerId b) const {
        return shared_nodes_[a * layers_.size() + b];
    }

    /// Layers containing entity u, ascending.
    std::span<const LayerId> layers_of(EntityId u) const { return entity_layers_[u]; }

private:
    struct LayerData {
        std::string label;
        std::vector<EntityId> nodes;                   // sorted
        std::vector<Edge> edges;                       // sorted, u < v
        std::vector<std::uint32_t> degree;             // entity-indexed
        std::vector<char> present;                     // entity-indexed
        std::vector<std::vector<EntityId>> adjacency;  // entity-indexed, sorted
    };

    std::vector<std::string> entity_labels_;
    std::vector<LayerData> layers_;
    std::unordered_map<std::string, EntityId> entity_index_;
    std::unordered_map<std::string, LayerId> layer_index_;
    std::vector<std::size_t> shared_nodes_;            // ℓ×ℓ row-major
    std::vector<std::vector<LayerId>> entity_layers_;  // entity-indexed, sorted
    bool finalized_ = false;

    void require_mutable() const;
    void require_finalized() const;
};

/// How layers may be paired in the coupling term.
enum class PairingKind {
    Unordered,   ///< P(L) = all other layers
    Adjacent,    ///< P(L) = the successor in the active order, if any
    Succeeding,  ///< P(L) = all layers after L in the active order
};

/// An ordering scheme: pairing kind plus an optional explicit layer
/// permutation (default: declaration order) and a direction flag.
class OrderingScheme {
public:
    OrderingScheme() = default;
    explicit OrderingScheme(PairingKind kind, std::vector<LayerId> permutation = {},
                            bool descending = false)
        : kind_(kind), permutation_(std::move(permutation)), descending_(descending) {}

    PairingKind kind() const { return kind_; }
    bool descending() const { return descending_; }
    const std::vector<LayerId>& permutation() const { return permutation_; }

private:
    PairingKind kind_ = PairingKind::Unordered;
    std::vector<LayerId> permutation_;
    bool descending_ = false;
};

/// An OrderingScheme resolved against a concrete network: the full layer
/// order, the order position of every layer, and the valid pairings P(L).
class ResolvedOrdering {
public:
    ResolvedOrdering(const MultilayerNetwork& net, const OrderingScheme& scheme);

    PairingKind kind() const { return kind_; }
    /// Position of the layer in the active order.
    std::uint32_t position(LayerId l) const { return position_[l]; }
    /// Valid pairings with L, in ascending order position.
    std::span<const LayerId> pairings(LayerId l) const {
        return {pairings_.data() + offsets_[l], offsets_[l + 1] - offsets_[l]};
    }
    /// p = Σ_L |P(L)|.
    std::size_t pairing_total() const { return pairings_.size(); }

private:
    PairingKind kind_;
    std::vector<LayerId> order_;
    std::vector<std::uint32_t> position_;
    std::vector<LayerId> pairings_;
    std::vector<std::size_t> offsets_;
};

/// The set of valid pairings with L under the scheme (spec operation).
std::vector<LayerId> valid_pairings(const MultilayerNetwork& net, const OrderingScheme& scheme,
                                    LayerId l);

/// Total degree d(V_L) of the multilayer graph. With beta=1 every directed
/// valid pairing (L, L') contributes |V_L ∩ V_L'|, so Unordered counts each
/// unordered coupling edge twice (its degree), matching the canonical
/// identity d(V_L) = n²ℓ/2 + np.
std::uint64_t total_degree(const MultilayerNetwork& net, const OrderingScheme& scheme, int beta);

// --- file IO ---

enum class NetworkFormat {
    MultilayerEdgeList,  ///< `<layer> <entity> <entity>` records, optional *nodes section
};

struct NetworkLoadOptions {
    NetworkFormat format = NetworkFormat::MultilayerEdgeList;
    /// Optional layer-order file: one layer label per line. Declares the
    /// layer set (so empty layers exist) and overrides declaration order.
    std::optional<std::filesystem::path> layer_order_file;
};

MultilayerNetwork load_network(const std::filesystem::path& path,
                               const NetworkLoadOptions& options = {});
MultilayerNetwork parse_network(std::istream& in, const std::vector<std::string>& layer_order = {});

/// Writes the multilayer edge-list format: a *nodes section ordered so that
/// reloading reproduces the dense ids, then *edges with layers in order and
/// edges sorted lexicographically by endpoint labels. Output is bit-stable.
void save_network(const MultilayerNetwork& net, std::ostream& out);

/// One layer label per line, in layer order.
void save_layer_order(const MultilayerNetwork& net, std::ostream& out);

} // namespace mlmod
