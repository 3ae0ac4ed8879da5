#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mlmod/commstruct.hpp"
#include "mlmod/coupling.hpp"
#include "mlmod/mlnet.hpp"
#include "mlmod/resolution.hpp"

namespace mlmod {

/// Structural statistics of one community, each averaged over the layers
/// where it is defined (see community_stats).
struct CommunityStats {
    double avg_path_length = 0.0;    ///< over connected intra-community pairs
    double clustering_coeff = 0.0;   ///< mean local clustering of members
    double node_coverage = 0.0;      ///< mean over layers of |C^(i)|/|V_i|
    double edge_coverage = 0.0;      ///< mean over layers of intra-C edges / |E_i|
    double redundancy = 0.0;         ///< ρ(C)
};

/// APL and CC are computed on the subgraph induced by C^(i) per layer, then
/// averaged over layers where that subgraph has ≥2 connected members (APL)
/// resp. ≥3 nodes (CC); disconnected pairs are excluded, not infinite.
/// Coverage means run over all layers, with absent projections contributing 0.
std::vector<CommunityStats> community_stats(const MultilayerNetwork& net,
                                            const CommunityStructure& cs);

/// Sample Pearson correlation. Throws DomainError for fewer than two points
/// or zero variance in either sequence.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// A single-layer graph over the entity universe 0..n-1 (generator output).
struct SingleLayerGraph {
    std::uint32_t n = 0;
    std::vector<Edge> edges;  // sorted, u < v
    std::vector<std::string> entity_labels;  // optional; size n when present
};

/// Erdős–Rényi G(n, p): each unordered pair independently with probability p.
SingleLayerGraph gen_er(std::uint32_t n, double edge_prob, std::uint64_t seed);

/// Planted partition over k equal blocks: intra-block pairs with p_in,
/// inter-block pairs with p_out. n must be divisible by k.
SingleLayerGraph gen_planted(std::uint32_t n, std::uint32_t k, double p_in, double p_out,
                             std::uint64_t seed);

/// Reads a plain single-layer edge list (`<u> <v>` per line, labels interned
/// in first-appearance order), e.g. externally generated benchmark output.
SingleLayerGraph load_single_layer(const std::filesystem::path& path);

/// Stacks the given single-layer graphs, repeated `replicate` times, into a
/// multilayer network over the shared entity universe.
MultilayerNetwork compose_layers(std::span<const SingleLayerGraph> graphs,
                                 std::uint32_t replicate = 1);

/// The contiguous equal-block partition of entities into k communities,
/// replicated on every layer. Used by the k sweep.
CommunityStructure block_structure(const MultilayerNetwork& net, std::uint32_t k);

/// Tabular sweep output; the CLI renders it as CSV.
struct SweepTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Q over block structures with k ∈ ks.
SweepTable sweep_partition_k(const MultilayerNetwork& net, std::span<const std::uint32_t> ks,
                             const ResolutionSpec& rspec, const CouplingSpec& cspec,
                             unsigned threads = 1);

/// Q_ms over ω values with fixed γ.
SweepTable sweep_qms_omega(const MultilayerNetwork& net, const CommunityStructure& cs,
                           double gamma, std::span<const double> omegas);

/// Q_ms over γ values with ω = 1 − γ.
SweepTable sweep_qms_gamma(const MultilayerNetwork& net, const CommunityStructure& cs,
                           std::span<const double> gammas);

/// Wall-clock timing of Q over replicated planted-partition networks on the
/// (layers × nodes) grid; every grid point also reports Q itself.
SweepTable sweep_timing(std::span<const std::uint32_t> layer_counts,
                        std::span<const std::uint32_t> node_counts, std::uint64_t seed,
                        const ResolutionSpec& rspec, const CouplingSpec& cspec,
                        unsigned threads = 1);

/// Planted-partition layer with roughly the given average degree and mixing
/// fraction mu (share of a node's edges leaving its block).
SingleLayerGraph gen_planted_avg_degree(std::uint32_t n, std::uint32_t k, double avg_degree,
                                        double mu, std::uint64_t seed);

} // namespace mlmod
