#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mlmod/commstruct.hpp"
#include "mlmod/coupling.hpp"
#include "mlmod/mlnet.hpp"
#include "mlmod/resolution.hpp"

namespace mlmod {

struct IcEntry {
    CommunityId community;
    LayerId from;
    LayerId to;
    double value;
};

/// Full result of a multilayer modularity evaluation: the global value, the
/// per-community contributions (summing to the global value), and every
/// intermediate γ(L,C) and IC(C,L,L') together with the normalizer used.
struct QReport {
    double q_global = 0.0;
    double normalizer = 0.0;
    std::vector<double> community_contribution;
    std::vector<double> gamma_values;  // [c*ℓ+layer]
    std::vector<IcEntry> ic_values;
    ResolutionSpec resolution;
    CouplingSpec coupling;

    double gamma_at(CommunityId c, LayerId l, std::size_t layer_count) const {
        return gamma_values[c * layer_count + l];
    }
};

/// Parameters of the multislice modularity: per-layer resolutions γ_i and the
/// constant coupling weight ω.
struct QmsParams {
    std::vector<double> gamma_per_layer;  // size ℓ
    double omega = 1.0;

    static QmsParams uniform(double gamma, double omega, std::size_t layer_count);
    void validate(const MultilayerNetwork& net) const;
};

/// Newman–Girvan modularity of one layer. `layer` may be omitted for
/// single-layer networks. Throws DomainError when the layer has no edges.
double q_ng(const MultilayerNetwork& net, const CommunityStructure& cs,
            std::optional<LayerId> layer = std::nullopt);

/// The multilayer modularity Q with redundancy-based or fixed resolution and
/// projection-based inter-layer coupling. Deterministic for every thread
/// count. Throws DomainError when the total degree is zero.
QReport q_multilayer(const MultilayerNetwork& net, const CommunityStructure& cs,
                     const ResolutionSpec& rspec, const CouplingSpec& cspec, unsigned threads = 1);

/// Multislice modularity with per-layer γ_i and constant coupling ω. The
/// normalizer includes the ω-weighted couplings (one ω per directed valid
/// pairing per shared entity, hence 2ω per unordered coupling edge). Layers
/// without edges contribute no null-model term.
double q_multislice(const MultilayerNetwork& net, const CommunityStructure& cs,
                    const QmsParams& params, const OrderingScheme& scheme = {});

/// Brute-force evaluation of Q by direct enumeration over node pairs and
/// couplings, sharing no code with the aggregated engine path. Guarded to
/// n·ℓ ≤ 64.
double q_oracle(const MultilayerNetwork& net, const CommunityStructure& cs,
                const ResolutionSpec& rspec, const CouplingSpec& cspec);

} // namespace mlmod
