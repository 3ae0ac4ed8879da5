#include "mlmod/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "mlmod/util.hpp"

namespace mlmod {

CouplingSpec CouplingSpec::none(OrderingScheme scheme) {
    return CouplingSpec{0, Variant::Symmetric, false, std::move(scheme)};
}

CouplingSpec CouplingSpec::symmetric(OrderingScheme scheme) {
    return CouplingSpec{1, Variant::Symmetric, false, std::move(scheme)};
}

CouplingSpec CouplingSpec::asymmetric_inner(OrderingScheme scheme) {
    return CouplingSpec{1, Variant::AsymmetricInner, false, std::move(scheme)};
}

CouplingSpec CouplingSpec::asymmetric_outer(OrderingScheme scheme) {
    return CouplingSpec{1, Variant::AsymmetricOuter, false, std::move(scheme)};
}

void CouplingSpec::validate() const {
    if (beta != 0 && beta != 1) throw DomainError("beta must be 0 or 1");
    if (time_aware && scheme.kind() == PairingKind::Unordered)
        throw DomainError("time-aware coupling requires an ordered scheme (adjacent/succeeding)");
}

double ic_sym(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c,
              LayerId li, LayerId lj) {
    if (li == lj) throw std::logic_error("ic_sym: layers must differ");
    const std::size_t shared = net.shared_node_count(li, lj);
    if (shared == 0) return 0.0;
    const std::size_t overlap = intersection_size(cs.projection(c, li), cs.projection(c, lj));
    return static_cast<double>(overlap) / static_cast<double>(shared);
}

double ic_asym(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c,
               LayerId li, LayerId lj) {
    if (li == lj) throw std::logic_error("ic_asym: layers must differ");
    const std::size_t source_size = cs.projection(c, li).size();
    if (source_size == 0) return 0.0;
    const std::size_t shared = net.shared_node_count(li, lj);
    if (shared == 0) return 0.0;
    const std::size_t overlap = intersection_size(cs.projection(c, li), cs.projection(c, lj));
    return static_cast<double>(overlap) / static_cast<double>(shared) *
           (static_cast<double>(net.nodes(li).size()) / static_cast<double>(source_size));
}

double time_factor(std::uint32_t i, std::uint32_t j) {
    if (j <= i) throw std::logic_error("time_factor: requires j > i in the active order");
    return 2.0 / (1.0 + std::log2(1.0 + static_cast<double>(j - i)));
}

double ic(const CouplingSpec& spec, const CommunityStructure& cs, const MultilayerNetwork& net,
          CommunityId c, LayerId l, LayerId lp, const ResolvedOrdering& ordering) {
    {
        bool valid = false;
        for (LayerId candidate : ordering.pairings(l))
            if (candidate == lp) {
                valid = true;
                break;
            }
        if (!valid) throw std::logic_error("ic: (L, L') is not a valid pairing under the scheme");
    }
    double value = 0.0;
    switch (spec.variant) {
    case CouplingSpec::Variant::Symmetric:
        value = ic_sym(cs, net, c, l, lp);
        break;
    case CouplingSpec::Variant::AsymmetricInner:
        value = ic_asym(cs, net, c, l, lp);
        break;
    case CouplingSpec::Variant::AsymmetricOuter:
        value = ic_asym(cs, net, c, lp, l);
        break;
    }
    if (spec.time_aware) {
        const std::uint32_t pi = ordering.position(l);
        const std::uint32_t pj = ordering.position(lp);
        value *= time_factor(std::min(pi, pj), std::max(pi, pj));
    }
    return value;
}

} // namespace mlmod
