#include "mlmod/resolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unordered_map>

#include "mlmod/util.hpp"

namespace mlmod {

ResolutionSpec ResolutionSpec::fixed(double v) {
    if (!(v >= 0.0)) throw DomainError("fixed resolution value must be non-negative");
    return {Kind::Fixed, v};
}

RedundantPairIndex RedundantPairIndex::build(const MultilayerNetwork& net,
                                             const CommunityStructure& cs, unsigned threads) {
    RedundantPairIndex index;
    const std::size_t ell = net.layer_count();
    index.layer_count_ = ell;

    // network-level pass: every linked entity pair with its supporting layers
    std::unordered_map<std::uint64_t, std::vector<LayerId>> pair_layers;
    for (LayerId l = 0; l < ell; ++l) {
        for (const Edge& e : net.edges(l)) {
            const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
            pair_layers[key].push_back(l);  // layers visited in order, stays sorted
        }
    }
    index.pairs_.reserve(pair_layers.size());
    std::vector<std::uint64_t> keys;
    keys.reserve(pair_layers.size());
    for (const auto& [key, _] : pair_layers) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t key : keys) {
        auto& sl = pair_layers[key];
        PairEntry entry;
        entry.u = static_cast<EntityId>(key >> 32);
        entry.v = static_cast<EntityId>(key & 0xffffffffu);
        entry.sl_begin = static_cast<std::uint32_t>(index.supporting_.size());
        index.supporting_.insert(index.supporting_.end(), sl.begin(), sl.end());
        entry.sl_end = static_cast<std::uint32_t>(index.supporting_.size());
        index.pairs_.push_back(entry);
    }

    // per-community filtering by entity-level membership of both endpoints
    const std::uint32_t k = cs.community_count();
    index.community_pairs_.assign(k, {});
    index.stats_.assign(k, CommunityPairStats{});
    for (auto& st : index.stats_) st.nrp.assign(ell, 0);

    std::vector<std::vector<std::vector<std::uint32_t>>> shard_pairs(
        threads ? threads : 1, std::vector<std::vector<std::uint32_t>>(k));
    const unsigned shards = static_cast<unsigned>(shard_pairs.size());
    parallel_for(shards, shards, [&](std::size_t shard) {
        std::vector<CommunityId> common;
        for (std::size_t i = shard; i < index.pairs_.size(); i += shards) {
            const PairEntry& entry = index.pairs_[i];
            auto cu = cs.communities_of_entity(entry.u);
            auto cv = cs.communities_of_entity(entry.v);
            common.clear();
            std::set_intersection(cu.begin(), cu.end(), cv.begin(), cv.end(),
                                  std::back_inserter(common));
            for (CommunityId c : common)
                shard_pairs[shard][c].push_back(static_cast<std::uint32_t>(i));
        }
    });
    for (CommunityId c = 0; c < k; ++c) {
        auto& list = index.community_pairs_[c];
        for (const auto& shard : shard_pairs) list.insert(list.end(), shard[c].begin(), shard[c].end());
        std::sort(list.begin(), list.end());
        auto& st = index.stats_[c];
        st.p1_count = list.size();
        for (std::uint32_t i : list) {
            const PairEntry& entry = index.pairs_[i];
            const std::uint32_t sl_size = entry.sl_end - entry.sl_begin;
            if (sl_size < 2) continue;
            st.p2_count++;
            st.supporting_layer_sum += sl_size;
            for (std::uint32_t s = entry.sl_begin; s < entry.sl_end; ++s)
                st.nrp[index.supporting_[s]]++;
        }
    }
    return index;
}

double RedundantPairIndex::redundancy(CommunityId c) const {
    const auto& st = stats_[c];
    if (st.p1_count == 0) return 0.0;
    return static_cast<double>(st.supporting_layer_sum) /
           (static_cast<double>(layer_count_) * static_cast<double>(st.p1_count));
}

std::vector<LinkedPair> RedundantPairIndex::pairs_of(CommunityId c) const {
    std::vector<LinkedPair> out;
    out.reserve(community_pairs_[c].size());
    for (std::uint32_t i : community_pairs_[c]) {
        const PairEntry& entry = pairs_[i];
        out.push_back(LinkedPair{
            entry.u, entry.v,
            std::span<const LayerId>(supporting_.data() + entry.sl_begin,
                                     entry.sl_end - entry.sl_begin)});
    }
    return out;
}

double gamma_from_nrp(std::uint64_t nrp) {
    return 2.0 / (1.0 + std::log2(1.0 + static_cast<double>(nrp)));
}

double gamma(const ResolutionSpec& spec, const RedundantPairIndex& index, LayerId layer,
             CommunityId c) {
    if (spec.kind == ResolutionSpec::Kind::Fixed) return spec.fixed_value;
    return gamma_from_nrp(index.nrp(layer, c));
}

double redundancy(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c) {
    return RedundantPairIndex::build(net, cs).redundancy(c);
}

std::uint32_t nrp(const CommunityStructure& cs, const MultilayerNetwork& net, LayerId layer,
                  CommunityId c) {
    return RedundantPairIndex::build(net, cs).nrp(layer, c);
}

} // namespace mlmod
