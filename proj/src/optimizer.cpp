#include "mlmod/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mlmod/coupling.hpp"
#include "mlmod/resolution.hpp"
#include "mlmod/util.hpp"

namespace mlmod {

namespace {

struct CommState {
    std::vector<std::uint64_t> degree;        // per layer
    std::vector<std::uint64_t> internal;      // per layer
    std::vector<std::vector<EntityId>> proj;  // per layer, sorted
    std::vector<EntityId> entities;           // sorted
    std::vector<std::uint64_t> pair_keys;     // sorted P1 keys (redundancy-based only)
    double contribution = 0.0;
};

std::uint64_t pair_key(EntityId u, EntityId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

class GreedyEngine {
public:
    GreedyEngine(const MultilayerNetwork& net, const ResolutionSpec& rspec,
                 const CouplingSpec& cspec)
        : net_(net),
          rspec_(rspec),
          cspec_(cspec),
          ordering_(net, cspec.scheme),
          track_pairs_(rspec.kind == ResolutionSpec::Kind::RedundancyBased) {
        cspec_.validate();
        const std::uint64_t d = total_degree(net, cspec.scheme, cspec.beta);
        if (d == 0) throw DomainError("greedy_maximize: total degree is zero");
        normalizer_ = static_cast<double>(d);
        if (track_pairs_) {
            for (LayerId l = 0; l < net.layer_count(); ++l)
                for (const Edge& e : net.edges(l)) pair_layers_[pair_key(e.u, e.v)].push_back(l);
            pair_adjacency_.assign(net.entity_count(), {});
            for (const auto& [key, _] : pair_layers_) {
                const EntityId u = static_cast<EntityId>(key >> 32);
                const EntityId v = static_cast<EntityId>(key & 0xffffffffu);
                pair_adjacency_[u].push_back(v);
                pair_adjacency_[v].push_back(u);
            }
            for (auto& adj : pair_adjacency_) std::sort(adj.begin(), adj.end());
        }
    }

    void init(DetectInit mode) {
        const std::size_t ell = net_.layer_count();
        assign_.assign(ell, std::vector<std::uint32_t>(net_.entity_count(), kNone));
        comms_.clear();
        alive_.clear();
        if (mode == DetectInit::EntitySingletons) {
            for (EntityId u = 0; u < net_.entity_count(); ++u) {
                const std::uint32_t c = new_community();
                for (LayerId l : net_.layers_of(u)) assign_[l][u] = c;
                comms_[c].entities.push_back(u);
            }
        } else {
            for (LayerId l = 0; l < ell; ++l)
                for (EntityId u : net_.nodes(l)) {
                    const std::uint32_t c = new_community();
                    assign_[l][u] = c;
                    if (comms_[c].entities.empty()) comms_[c].entities.push_back(u);
                }
        }
        // both init modes start from single-entity communities, so all P1
        // pair sets start empty
        for (LayerId l = 0; l < ell; ++l) {
            for (EntityId u : net_.nodes(l)) {
                auto& state = comms_[assign_[l][u]];
                state.proj[l].push_back(u);
                state.degree[l] += net_.degree(u, l);
            }
            for (const Edge& e : net_.edges(l)) {
                const std::uint32_t cu = assign_[l][e.u];
                if (cu == assign_[l][e.v]) comms_[cu].internal[l] += 2;
            }
        }
        q_ = 0.0;
        for (std::uint32_t c = 0; c < comms_.size(); ++c) {
            comms_[c].contribution = contribution(comms_[c]);
            q_ += comms_[c].contribution;
        }
    }

    double q() const { return q_; }

    /// One greedy round; returns true if a merge was accepted.
    bool step(MergeEvent& event) {
        const auto candidates = candidate_pairs();
        double best_delta = 0.0;
        std::pair<std::uint32_t, std::uint32_t> best{kNone, kNone};
        CommState best_merged;
        // candidates come sorted, so the first maximum is the lowest id pair
        for (const auto& [a, b] : candidates) {
            CommState merged = merge_states(a, b);
            const double delta =
                merged.contribution - comms_[a].contribution - comms_[b].contribution;
            if (delta > best_delta) {
                best_delta = delta;
                best = {a, b};
                best_merged = std::move(merged);
            }
        }
        if (best.first == kNone || !(best_delta > 0.0)) return false;
        const auto [a, b] = best;
        for (LayerId l = 0; l < net_.layer_count(); ++l)
            for (EntityId u : best_merged.proj[l]) assign_[l][u] = a;
        comms_[a] = std::move(best_merged);
        alive_[b] = false;
        q_ += best_delta;
        event = MergeEvent{a, b, best_delta, q_};
        return true;
    }

    CommunityStructure snapshot() const {
        std::vector<std::tuple<EntityId, LayerId, CommunityId>> triples;
        for (LayerId l = 0; l < net_.layer_count(); ++l)
            for (EntityId u : net_.nodes(l)) triples.emplace_back(u, l, assign_[l][u]);
        return CommunityStructure::from_assignments(net_, triples);
    }

private:
    std::uint32_t new_community() {
        comms_.push_back(CommState{});
        alive_.push_back(true);
        auto& state = comms_.back();
        const std::size_t ell = net_.layer_count();
        state.degree.assign(ell, 0);
        state.internal.assign(ell, 0);
        state.proj.assign(ell, {});
        return static_cast<std::uint32_t>(comms_.size() - 1);
    }

    double contribution(const CommState& state) const {
        const std::size_t ell = net_.layer_count();
        std::vector<double> gammas(ell, rspec_.fixed_value);
        if (track_pairs_) {
            std::vector<std::uint32_t> nrp(ell, 0);
            for (std::uint64_t key : state.pair_keys) {
                const auto& sl = pair_layers_.at(key);
                if (sl.size() < 2) continue;
                for (LayerId l : sl) nrp[l]++;
            }
            for (LayerId l = 0; l < ell; ++l) gammas[l] = gamma_from_nrp(nrp[l]);
        }
        long double acc = 0.0L;
        for (LayerId l = 0; l < ell; ++l) {
            const long double dl = static_cast<long double>(state.degree[l]);
            acc += static_cast<long double>(state.internal[l]);
            acc -= static_cast<long double>(gammas[l]) * dl * dl / normalizer_;
            if (cspec_.beta != 0) {
                for (LayerId lp : ordering_.pairings(l)) acc += coupling_value(state, l, lp);
            }
        }
        return static_cast<double>(acc / normalizer_);
    }

    double coupling_value(const CommState& state, LayerId l, LayerId lp) const {
        LayerId src = l, dst = lp;
        if (cspec_.variant == CouplingSpec::Variant::AsymmetricOuter) std::swap(src, dst);
        const auto& proj_src = state.proj[src];
        const auto& proj_dst = state.proj[dst];
        const std::size_t shared = net_.shared_node_count(src, dst);
        if (shared == 0 || proj_src.empty()) return 0.0;
        double value = static_cast<double>(intersection_size(proj_src, proj_dst)) /
                       static_cast<double>(shared);
        if (cspec_.variant != CouplingSpec::Variant::Symmetric)
            value *= static_cast<double>(net_.nodes(src).size()) /
                     static_cast<double>(proj_src.size());
        if (cspec_.time_aware) {
            const std::uint32_t pi = ordering_.position(l);
            const std::uint32_t pj = ordering_.position(lp);
            value *= time_factor(std::min(pi, pj), std::max(pi, pj));
        }
        return value;
    }

    CommState merge_states(std::uint32_t a, std::uint32_t b) const {
        const CommState& sa = comms_[a];
        const CommState& sb = comms_[b];
        CommState merged;
        const std::size_t ell = net_.layer_count();
        merged.degree.resize(ell);
        merged.internal.resize(ell);
        merged.proj.resize(ell);
        for (LayerId l = 0; l < ell; ++l) {
            merged.degree[l] = sa.degree[l] + sb.degree[l];
            merged.proj[l] = sorted_union(sa.proj[l], sb.proj[l]);
            std::uint64_t cross = 0;
            const auto& smaller = sa.proj[l].size() <= sb.proj[l].size() ? sa.proj[l] : sb.proj[l];
            const std::uint32_t other = sa.proj[l].size() <= sb.proj[l].size() ? b : a;
            for (EntityId u : smaller)
                for (EntityId v : net_.neighbors(u, l))
                    if (assign_[l][v] == other) ++cross;
            merged.internal[l] = sa.internal[l] + sb.internal[l] + 2 * cross;
        }
        merged.entities = sorted_union(sa.entities, sb.entities);
        if (track_pairs_) {
            std::vector<std::uint64_t> keys;
            keys.reserve(sa.pair_keys.size() + sb.pair_keys.size());
            std::merge(sa.pair_keys.begin(), sa.pair_keys.end(), sb.pair_keys.begin(),
                       sb.pair_keys.end(), std::back_inserter(keys));
            // pairs that cross the two entity sets
            for (EntityId u : sa.entities)
                for (EntityId v : pair_adjacency_[u])
                    if (sorted_contains(sb.entities, v)) keys.push_back(pair_key(u, v));
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            merged.pair_keys = std::move(keys);
        }
        merged.contribution = contribution(merged);
        return merged;
    }

    /// Community pairs connected by an intra-layer edge or sharing an entity.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> candidate_pairs() const {
        std::unordered_set<std::uint64_t> seen;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        auto push = [&](std::uint32_t x, std::uint32_t y) {
            if (x == y) return;
            if (x > y) std::swap(x, y);
            if (seen.insert((static_cast<std::uint64_t>(x) << 32) | y).second)
                out.emplace_back(x, y);
        };
        for (LayerId l = 0; l < net_.layer_count(); ++l)
            for (const Edge& e : net_.edges(l)) push(assign_[l][e.u], assign_[l][e.v]);
        for (EntityId u = 0; u < net_.entity_count(); ++u) {
            const auto layers = net_.layers_of(u);
            for (std::size_t i = 0; i < layers.size(); ++i)
                for (std::size_t j = i + 1; j < layers.size(); ++j)
                    push(assign_[layers[i]][u], assign_[layers[j]][u]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    const MultilayerNetwork& net_;
    ResolutionSpec rspec_;
    CouplingSpec cspec_;
    ResolvedOrdering ordering_;
    bool track_pairs_;
    double normalizer_ = 0.0;
    double q_ = 0.0;
    std::unordered_map<std::uint64_t, std::vector<LayerId>> pair_layers_;
    std::vector<std::vector<EntityId>> pair_adjacency_;
    std::vector<std::vector<std::uint32_t>> assign_;  // [layer][entity]
    std::vector<CommState> comms_;
    std::vector<bool> alive_;
};

} // namespace

DetectResult greedy_maximize(const MultilayerNetwork& net, const ResolutionSpec& rspec,
                             const CouplingSpec& cspec, DetectInit init, std::size_t max_merges,
                             bool debug_check) {
    if (net.entity_count() == 0) throw DomainError("greedy_maximize: empty network");
    GreedyEngine engine(net, rspec, cspec);
    engine.init(init);

    DetectResult result;
    MergeEvent event;
    while ((max_merges == 0 || result.merge_log.size() < max_merges) && engine.step(event)) {
        result.merge_log.push_back(event);
        if (debug_check) {
            const CommunityStructure check = engine.snapshot();
            const QReport full = q_multilayer(net, check, rspec, cspec);
            if (std::abs(full.q_global - engine.q()) > 1e-9)
                throw std::logic_error("greedy_maximize: incremental Q drifted from full Q");
        }
    }
    result.structure = engine.snapshot();
    result.report = q_multilayer(net, result.structure, rspec, cspec);
    return result;
}

} // namespace mlmod
