#include "mlmod/commstruct.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "mlmod/util.hpp"

namespace mlmod {

namespace {

/// Shared finalize step: checks totality, drops empty communities, densifies
/// ids, and builds the member caches.
CommunityStructure build(const MultilayerNetwork& net,
                         std::vector<std::vector<CommunityId>> assign, std::uint32_t k_raw,
                         const std::vector<std::string>& raw_labels,
                         std::vector<std::string>* warnings);

} // namespace

CommunityStructure CommunityStructure::from_assignments(
    const MultilayerNetwork& net,
    const std::vector<std::tuple<EntityId, LayerId, CommunityId>>& assignments,
    std::vector<std::string>* warnings) {
    const std::size_t n = net.entity_count();
    const std::size_t ell = net.layer_count();
    std::vector<std::vector<CommunityId>> assign(ell, std::vector<CommunityId>(n, kNone));
    std::uint32_t k_raw = 0;
    for (const auto& [u, l, c] : assignments) {
        if (l >= ell || u >= n) throw DomainError("assignment references unknown entity/layer");
        if (!net.has_node(u, l))
            throw DomainError("assignment for entity '" + net.entity_label(u) +
                              "' on layer '" + net.layer_label(l) +
                              "' but the entity is not present there");
        auto& slot = assign[l][u];
        if (slot != kNone && slot != c)
            throw DomainError("conflicting duplicate assignment for entity '" +
                              net.entity_label(u) + "' on layer '" + net.layer_label(l) + "'");
        slot = c;
        k_raw = std::max(k_raw, c + 1);
    }
    return build(net, std::move(assign), k_raw, {}, warnings);
}

CommunityStructure CommunityStructure::from_entity_assignment(
    const MultilayerNetwork& net, const std::vector<CommunityId>& by_entity,
    std::vector<std::string>* warnings) {
    if (by_entity.size() != net.entity_count())
        throw DomainError("entity assignment size mismatch");
    const std::size_t ell = net.layer_count();
    std::vector<std::vector<CommunityId>> assign(ell,
                                                 std::vector<CommunityId>(net.entity_count(), kNone));
    std::uint32_t k_raw = 0;
    for (EntityId u = 0; u < by_entity.size(); ++u) {
        const CommunityId c = by_entity[u];
        if (c == kNone) continue;
        for (LayerId l : net.layers_of(u)) assign[l][u] = c;
        k_raw = std::max(k_raw, c + 1);
    }
    return build(net, std::move(assign), k_raw, {}, warnings);
}

namespace {

CommunityStructure build(const MultilayerNetwork& net,
                         std::vector<std::vector<CommunityId>> assign, std::uint32_t k_raw,
                         const std::vector<std::string>& raw_labels,
                         std::vector<std::string>* warnings) {
    const std::size_t ell = net.layer_count();
    // totality over occupied pairs
    for (LayerId l = 0; l < ell; ++l)
        for (EntityId u : net.nodes(l))
            if (assign[l][u] == kNone)
                throw DomainError("missing assignment for entity '" + net.entity_label(u) +
                                  "' on layer '" + net.layer_label(l) + "'");

    // drop empty communities, densify ids
    std::vector<std::uint64_t> occurrences(k_raw, 0);
    for (LayerId l = 0; l < ell; ++l)
        for (EntityId u : net.nodes(l)) occurrences[assign[l][u]]++;
    std::vector<CommunityId> remap(k_raw, kNone);
    std::uint32_t k = 0;
    for (CommunityId c = 0; c < k_raw; ++c) {
        if (occurrences[c] > 0) {
            remap[c] = k++;
        } else if (warnings) {
            const std::string name = c < raw_labels.size() ? raw_labels[c] : std::to_string(c);
            warnings->push_back("community '" + name + "' has no occurrences and was dropped");
        }
    }
    for (LayerId l = 0; l < ell; ++l)
        for (EntityId u : net.nodes(l)) assign[l][u] = remap[assign[l][u]];

    CommunityStructure cs;
    cs.assign_ = std::move(assign);
    cs.k_ = k;
    cs.layer_count_ = ell;
    cs.members_.assign(static_cast<std::size_t>(k) * ell, {});
    cs.entity_members_.assign(k, {});
    cs.entity_communities_.assign(net.entity_count(), {});
    for (LayerId l = 0; l < ell; ++l) {
        for (EntityId u : net.nodes(l)) {  // nodes are sorted, members stay sorted
            const CommunityId c = cs.assign_[l][u];
            cs.members_[static_cast<std::size_t>(c) * ell + l].push_back(u);
            cs.entity_communities_[u].push_back(c);
        }
    }
    for (EntityId u = 0; u < net.entity_count(); ++u) {
        auto& cu = cs.entity_communities_[u];
        std::sort(cu.begin(), cu.end());
        cu.erase(std::unique(cu.begin(), cu.end()), cu.end());
        for (CommunityId c : cu) cs.entity_members_[c].push_back(u);
    }
    return cs;
}

} // namespace

Projection projection(const CommunityStructure& cs, const MultilayerNetwork& net, CommunityId c,
                      LayerId layer) {
    if (c >= cs.community_count() || layer >= net.layer_count())
        throw DomainError("projection: invalid community or layer id");
    auto span = cs.projection(c, layer);
    return Projection{c, layer, {span.begin(), span.end()}};
}

std::pair<std::uint64_t, std::uint64_t> community_layer_degrees(const CommunityStructure& cs,
                                                                const MultilayerNetwork& net,
                                                                CommunityId c, LayerId layer) {
    if (c >= cs.community_count() || layer >= net.layer_count())
        throw DomainError("community_layer_degrees: invalid community or layer id");
    std::uint64_t d = 0;
    for (EntityId u : cs.projection(c, layer)) d += net.degree(u, layer);
    std::uint64_t internal = 0;
    for (const Edge& e : net.edges(layer))
        if (cs.community_of(e.u, layer) == c && cs.community_of(e.v, layer) == c) internal += 2;
    return {d, internal};
}

CommunityDegreeTable compute_degree_table(const CommunityStructure& cs,
                                          const MultilayerNetwork& net) {
    const std::size_t ell = net.layer_count();
    const std::size_t k = cs.community_count();
    CommunityDegreeTable table;
    table.layer_count = ell;
    table.degree.assign(k * ell, 0);
    table.internal_degree.assign(k * ell, 0);
    for (LayerId l = 0; l < ell; ++l) {
        for (EntityId u : net.nodes(l))
            table.degree[static_cast<std::size_t>(cs.community_of(u, l)) * ell + l] +=
                net.degree(u, l);
        for (const Edge& e : net.edges(l)) {
            const CommunityId cu = cs.community_of(e.u, l);
            if (cu == cs.community_of(e.v, l))
                table.internal_degree[static_cast<std::size_t>(cu) * ell + l] += 2;
        }
    }
    return table;
}

CommunityStructure parse_communities(std::istream& in, const MultilayerNetwork& net,
                                     CommunityFileMode mode,
                                     std::vector<std::string>* warnings) {
    std::string line;
    std::size_t lineno = 0;
    std::unordered_map<std::string, CommunityId> community_ids;
    std::vector<std::string> community_labels;
    auto intern_community = [&](const std::string& label) {
        auto [it, inserted] =
            community_ids.emplace(label, static_cast<CommunityId>(community_labels.size()));
        if (inserted) community_labels.push_back(label);
        return it->second;
    };

    std::vector<std::tuple<EntityId, LayerId, CommunityId>> triples;
    std::vector<CommunityId> by_entity(net.entity_count(), kNone);
    std::vector<std::size_t> entity_line(net.entity_count(), 0);

    while (std::getline(in, line)) {
        ++lineno;
        bool blank = true;
        for (char ch : line)
            if (ch != ' ' && ch != '\t' && ch != '\r') {
                blank = (ch == '#');
                break;
            }
        if (blank) continue;
        auto tokens = split_ws(line);
        if (mode == CommunityFileMode::PerNodeLayer) {
            if (tokens.size() != 3)
                throw ParseError("expected '<entity> <layer> <community>', got " +
                                     std::to_string(tokens.size()) + " fields",
                                 lineno);
            auto u = net.find_entity(tokens[0]);
            if (!u) throw ParseError("unknown entity '" + tokens[0] + "'", lineno);
            auto l = net.find_layer(tokens[1]);
            if (!l) throw ParseError("unknown layer '" + tokens[1] + "'", lineno);
            triples.emplace_back(*u, *l, intern_community(tokens[2]));
        } else {
            if (tokens.size() != 2)
                throw ParseError("expected '<entity> <community>', got " +
                                     std::to_string(tokens.size()) + " fields",
                                 lineno);
            auto u = net.find_entity(tokens[0]);
            if (!u) throw ParseError("unknown entity '" + tokens[0] + "'", lineno);
            const CommunityId c = intern_community(tokens[1]);
            if (by_entity[*u] != kNone && by_entity[*u] != c)
                throw ParseError("conflicting duplicate assignment for entity '" + tokens[0] +
                                     "', first assigned at line " +
                                     std::to_string(entity_line[*u]),
                                 lineno);
            by_entity[*u] = c;
            entity_line[*u] = lineno;
        }
    }

    try {
        if (mode == CommunityFileMode::PerNodeLayer)
            return CommunityStructure::from_assignments(net, triples, warnings);
        return CommunityStructure::from_entity_assignment(net, by_entity, warnings);
    } catch (const DomainError& e) {
        throw Error(std::string("community file invalid: ") + e.what());
    }
}

CommunityStructure load_communities(const std::filesystem::path& path,
                                    const MultilayerNetwork& net, CommunityFileMode mode,
                                    std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open community file: " + path.string());
    return parse_communities(in, net, mode, warnings);
}

void save_communities(const CommunityStructure& cs, const MultilayerNetwork& net,
                      std::ostream& out) {
    for (LayerId l = 0; l < net.layer_count(); ++l)
        for (EntityId u : net.nodes(l))
            out << net.entity_label(u) << ' ' << net.layer_label(l) << ' '
                << cs.community_of(u, l) << '\n';
}

} // namespace mlmod
