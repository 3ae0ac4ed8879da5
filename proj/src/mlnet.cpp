#include "mlmod/mlnet.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "mlmod/util.hpp"

namespace mlmod {

void MultilayerNetwork::require_mutable() const {
    if (finalized_) throw DomainError("network is finalized and read-only");
}

void MultilayerNetwork::require_finalized() const {
    if (!finalized_) throw DomainError("network must be finalized before queries");
}

LayerId MultilayerNetwork::add_layer(const std::string& label) {
    require_mutable();
    if (layer_index_.contains(label)) throw DomainError("duplicate layer label: " + label);
    const LayerId id = static_cast<LayerId>(layers_.size());
    layers_.push_back(LayerData{label, {}, {}, {}, {}, {}});
    layer_index_.emplace(label, id);
    return id;
}

EntityId MultilayerNetwork::intern_entity(const std::string& label) {
    auto it = entity_index_.find(label);
    if (it != entity_index_.end()) return it->second;
    require_mutable();
    const EntityId id = static_cast<EntityId>(entity_labels_.size());
    entity_labels_.push_back(label);
    entity_index_.emplace(label, id);
    return id;
}

LayerId MultilayerNetwork::intern_layer(const std::string& label) {
    auto it = layer_index_.find(label);
    if (it != layer_index_.end()) return it->second;
    return add_layer(label);
}

void MultilayerNetwork::add_node(EntityId u, LayerId layer) {
    require_mutable();
    layers_.at(layer).nodes.push_back(u);
}

void MultilayerNetwork::add_edge(EntityId u, EntityId v, LayerId layer) {
    require_mutable();
    if (u == v) throw DomainError("self-loop on entity '" + entity_labels_.at(u) + "'");
    if (u > v) std::swap(u, v);
    auto& data = layers_.at(layer);
    data.edges.push_back(Edge{u, v});
    data.nodes.push_back(u);
    data.nodes.push_back(v);
}

void MultilayerNetwork::finalize() {
    require_mutable();
    const std::size_t n = entity_labels_.size();
    for (auto& layer : layers_) {
        std::sort(layer.nodes.begin(), layer.nodes.end());
        layer.nodes.erase(std::unique(layer.nodes.begin(), layer.nodes.end()), layer.nodes.end());
        std::sort(layer.edges.begin(), layer.edges.end());
        if (std::adjacent_find(layer.edges.begin(), layer.edges.end()) != layer.edges.end())
            throw DomainError("duplicate edge in layer '" + layer.label + "'");
        layer.present.assign(n, 0);
        layer.degree.assign(n, 0);
        layer.adjacency.assign(n, {});
        for (EntityId u : layer.nodes) layer.present[u] = 1;
        for (const Edge& e : layer.edges) {
            layer.degree[e.u]++;
            layer.degree[e.v]++;
            layer.adjacency[e.u].push_back(e.v);
            layer.adjacency[e.v].push_back(e.u);
        }
        // push order already yields sorted adjacency (edges are sorted), except
        // for the reverse direction; sort to be safe.
        for (auto& adj : layer.adjacency) std::sort(adj.begin(), adj.end());
    }
    entity_layers_.assign(n, {});
    for (LayerId l = 0; l < layers_.size(); ++l)
        for (EntityId u : layers_[l].nodes) entity_layers_[u].push_back(l);
    for (EntityId u = 0; u < n; ++u)
        if (entity_layers_[u].empty())
            throw DomainError("entity '" + entity_labels_[u] + "' is present in no layer");

    const std::size_t ell = layers_.size();
    shared_nodes_.assign(ell * ell, 0);
    for (EntityId u = 0; u < n; ++u) {
        const auto& ls = entity_layers_[u];
        for (std::size_t i = 0; i < ls.size(); ++i)
            for (std::size_t j = 0; j < ls.size(); ++j) shared_nodes_[ls[i] * ell + ls[j]]++;
    }
    finalized_ = true;
}

std::optional<EntityId> MultilayerNetwork::find_entity(const std::string& label) const {
    auto it = entity_index_.find(label);
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<LayerId> MultilayerNetwork::find_layer(const std::string& label) const {
    auto it = layer_index_.find(label);
    if (it == layer_index_.end()) return std::nullopt;
    return it->second;
}

bool MultilayerNetwork::has_node(EntityId u, LayerId layer) const {
    const auto& present = layers_[layer].present;
    return u < present.size() && present[u] != 0;
}

std::uint32_t MultilayerNetwork::degree(EntityId u, LayerId layer) const {
    const auto& deg = layers_[layer].degree;
    return u < deg.size() ? deg[u] : 0;
}

std::span<const EntityId> MultilayerNetwork::neighbors(EntityId u, LayerId layer) const {
    static const std::vector<EntityId> empty;
    const auto& adj = layers_[layer].adjacency;
    return u < adj.size() ? std::span<const EntityId>(adj[u]) : std::span<const EntityId>(empty);
}

bool MultilayerNetwork::has_edge(EntityId u, EntityId v, LayerId layer) const {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    const auto& edges = layers_[layer].edges;
    return std::binary_search(edges.begin(), edges.end(), Edge{u, v});
}

std::size_t MultilayerNetwork::total_edge_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers_) total += layer.edges.size();
    return total;
}

// --- ordering schemes ---

ResolvedOrdering::ResolvedOrdering(const MultilayerNetwork& net, const OrderingScheme& scheme)
    : kind_(scheme.kind()) {
    const std::size_t ell = net.layer_count();
    if (scheme.permutation().empty()) {
        order_.resize(ell);
        std::iota(order_.begin(), order_.end(), 0);
    } else {
        order_ = scheme.permutation();
        if (order_.size() != ell) throw DomainError("layer permutation size mismatch");
        std::vector<char> seen(ell, 0);
        for (LayerId l : order_) {
            if (l >= ell || seen[l]) throw DomainError("layer permutation is not a permutation");
            seen[l] = 1;
        }
    }
    if (scheme.descending()) std::reverse(order_.begin(), order_.end());

    position_.assign(ell, 0);
    for (std::uint32_t i = 0; i < order_.size(); ++i) position_[order_[i]] = i;

    offsets_.assign(ell + 1, 0);
    for (LayerId l = 0; l < ell; ++l) {
        offsets_[l] = pairings_.size();
        switch (kind_) {
        case PairingKind::Unordered:
            for (std::uint32_t i = 0; i < ell; ++i)
                if (order_[i] != l) pairings_.push_back(order_[i]);
            break;
        case PairingKind::Adjacent:
            if (position_[l] + 1 < ell) pairings_.push_back(order_[position_[l] + 1]);
            break;
        case PairingKind::Succeeding:
            for (std::uint32_t i = position_[l] + 1; i < ell; ++i) pairings_.push_back(order_[i]);
            break;
        }
    }
    offsets_[ell] = pairings_.size();
}

std::vector<LayerId> valid_pairings(const MultilayerNetwork& net, const OrderingScheme& scheme,
                                    LayerId l) {
    if (l >= net.layer_count()) throw DomainError("layer id out of range");
    ResolvedOrdering ordering(net, scheme);
    auto span = ordering.pairings(l);
    return {span.begin(), span.end()};
}

std::uint64_t total_degree(const MultilayerNetwork& net, const OrderingScheme& scheme, int beta) {
    std::uint64_t total = 0;
    for (LayerId l = 0; l < net.layer_count(); ++l) total += 2 * net.edge_count(l);
    if (beta != 0) {
        ResolvedOrdering ordering(net, scheme);
        for (LayerId l = 0; l < net.layer_count(); ++l)
            for (LayerId lp : ordering.pairings(l)) total += net.shared_node_count(l, lp);
    }
    return total;
}

// --- file IO ---

namespace {

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;
}

struct PendingEdge {
    std::string layer, u, v;
    std::size_t line;
};

struct PendingNode {
    std::string layer, entity;
    std::size_t line;
};

} // namespace

MultilayerNetwork parse_network(std::istream& in, const std::vector<std::string>& layer_order) {
    MultilayerNetwork net;
    const bool layers_declared = !layer_order.empty();
    for (const auto& label : layer_order) net.add_layer(label);

    enum class Section { Edges, Nodes } section = Section::Edges;
    std::string line;
    std::size_t lineno = 0;
    // per-layer duplicate tracking: (u,v) -> first line
    std::vector<std::unordered_map<std::uint64_t, std::size_t>> seen_edges;

    auto layer_for = [&](const std::string& label, std::size_t at) -> LayerId {
        if (layers_declared) {
            auto found = net.find_layer(label);
            if (!found)
                throw ParseError("record references undeclared layer '" + label + "'", at);
            return *found;
        }
        return net.intern_layer(label);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line)) continue;
        auto tokens = split_ws(line);
        if (tokens[0] == "*nodes") {
            section = Section::Nodes;
            continue;
        }
        if (tokens[0] == "*edges") {
            section = Section::Edges;
            continue;
        }
        if (tokens[0].starts_with('*'))
            throw ParseError("unknown section marker '" + tokens[0] + "'", lineno);

        if (section == Section::Nodes) {
            if (tokens.size() != 2)
                throw ParseError("expected '<layer> <entity>', got " +
                                     std::to_string(tokens.size()) + " fields",
                                 lineno);
            const LayerId l = layer_for(tokens[0], lineno);
            net.add_node(net.intern_entity(tokens[1]), l);
        } else {
            if (tokens.size() != 3)
                throw ParseError("expected '<layer> <entity> <entity>', got " +
                                     std::to_string(tokens.size()) + " fields",
                                 lineno);
            const LayerId l = layer_for(tokens[0], lineno);
            const EntityId u = net.intern_entity(tokens[1]);
            const EntityId v = net.intern_entity(tokens[2]);
            if (u == v)
                throw ParseError("self-loop on entity '" + tokens[1] + "' in layer '" + tokens[0] +
                                     "'",
                                 lineno);
            if (seen_edges.size() <= l) seen_edges.resize(l + 1);
            const std::uint64_t key =
                (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
            auto [it, inserted] = seen_edges[l].emplace(key, lineno);
            if (!inserted)
                throw ParseError("duplicate edge '" + tokens[1] + " " + tokens[2] +
                                     "' in layer '" + tokens[0] + "', first declared at line " +
                                     std::to_string(it->second),
                                 lineno);
            net.add_edge(u, v, l);
        }
    }
    net.finalize();
    return net;
}

MultilayerNetwork load_network(const std::filesystem::path& path,
                               const NetworkLoadOptions& options) {
    std::vector<std::string> layer_order;
    if (options.layer_order_file) {
        std::ifstream order_in(*options.layer_order_file);
        if (!order_in)
            throw Error("cannot open layer-order file: " + options.layer_order_file->string());
        std::string line;
        while (std::getline(order_in, line)) {
            if (is_comment_or_blank(line)) continue;
            auto tokens = split_ws(line);
            if (tokens.size() != 1)
                throw Error("layer-order file must hold one label per line: " +
                            options.layer_order_file->string());
            layer_order.push_back(tokens[0]);
        }
    }
    std::ifstream in(path);
    if (!in) throw Error("cannot open network file: " + path.string());
    return parse_network(in, layer_order);
}

void save_network(const MultilayerNetwork& net, std::ostream& out) {
    const std::size_t n = net.entity_count();
    const std::size_t ell = net.layer_count();

    // Emit all occurrences in an order whose first appearances introduce
    // layers in layer-id order and entities in entity-id order, so a reload
    // reproduces the dense ids. Such an order always exists for ids that came
    // from first-appearance interning.
    std::vector<std::vector<EntityId>> remaining(ell);
    for (LayerId l = 0; l < ell; ++l) {
        auto nodes = net.nodes(l);
        remaining[l].assign(nodes.begin(), nodes.end());
    }
    out << "*nodes\n";
    LayerId next_layer = 0;
    EntityId next_entity = 0;
    std::vector<char> layer_seen(ell, 0), entity_seen(n, 0);
    auto emit = [&](LayerId l, EntityId u) {
        out << net.layer_label(l) << ' ' << net.entity_label(u) << '\n';
        if (!layer_seen[l]) layer_seen[l] = 1;
        if (!entity_seen[u]) entity_seen[u] = 1;
        while (next_layer < ell && layer_seen[next_layer]) ++next_layer;
        while (next_entity < n && entity_seen[next_entity]) ++next_entity;
        auto& nodes = remaining[l];
        nodes.erase(std::find(nodes.begin(), nodes.end(), u));
    };
    while (next_layer < ell || next_entity < n) {
        bool progressed = false;
        if (next_layer < ell) {
            const auto& nodes = remaining[next_layer];
            if (nodes.empty())
                throw DomainError("layer '" + net.layer_label(next_layer) +
                                  "' is empty and cannot appear in the node section; write a "
                                  "layer-order file alongside");
            // introduce the next layer, preferring an already-seen entity
            EntityId pick = kNone;
            for (EntityId u : nodes) {
                if (entity_seen[u]) {
                    pick = u;
                    break;
                }
            }
            if (pick == kNone && next_entity < n &&
                std::find(nodes.begin(), nodes.end(), next_entity) != nodes.end())
                pick = next_entity;
            if (pick != kNone) {
                emit(next_layer, pick);
                progressed = true;
            }
        }
        if (!progressed && next_entity < n) {
            for (LayerId l : net.layers_of(next_entity)) {
                if (layer_seen[l]) {
                    emit(l, next_entity);
                    progressed = true;
                    break;
                }
            }
        }
        if (!progressed) {
            // Ids did not come from first-appearance interning (API-built
            // network). Keep the output valid and deterministic; reload may
            // renumber entities.
            emit(next_layer, remaining[next_layer].front());
        }
    }
    // remaining occurrences, deterministic order
    for (LayerId l = 0; l < ell; ++l)
        for (EntityId u : remaining[l]) out << net.layer_label(l) << ' ' << net.entity_label(u) << '\n';

    out << "*edges\n";
    for (LayerId l = 0; l < ell; ++l) {
        std::vector<std::pair<std::string, std::string>> rows;
        rows.reserve(net.edge_count(l));
        for (const Edge& e : net.edges(l)) {
            std::string a = net.entity_label(e.u), b = net.entity_label(e.v);
            if (b < a) std::swap(a, b);
            rows.emplace_back(std::move(a), std::move(b));
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& [a, b] : rows) out << net.layer_label(l) << ' ' << a << ' ' << b << '\n';
    }
}

void save_layer_order(const MultilayerNetwork& net, std::ostream& out) {
    for (LayerId l = 0; l < net.layer_count(); ++l) out << net.layer_label(l) << '\n';
}

} // namespace mlmod
