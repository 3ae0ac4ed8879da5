#include <doctest.h>

#include <sstream>

#include "mlmod/mlnet.hpp"
#include "support.hpp"

using namespace mlmod;

TEST_CASE("load_network parses the three-line example") {
    std::istringstream in("L1 a b\nL1 b c\nL2 a c\n");
    const auto net = parse_network(in);
    CHECK(net.entity_count() == 3);
    CHECK(net.layer_count() == 2);
    CHECK(net.edge_count(0) == 2);
    CHECK(net.edge_count(1) == 1);
    // first-appearance interning
    CHECK(net.entity_label(0) == "a");
    CHECK(net.entity_label(1) == "b");
    CHECK(net.entity_label(2) == "c");
    CHECK(net.layer_label(0) == "L1");
}

TEST_CASE("node section without edges yields zero degrees") {
    std::istringstream in("*nodes\nL1 a\nL1 b\nL2 a\n");
    const auto net = parse_network(in);
    CHECK(net.total_edge_count() == 0);
    CHECK(net.degree(0, 0) == 0);
    CHECK(net.degree(1, 0) == 0);
    CHECK(net.nodes(0).size() == 2);
}

TEST_CASE("self-loop is rejected with its line number") {
    std::istringstream in("L1 a b\nL1 a a\n");
    try {
        parse_network(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("self-loop") != std::string::npos);
    }
}

TEST_CASE("duplicate edge is rejected with both positions") {
    std::istringstream in("L1 a b\nL1 b a\n");
    try {
        parse_network(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("layer-order file declares the layer set") {
    std::istringstream in("LB x y\n");
    CHECK_THROWS_AS(parse_network(in, {"LA"}), ParseError);
    std::istringstream in2("LB x y\nLA x z\n");
    const auto net = parse_network(in2, {"LA", "LB"});
    CHECK(net.layer_label(0) == "LA");
    CHECK(net.layer_label(1) == "LB");
    std::istringstream in3("LA x y\n");
    const auto net3 = parse_network(in3, {"LA", "LB"});
    CHECK(net3.layer_count() == 2);
    CHECK(net3.nodes(1).empty());  // declared but empty layer is legal
}

TEST_CASE("degree counts incident edges, absent node gives 0") {
    // star K_{1,4} on one layer, entity 5 absent
    const auto net = testing::make_net(
        6, 2, {{0, 0, 1}, {0, 0, 2}, {0, 0, 3}, {0, 0, 4}}, {{1, 5}});
    CHECK(net.degree(0, 0) == 4);
    CHECK(net.degree(1, 0) == 1);
    CHECK(net.degree(5, 0) == 0);  // not on layer 0
    CHECK(net.degree(5, 1) == 0);  // isolated
}

TEST_CASE("valid_pairings per scheme") {
    const auto net =
        testing::make_net(2, 5, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {3, 0, 1}, {4, 0, 1}});
    CHECK(valid_pairings(net, OrderingScheme(PairingKind::Succeeding), 0) ==
          std::vector<LayerId>{1, 2, 3, 4});
    CHECK(valid_pairings(net, OrderingScheme(PairingKind::Adjacent), 4).empty());
    CHECK(valid_pairings(net, OrderingScheme(PairingKind::Adjacent), 2) ==
          std::vector<LayerId>{3});
    const auto net3 = testing::make_net(2, 3, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}});
    CHECK(valid_pairings(net3, OrderingScheme(PairingKind::Unordered), 1) ==
          std::vector<LayerId>{0, 2});
}

TEST_CASE("pairing counts match the scheme formulas") {
    for (std::uint32_t ell : {1u, 2u, 3u, 5u, 7u}) {
        std::vector<std::tuple<LayerId, EntityId, EntityId>> edges;
        for (LayerId l = 0; l < ell; ++l) edges.push_back({l, 0, 1});
        const auto net = testing::make_net(2, ell, edges);
        CHECK(ResolvedOrdering(net, OrderingScheme(PairingKind::Unordered)).pairing_total() ==
              ell * (ell - 1));
        CHECK(ResolvedOrdering(net, OrderingScheme(PairingKind::Adjacent)).pairing_total() ==
              ell - 1);
        CHECK(ResolvedOrdering(net, OrderingScheme(PairingKind::Succeeding)).pairing_total() ==
              (ell * ell - ell) / 2);
    }
}

TEST_CASE("explicit permutation and descending direction") {
    const auto net = testing::make_net(2, 3, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}});
    OrderingScheme scheme(PairingKind::Adjacent, {2, 0, 1});
    CHECK(valid_pairings(net, scheme, 2) == std::vector<LayerId>{0});
    CHECK(valid_pairings(net, scheme, 1).empty());
    OrderingScheme desc(PairingKind::Adjacent, {}, true);  // order 2,1,0
    CHECK(valid_pairings(net, desc, 2) == std::vector<LayerId>{1});
    CHECK(valid_pairings(net, desc, 0).empty());
}

TEST_CASE("total_degree on the canonical identity and the beta=0 case") {
    for (std::uint32_t n : {4u, 8u}) {
        for (std::uint32_t ell : {1u, 2u, 3u}) {
            std::vector<std::tuple<LayerId, EntityId, EntityId>> edges;
            for (LayerId l = 0; l < ell; ++l)
                for (EntityId u = 0; u < n / 2; ++u)
                    for (EntityId v = n / 2; v < n; ++v) edges.push_back({l, u, v});
            const auto net = testing::make_net(n, ell, edges);
            const std::uint64_t intra = static_cast<std::uint64_t>(n) * n * ell / 2;
            CHECK(total_degree(net, OrderingScheme(PairingKind::Unordered), 0) == intra);
            CHECK(total_degree(net, OrderingScheme(PairingKind::Unordered), 1) ==
                  intra + static_cast<std::uint64_t>(n) * ell * (ell - 1));
            CHECK(total_degree(net, OrderingScheme(PairingKind::Succeeding), 1) ==
                  intra + static_cast<std::uint64_t>(n) * (ell * ell - ell) / 2);
            if (ell == 1)
                CHECK(total_degree(net, OrderingScheme(PairingKind::Adjacent), 1) ==
                      2 * net.edge_count(0));
        }
    }
}

TEST_CASE("handshake and coupling monotonicity on random instances") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto [net, cs] = testing::random_instance(seed);
        for (LayerId l = 0; l < net.layer_count(); ++l) {
            std::uint64_t sum = 0;
            for (EntityId u : net.nodes(l)) sum += net.degree(u, l);
            CHECK(sum == 2 * net.edge_count(l));
        }
        const auto d0 = total_degree(net, OrderingScheme(PairingKind::Unordered), 0);
        const auto d1 = total_degree(net, OrderingScheme(PairingKind::Unordered), 1);
        CHECK(d1 >= d0);
        bool any_shared = false;
        for (LayerId a = 0; a < net.layer_count() && !any_shared; ++a)
            for (LayerId b = a + 1; b < net.layer_count(); ++b)
                if (net.shared_node_count(a, b) > 0) {
                    any_shared = true;
                    break;
                }
        CHECK((d1 > d0) == any_shared);
    }
}

TEST_CASE("save/load round trip preserves ids, edges and order") {
    std::istringstream in(
        "# comment line\n"
        "L2 b a\n"
        "L1 c a\n"
        "*nodes\n"
        "L1 d\n"
        "*edges\n"
        "L3 d c\n");
    const auto net = parse_network(in);
    std::ostringstream saved;
    save_network(net, saved);
    std::istringstream reread(saved.str());
    const auto net2 = parse_network(reread);

    REQUIRE(net2.entity_count() == net.entity_count());
    REQUIRE(net2.layer_count() == net.layer_count());
    for (EntityId u = 0; u < net.entity_count(); ++u)
        CHECK(net2.entity_label(u) == net.entity_label(u));
    for (LayerId l = 0; l < net.layer_count(); ++l) {
        CHECK(net2.layer_label(l) == net.layer_label(l));
        CHECK(std::vector<EntityId>(net2.nodes(l).begin(), net2.nodes(l).end()) ==
              std::vector<EntityId>(net.nodes(l).begin(), net.nodes(l).end()));
        CHECK(std::vector<Edge>(net2.edges(l).begin(), net2.edges(l).end()) ==
              std::vector<Edge>(net.edges(l).begin(), net.edges(l).end()));
    }
    // bit-stable writer
    std::ostringstream saved2;
    save_network(net2, saved2);
    CHECK(saved.str() == saved2.str());
}

namespace {

std::vector<std::pair<std::string, std::string>> edge_labels(const MultilayerNetwork& net,
                                                             LayerId l) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Edge& e : net.edges(l)) {
        std::string a = net.entity_label(e.u), b = net.entity_label(e.v);
        if (b < a) std::swap(a, b);
        out.emplace_back(std::move(a), std::move(b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> node_labels(const MultilayerNetwork& net, LayerId l) {
    std::vector<std::string> out;
    for (EntityId u : net.nodes(l)) out.push_back(net.entity_label(u));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("round trip on random instances") {
    for (std::uint64_t seed = 50; seed < 70; ++seed) {
        const auto [net, cs] = testing::random_instance(seed);
        std::ostringstream saved;
        save_network(net, saved);
        std::istringstream reread(saved.str());
        const auto net2 = parse_network(reread);
        REQUIRE(net2.entity_count() == net.entity_count());
        REQUIRE(net2.layer_count() == net.layer_count());
        for (LayerId l = 0; l < net.layer_count(); ++l) {
            CHECK(net2.layer_label(l) == net.layer_label(l));
            CHECK(edge_labels(net2, l) == edge_labels(net, l));
            CHECK(node_labels(net2, l) == node_labels(net, l));
        }
        // a reloaded network has first-appearance ids; from there the writer
        // is an exact fixed point
        std::ostringstream saved2;
        save_network(net2, saved2);
        std::istringstream reread2(saved2.str());
        const auto net3 = parse_network(reread2);
        for (EntityId u = 0; u < net2.entity_count(); ++u)
            CHECK(net3.entity_label(u) == net2.entity_label(u));
        for (LayerId l = 0; l < net2.layer_count(); ++l)
            CHECK(std::vector<Edge>(net3.edges(l).begin(), net3.edges(l).end()) ==
                  std::vector<Edge>(net2.edges(l).begin(), net2.edges(l).end()));
        std::ostringstream saved3;
        save_network(net3, saved3);
        CHECK(saved2.str() == saved3.str());
    }
}
