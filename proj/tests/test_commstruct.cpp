#include <doctest.h>

#include <sstream>

#include "mlmod/commstruct.hpp"
#include "support.hpp"

using namespace mlmod;

namespace {

MultilayerNetwork two_layer_net() {
    // L1: a-b, b-c ; L2: a-c
    std::istringstream in("L1 a b\nL1 b c\nL2 a c\n");
    return parse_network(in);
}

} // namespace

TEST_CASE("per-entity loader covers every occurrence with one community") {
    const auto net = two_layer_net();
    std::istringstream comm("a one\nb one\nc one\n");
    const auto cs = parse_communities(comm, net, CommunityFileMode::PerEntity);
    CHECK(cs.community_count() == 1);
    for (LayerId l = 0; l < net.layer_count(); ++l)
        for (EntityId u : net.nodes(l)) CHECK(cs.community_of(u, l) == 0);
}

TEST_CASE("per-node-layer loader can split an entity across layers") {
    const auto net = two_layer_net();
    std::istringstream comm(
        "a L1 left\nb L1 left\nc L1 left\n"
        "a L2 right\nc L2 right\n");
    const auto cs = parse_communities(comm, net, CommunityFileMode::PerNodeLayer);
    CHECK(cs.community_count() == 2);
    CHECK(cs.community_of(0, 0) != cs.community_of(0, 1));
    CHECK(cs.projection(0, 1).empty());
    CHECK(cs.projection(1, 0).empty());
    // entity a belongs to both communities at entity level
    auto of_a = cs.communities_of_entity(0);
    CHECK(of_a.size() == 2);
}

TEST_CASE("missing assignment names the pair") {
    const auto net = two_layer_net();
    std::istringstream comm("a L1 x\nb L1 x\nc L1 x\na L2 x\n");  // c missing on L2
    try {
        parse_communities(comm, net, CommunityFileMode::PerNodeLayer);
        FAIL("expected error");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("'c'") != std::string::npos);
        CHECK(what.find("'L2'") != std::string::npos);
    }
}

TEST_CASE("unknown references and conflicts are rejected") {
    const auto net = two_layer_net();
    {
        std::istringstream comm("z L1 x\n");
        CHECK_THROWS_AS(parse_communities(comm, net, CommunityFileMode::PerNodeLayer), ParseError);
    }
    {
        std::istringstream comm("a L9 x\n");
        CHECK_THROWS_AS(parse_communities(comm, net, CommunityFileMode::PerNodeLayer), ParseError);
    }
    {
        std::istringstream comm("a x\nb x\nc x\na y\n");
        CHECK_THROWS_AS(parse_communities(comm, net, CommunityFileMode::PerEntity), ParseError);
    }
    {
        // assignment for an unoccupied pair
        std::istringstream comm("b L2 x\n");
        CHECK_THROWS_AS(parse_communities(comm, net, CommunityFileMode::PerNodeLayer), Error);
    }
}

TEST_CASE("projection matches the assignment and may be empty") {
    const auto net = two_layer_net();
    std::istringstream comm("a 0\nb 0\nc 1\n");
    const auto cs = parse_communities(comm, net, CommunityFileMode::PerEntity);
    const auto proj = projection(cs, net, 0, 0);
    CHECK(proj.members == std::vector<EntityId>{0, 1});
    CHECK(projection(cs, net, 1, 0).members == std::vector<EntityId>{2});
    // community 1 = {c}; layer 2 nodes = {a, c}
    CHECK(projection(cs, net, 1, 1).members == std::vector<EntityId>{2});
}

TEST_CASE("community_layer_degrees on a clique and an empty projection") {
    // K4 on layer 0 inside one community, plus a second community elsewhere
    const auto net = testing::make_net(
        6, 2, {{0, 0, 1}, {0, 0, 2}, {0, 0, 3}, {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 4, 5}});
    const auto cs = testing::entity_structure(net, {0, 0, 0, 0, 1, 1});
    const auto [d, dint] = community_layer_degrees(cs, net, 0, 0);
    CHECK(d == 12);
    CHECK(dint == 12);
    const auto [d2, dint2] = community_layer_degrees(cs, net, 1, 0);  // empty projection
    CHECK(d2 == 0);
    CHECK(dint2 == 0);
}

TEST_CASE("canonical bipartite halves have d = n^2/4 and no internal degree") {
    const std::uint32_t n = 8;
    std::vector<std::tuple<LayerId, EntityId, EntityId>> edges;
    for (EntityId u = 0; u < n / 2; ++u)
        for (EntityId v = n / 2; v < n; ++v) edges.push_back({0, u, v});
    const auto net = testing::make_net(n, 1, edges);
    const auto cs = testing::entity_structure(net, {0, 0, 0, 0, 1, 1, 1, 1});
    const auto [d, dint] = community_layer_degrees(cs, net, 0, 0);
    CHECK(d == n * n / 4);
    CHECK(dint == 0);
}

TEST_CASE("degree sums and projection partition invariants on random instances") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const auto [net, cs] = testing::random_instance(seed);
        const auto table = compute_degree_table(cs, net);
        for (LayerId l = 0; l < net.layer_count(); ++l) {
            std::uint64_t d_sum = 0, dint_sum = 0;
            std::size_t member_sum = 0;
            for (CommunityId c = 0; c < cs.community_count(); ++c) {
                d_sum += table.d(c, l);
                dint_sum += table.d_int(c, l);
                member_sum += cs.projection(c, l).size();
                const auto [d, dint] = community_layer_degrees(cs, net, c, l);
                CHECK(d == table.d(c, l));
                CHECK(dint == table.d_int(c, l));
            }
            CHECK(d_sum == 2 * net.edge_count(l));
            CHECK(dint_sum <= d_sum);
            CHECK(member_sum == net.nodes(l).size());
        }
    }
}

TEST_CASE("community writer round-trips the partition") {
    const auto [net, cs] = testing::random_instance(7);
    std::ostringstream saved;
    save_communities(cs, net, saved);
    std::istringstream reread(saved.str());
    const auto cs2 = parse_communities(reread, net, CommunityFileMode::PerNodeLayer);
    REQUIRE(cs2.community_count() == cs.community_count());
    // same partition classes: occurrences agree iff they agreed before
    for (LayerId l = 0; l < net.layer_count(); ++l)
        for (EntityId u : net.nodes(l))
            for (EntityId v : net.nodes(l)) {
                const bool before = cs.community_of(u, l) == cs.community_of(v, l);
                const bool after = cs2.community_of(u, l) == cs2.community_of(v, l);
                CHECK(before == after);
            }
}
