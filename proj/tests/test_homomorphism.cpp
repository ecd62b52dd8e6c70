#include "posigraph/homomorphism.hpp"
#include "posigraph/hypergraph.hpp"
#include "posigraph/oracles.hpp"
#include "posigraph/prng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace posigraph;

TEST_CASE("basic counts") {
    CHECK(count_homs(single_edge(2), cycle_graph(3)) == 6);
    CHECK(count_homs(grid(3), single_edge(3)) == 12);
    CHECK(count_homs(grid(3), empty_hypergraph(3, 5)) == 0);
    CHECK(count_homs(single_edge(3), single_edge(3)) == 6); // r!
    // edgeless pattern: n^v maps
    CHECK(count_homs(empty_hypergraph(2, 3), cycle_graph(4)) == 64);
}

TEST_CASE("enumeration is lexicographic in the image array") {
    const auto homs = enumerate_homs(grid(3), single_edge(3));
    REQUIRE(homs.size() == 12);
    for (std::size_t i = 1; i < homs.size(); ++i) CHECK(homs[i - 1].image < homs[i].image);
    for (const auto& m : homs) CHECK(is_homomorphism(grid(3), single_edge(3), m));
}

TEST_CASE("engine agrees with the naive oracle") {
    Prng rng(2024);
    int cases = 0;
    while (cases < 40) {
        const unsigned r = static_cast<unsigned>(rng.next_int(1, 3));
        const Vertex nh = static_cast<Vertex>(rng.next_int(r, 5));
        const Vertex ng = static_cast<Vertex>(rng.next_int(r, 6));
        auto random_edges = [&](Vertex n, int max_e) {
            std::vector<Edge> edges;
            for (int k = static_cast<int>(rng.next_int(0, max_e)); k > 0; --k) {
                std::set<Vertex> pick;
                while (pick.size() < r) pick.insert(static_cast<Vertex>(rng.next_below(n)));
                edges.emplace_back(pick.begin(), pick.end());
            }
            return edges;
        };
        const Hypergraph h(r, nh, random_edges(nh, 5));
        const Hypergraph g(r, ng, random_edges(ng, 8));
        double maps = 1;
        for (Vertex v = 0; v < nh; ++v) maps *= ng;
        if (maps > 1e6) continue;
        ++cases;
        const auto expect = oracle::naive_homomorphisms(h, g);
        const auto got = enumerate_homs(h, g);
        REQUIRE(got.size() == expect.size());
        CHECK(std::equal(got.begin(), got.end(), expect.begin()));
    }
}

TEST_CASE("weighted sums") {
    SECTION("all +1 weights equal the count") {
        const Hypergraph g = fano_plane();
        WeightedHypergraph t(g, std::vector<Rational>(7, Rational(1)));
        const HomSum s = weighted_hom_sum(grid(3), t);
        CHECK(s.value == Rational(s.hom_count));
        CHECK(s.hom_count == count_homs(grid(3), g));
    }
    SECTION("single 3-edge with weight -1") {
        WeightedHypergraph t(single_edge(3), {Rational(-1)});
        const HomSum s = weighted_hom_sum(single_edge(3), t);
        CHECK(s.value == -6);
        CHECK(s.hom_count == 6);
    }
    SECTION("parallel target copies add their weights") {
        const Hypergraph doubled(2, 2, {{0, 1}, {0, 1}});
        WeightedHypergraph t(doubled, {Rational(1, 3), Rational(1, 4)});
        const HomSum s = weighted_hom_sum(single_edge(2), t);
        // two ordered maps, each picking up 1/3 + 1/4
        CHECK(s.value == Rational(7, 6));
        CHECK(s.hom_count == 2);
    }
    SECTION("uniformity mismatch is rejected") {
        WeightedHypergraph t(single_edge(3), {Rational(1)});
        CHECK_THROWS_AS(weighted_hom_sum(single_edge(2), t), PreconditionError);
    }
}

TEST_CASE("endomorphisms and automorphisms") {
    const auto fano_endos = endomorphisms(fano_plane());
    const auto fano_auts = automorphisms(fano_plane());
    CHECK(fano_endos.size() == 168);
    CHECK(fano_auts.size() == 168);

    CHECK(endomorphisms(single_edge(4)).size() == 24);
    CHECK(endomorphisms(empty_hypergraph(2, 3)).size() == 27);

    CHECK(endomorphisms(grid(3)).size() == 144);
    CHECK(automorphisms(grid(3)).size() == 72);
}

TEST_CASE("odd edges") {
    const Hypergraph k4 = set_inclusion_rgraph(4, 3, 1);
    for (std::size_t k = 0; k < k4.n_edges(); ++k) CHECK(is_odd_edge(k4, k));
    for (std::size_t k = 0; k < grid(3).n_edges(); ++k) CHECK_FALSE(is_odd_edge(grid(3), k));
    CHECK(is_odd_edge(single_edge(3), 0));
    CHECK_THROWS_AS(is_odd_edge(single_edge(3), 1), PreconditionError);
}

TEST_CASE("odd edge negation witness") {
    // w(e) = -1 on an odd edge makes the sum exactly -|End(H)|
    const Hypergraph f = fano_plane();
    std::vector<Rational> w(7, Rational(1));
    w[3] = Rational(-1);
    const HomSum s = weighted_hom_sum(f, WeightedHypergraph(f, w));
    CHECK(s.value == -168);
}

TEST_CASE("image subgraph") {
    const Hypergraph h = grid(3);
    SECTION("identity map") {
        VertexMap id{9, 9, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
        const auto img = image_subgraph(h, h, id);
        CHECK(img.image.edge_multiset() == h.edge_multiset());
        CHECK(img.image.n_vertices() == h.n_vertices());
        CHECK(img.to_target == std::vector<Vertex>{0, 1, 2, 3, 4, 5, 6, 7, 8});
    }
    SECTION("collapse onto a single edge") {
        // a Latin-square map of the grid onto one 3-edge image
        const auto homs = enumerate_homs(h, single_edge(3));
        REQUIRE_FALSE(homs.empty());
        const auto img = image_subgraph(h, single_edge(3), homs.front());
        CHECK(img.image.n_edges() == 1);
        CHECK(img.image.n_vertices() == 3);
    }
    SECTION("injective images are isomorphic to the pattern") {
        const Hypergraph big = disjoint_union(grid(3), single_edge(3));
        bool seen = false;
        for_each_hom(h, big, [&](const VertexMap& m) {
            const auto img = image_subgraph(h, big, m);
            CHECK(isomorphic(img.image, h));
            seen = true;
            return false;
        }, /*injective=*/true);
        CHECK(seen);
    }
    SECTION("non-homomorphism rejected") {
        VertexMap bad{9, 3, std::vector<Vertex>(9, 0)};
        CHECK_THROWS_AS(image_subgraph(h, single_edge(3), bad), PreconditionError);
    }
}

TEST_CASE("isomorphism") {
    CHECK(isomorphic(box_product(single_edge(3), single_edge(3)), grid(3)));
    Hypergraph six_edges = single_edge(3);
    for (int i = 0; i < 5; ++i) six_edges = disjoint_union(six_edges, single_edge(3));
    CHECK_FALSE(isomorphic(grid(3), six_edges));

    // permuted labels
    Prng rng(5);
    const Hypergraph f = fano_plane();
    std::vector<Vertex> perm{0, 1, 2, 3, 4, 5, 6};
    rng.shuffle(perm);
    std::vector<Edge> edges;
    for (const auto& e : f.edges()) {
        Edge out;
        for (Vertex v : e) out.push_back(perm[v]);
        edges.push_back(out);
    }
    CHECK(isomorphic(f, Hypergraph(3, 7, edges)));
    CHECK_FALSE(isomorphic(f, grid(3)));
}

TEST_CASE("composition of homomorphisms") {
    const auto hg = enumerate_homs(grid(3), fano_plane());
    const auto gk = enumerate_homs(fano_plane(), fano_plane());
    REQUIRE_FALSE(hg.empty());
    Prng rng(9);
    for (int t = 0; t < 10; ++t) {
        const auto& pi = hg[rng.next_below(hg.size())];
        const auto& sigma = gk[rng.next_below(gk.size())];
        CHECK(is_homomorphism(grid(3), fano_plane(), compose(sigma, pi)));
    }
}

TEST_CASE("automorphism group structure") {
    const auto auts = automorphisms(grid(2)); // dihedral of order 8
    CHECK(auts.size() == 8);
    std::set<std::vector<Vertex>> members;
    for (const auto& a : auts) members.insert(a.image);
    CHECK(members.count({0, 1, 2, 3}) == 1);
    for (const auto& a : auts)
        for (const auto& b : auts) CHECK(members.count(compose(a, b).image) == 1);
    for (const auto& a : auts) {
        std::vector<Vertex> inv(4);
        for (Vertex v = 0; v < 4; ++v) inv[a.image[v]] = v;
        CHECK(members.count(inv) == 1);
    }
}

TEST_CASE("parallel reduction matches sequential") {
    const Hypergraph h = grid(3);
    const Hypergraph g = fano_plane();
    const Int sequential = count_homs(h, g);
    std::vector<Rational> w;
    for (std::size_t k = 0; k < g.n_edges(); ++k) w.emplace_back(k % 2 == 0 ? 1 : -2, 3);
    const WeightedHypergraph t(g, w);
    const Rational weighted = weighted_hom_sum(h, t).value;
    setenv("POSIGRAPH_THREADS", "4", 1);
    CHECK(count_homs(h, g) == sequential);
    CHECK(weighted_hom_sum(h, t).value == weighted);
    unsetenv("POSIGRAPH_THREADS");
}

TEST_CASE("1-uniform patterns") {
    // edges are single vertices; an edge vertex must land on an edge vertex
    const Hypergraph pattern(1, 2, {{0}});
    const Hypergraph target(1, 4, {{1}, {3}});
    CHECK(count_homs(pattern, target) == 8); // 2 choices for vertex 0, 4 for vertex 1
    const auto expect = oracle::naive_homomorphisms(pattern, target);
    CHECK(expect.size() == 8);
    CHECK(enumerate_homs(pattern, target) == expect);
}
