#include "posigraph/checks.hpp"
#include "posigraph/serialization.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace posigraph;
using io::Json;

TEST_CASE("hypergraph JSON round trip") {
    const std::string text = R"({"r":3,"n":3,"edges":[[0,1,2]]})";
    const auto parsed = io::parse_hypergraph(text);
    REQUIRE(std::holds_alternative<Hypergraph>(parsed));
    const auto& h = std::get<Hypergraph>(parsed);
    CHECK(h.r() == 3);
    CHECK(h.n_edges() == 1);
    const auto again = io::parse_hypergraph(io::serialize(h));
    CHECK(std::get<Hypergraph>(again) == h);
}

TEST_CASE("weights parse as exact rationals") {
    const std::string text = R"({"r":2,"n":2,"edges":[[0,1],[0,1]],"weights":["-1","1/2"]})";
    const auto parsed = io::parse_hypergraph(text);
    REQUIRE(std::holds_alternative<WeightedHypergraph>(parsed));
    const auto& wh = std::get<WeightedHypergraph>(parsed);
    CHECK(wh.weights[0] == -1);
    CHECK(wh.weights[1] == Rational(1, 2));
    // duplicate edge preserved with multiplicity 2
    CHECK(wh.base.edge_multiset().at({0, 1}) == 2);
}

TEST_CASE("parse errors carry positions") {
    using Catch::Matchers::ContainsSubstring;
    using Catch::Matchers::MessageMatches;
    CHECK_THROWS_MATCHES(io::parse_hypergraph("{"), ParseError, MessageMatches(ContainsSubstring("byte")));
    CHECK_THROWS_MATCHES(io::parse_hypergraph(R"({"r":3,"n":3,"edges":[[0,1,7]]})"), ParseError,
                         MessageMatches(ContainsSubstring("edges[0]")));
    CHECK_THROWS_MATCHES(io::parse_hypergraph(R"({"r":3,"n":3,"edges":[[0,1,2],[0,1]]})"), ParseError,
                         MessageMatches(ContainsSubstring("edges[1]")));
    CHECK_THROWS_MATCHES(io::parse_hypergraph(R"({"r":3,"n":4,"edges":[[0,1,2]],"weights":["x"]})"),
                         ParseError, MessageMatches(ContainsSubstring("weights[0]")));
    CHECK_THROWS_AS(io::parse_hypergraph(R"({"r":3,"n":4,"edges":[[0,1,2]],"weights":["1","2"]})"),
                    ParseError);
}

TEST_CASE("randomized round trips are the identity") {
    const CheckResult res = check_serialization_roundtrip(77, 40);
    INFO(res.detail);
    CHECK(res.passed);
}

TEST_CASE("rationals") {
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("3/9") == Rational(1, 3));
    CHECK(parse_rational("−1/2") == Rational(-1, 2));
    CHECK(format_rational(Rational(-4, 6)) == "-2/3");
    CHECK(format_rational(Rational(5)) == "5");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("a/b"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("step function JSON") {
    SymStepFunction h(2, 2);
    h.set({0, 1}, Rational(-1, 3));
    h.set({1, 1}, Rational(2));
    h.set_measures({Rational(1, 4), Rational(3, 4)});
    const Json j = io::to_json(h);
    const SymStepFunction back = io::sym_step_from_json(j);
    CHECK(back == h);
    CHECK(back.measures() == h.measures());

    const BipStepFunction f =
        BipStepFunction::exact(2, 3, {Rational(1), Rational(2), Rational(3), Rational(4), Rational(5), Rational(6)});
    CHECK(io::bip_step_from_json(io::to_json(f)) == f);

    const BipStepFunction real = BipStepFunction::real(
        1, 2, {RationalInterval(Rational(0)), RationalInterval(Rational(1, 3), Rational(1, 2))});
    CHECK(io::bip_step_from_json(io::to_json(real)) == real);
}

TEST_CASE("decomposition JSON") {
    SymStepFunction a(3, 2);
    a.set({0, 0, 1}, Rational(5, 2));
    const Decomposition d = decompose(a, 9);
    const Decomposition back = io::decomposition_from_json(io::to_json(d));
    CHECK(back.n == d.n);
    CHECK(back.lambda == d.lambda);
    CHECK(back.B == d.B);
    CHECK(reconstruct(back) == a);
}

TEST_CASE("certificate JSON round trip") {
    SECTION("odd edge") {
        const auto cert = odd_edge_certificate(fano_plane());
        const Json j = io::to_json(*cert);
        const NegativityCertificate back = io::certificate_from_json(j);
        CHECK(back.sum == cert->sum);
        CHECK(back.pattern == cert->pattern);
        CHECK(back.odd_edge_index == cert->odd_edge_index);
        CHECK(verify_negativity_certificate(back));
        // serialization is stable
        CHECK(io::to_json(back).dump() == j.dump());
    }
    SECTION("pipeline, with target reconstruction") {
        const NegativityCertificate cert = grid_pipeline(3, 15, 1);
        Json j = io::to_json(cert);
        const NegativityCertificate back = io::certificate_from_json(j);
        CHECK(back.target.base == cert.target.base);
        CHECK(back.target.weights == cert.target.weights);
        CHECK(verify_negativity_certificate(back));
        // dropping the embedded target still reconstructs through the base
        j["target"] = nullptr;
        const NegativityCertificate rebuilt = io::certificate_from_json(j);
        CHECK(rebuilt.target.base == cert.target.base);
        CHECK(verify_negativity_certificate(rebuilt));
    }
    SECTION("tampered sums are rejected") {
        const auto cert = odd_edge_certificate(fano_plane());
        Json j = io::to_json(*cert);
        j["sum"] = "-167";
        CHECK_FALSE(verify_negativity_certificate(io::certificate_from_json(j)));
    }
}

TEST_CASE("involution JSON") {
    const auto s = find_stable_involution(cycle_graph(6));
    REQUIRE(s.has_value());
    const StableInvolution back = io::involution_from_json(io::to_json(*s));
    CHECK(back.fixed == s->fixed);
    CHECK(back.pairs == s->pairs);
}

TEST_CASE("bipartite JSON keeps the bipartition") {
    const BipartiteGraph g = subdivision_krr(3);
    const Json j = io::to_json(g);
    CHECK(j.at("n_left").get<Vertex>() == 9);
    const BipartiteGraph back = io::bipartite_from_json(j);
    CHECK(back.n_left() == g.n_left());
    CHECK(back.n_right() == g.n_right());
    CHECK(back.edges() == g.edges());
}
