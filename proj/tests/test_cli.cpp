#include "posigraph/serialization.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef POSIGRAPH_CLI_PATH
#error "POSIGRAPH_CLI_PATH must point at the built binary"
#endif

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

std::string temp_path(const std::string& tag) {
    return std::string("/tmp/posigraph_test_") + tag + "_" + std::to_string(getpid());
}

CliResult run_cli(const std::string& args, const std::string& stdin_text = "") {
    const std::string in = temp_path("in"), out = temp_path("out");
    {
        std::ofstream f(in);
        f << stdin_text;
    }
    const std::string cmd =
        std::string(POSIGRAPH_CLI_PATH) + " " + args + " < " + in + " > " + out + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(out);
    std::ostringstream ss;
    ss << f.rdbuf();
    res.out = ss.str();
    std::remove(in.c_str());
    std::remove(out.c_str());
    return res;
}

} // namespace

using namespace posigraph;
using io::Json;

TEST_CASE("construct and homcount compose") {
    const CliResult g = run_cli("construct grid 3");
    REQUIRE(g.exit_code == 0);
    const Json j = Json::parse(g.out);
    CHECK(j.at("r") == 3);
    CHECK(j.at("n") == 9);
    CHECK(j.at("edges").size() == 6);

    const CliResult c = run_cli("homcount --target single-edge-3", g.out);
    REQUIRE(c.exit_code == 0);
    CHECK(Json::parse(c.out).at("hom_count") == "12");
}

TEST_CASE("construct named objects") {
    CHECK(Json::parse(run_cli("construct fano").out).at("edges").size() == 7);
    CHECK(Json::parse(run_cli("construct set-inclusion 5 4 2").out).at("r") == 6);
    const Json sub = Json::parse(run_cli("construct subdivision-krr 3").out);
    CHECK(sub.at("n") == 15);
    CHECK(sub.at("n_left") == 9);
    const CliResult levi_out = run_cli("construct levi --input -", run_cli("construct grid 3").out);
    CHECK(Json::parse(levi_out.out) == sub);
    CHECK(run_cli("construct nonsense").exit_code == 2);
}

TEST_CASE("identical command and seed give byte-identical stdout") {
    const std::string cmd = "grid-pipeline --r 3 --n 12 --seed 4";
    const CliResult a = run_cli(cmd), b = run_cli(cmd);
    CHECK(a.exit_code == 1); // not-positive verdict
    CHECK(a.out == b.out);
    const CliResult c = run_cli("check --budget 4 --seed 9"), d = run_cli("check --budget 4 --seed 9");
    CHECK(c.exit_code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("involution command") {
    const std::string c4 = io::serialize(cycle_graph(4));
    const CliResult r = run_cli("involution --input -", c4);
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("involution").at("fixed") == Json::array({0, 2}));
    CHECK(j.at("involution").at("pairs") == Json::array({Json::array({1, 3})}));

    const CliResult none = run_cli("involution --input -", io::serialize(single_edge(2)));
    CHECK(Json::parse(none.out).at("involution").is_null());
}

TEST_CASE("certify exit codes and reports") {
    const CliResult star = run_cli("certify --input -", io::serialize(star_graph(3)));
    CHECK(star.exit_code == 1);
    CHECK(Json::parse(star.out).at("classification") == "non-positive-certified");

    const CliResult c4 = run_cli("certify --input -", io::serialize(cycle_graph(4)));
    CHECK(c4.exit_code == 0);
    CHECK(Json::parse(c4.out).at("classification") == "positive-certified");

    const CliResult fano = run_cli("certify --input -", io::serialize(fano_plane()));
    CHECK(fano.exit_code == 1);
    CHECK(Json::parse(fano.out).at("certificate").at("sum") == "-168");
}

TEST_CASE("pipeline, verify, tamper") {
    const CliResult pipe = run_cli("grid-pipeline --r 3 --n 15 --seed 1");
    REQUIRE(pipe.exit_code == 1);
    Json cert = Json::parse(pipe.out);
    CHECK(cert.at("kind") == "negativity-certificate");

    const CliResult ok = run_cli("verify --input -", cert.dump());
    CHECK(ok.exit_code == 0);
    CHECK(Json::parse(ok.out).at("valid") == true);

    Json tampered = cert;
    const Rational fake = parse_rational(cert.at("sum").get<std::string>()) + 6;
    tampered["sum"] = format_rational(fake);
    const CliResult bad = run_cli("verify --input -", tampered.dump());
    CHECK(bad.exit_code == 2);
    CHECK(Json::parse(bad.out).at("valid") == false);
}

TEST_CASE("density command") {
    SymStepFunction h(3, 1);
    h.set({0, 0, 0}, Rational(-1));
    const std::string step = io::to_json(h).dump();
    const std::string step_file = temp_path("step");
    {
        std::ofstream f(step_file);
        f << step;
    }
    const CliResult r =
        run_cli("density --input - --step " + step_file, io::serialize(single_edge(3)));
    CHECK(r.exit_code == 0);
    CHECK(Json::parse(r.out).at("density") == "-1");
    std::remove(step_file.c_str());
}

TEST_CASE("decompose and transfer round") {
    SymStepFunction h(3, 1);
    h.set({0, 0, 0}, Rational(-1));
    const std::string step_file = temp_path("step2");
    {
        std::ofstream f(step_file);
        f << io::to_json(h).dump();
    }
    const CliResult d = run_cli("decompose --input " + step_file + " --seed 3");
    REQUIRE(d.exit_code == 0);
    const Decomposition dec = io::decomposition_from_json(Json::parse(d.out));
    CHECK(reconstruct(dec) == h);

    const CliResult t = run_cli("transfer --pattern single-edge-3 --step " + step_file);
    REQUIRE(t.exit_code == 1);
    const Json rec = Json::parse(t.out);
    CHECK(rec.at("kind") == "transfer");
    CHECK(parse_rational(rec.at("interval").at(1).get<std::string>()) < 0);

    const CliResult v = run_cli("verify --input -", rec.dump());
    CHECK(v.exit_code == 0);
    std::remove(step_file.c_str());
}

TEST_CASE("transfer from a pipeline certificate") {
    const CliResult pipe = run_cli("grid-pipeline --r 3 --n 15 --seed 1");
    REQUIRE(pipe.exit_code == 1);
    const std::string cert_file = temp_path("cert");
    {
        std::ofstream f(cert_file);
        f << pipe.out;
    }
    const CliResult t = run_cli("transfer --certificate " + cert_file);
    REQUIRE(t.exit_code == 1);
    const Json rec = Json::parse(t.out);
    CHECK(parse_rational(rec.at("interval").at(1).get<std::string>()) < 0);
    CHECK(rec.at("f").is_null()); // witness too large to embed
    const CliResult v = run_cli("verify --input -", rec.dump());
    CHECK(v.exit_code == 0);
    std::remove(cert_file.c_str());
}

TEST_CASE("invalid inputs exit 2") {
    CHECK(run_cli("homcount --target single-edge-3", "{").exit_code == 2);
    CHECK(run_cli("homcount --target no-such-thing", io::serialize(grid(3))).exit_code == 2);
    CHECK(run_cli("involution --input /does/not/exist").exit_code == 2);
}
