// test_io.cpp — Angle/state parsing, CSV quoting, digests, manifests

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "collspin/io.hpp"

using namespace collspin;

TEST_CASE("angle parsing with symbolic pi") {
    CHECK(parse_angle("0.5") == doctest::Approx(0.5));
    CHECK(parse_angle("pi") == doctest::Approx(kPi));
    CHECK(parse_angle("pi/4") == kPi / 4.0);  // exact, not approx
    CHECK(parse_angle("3*pi/8") == doctest::Approx(3.0 * kPi / 8.0));
    CHECK(parse_angle("0.25pi") == doctest::Approx(0.25 * kPi));
    CHECK(parse_angle(" pi / 2 ") == doctest::Approx(kPi / 2.0));
    CHECK(parse_angle("-pi/4") == doctest::Approx(-kPi / 4.0));
    CHECK_THROWS_AS(parse_angle(""), ValidationError);
    CHECK_THROWS_AS(parse_angle("pie"), ValidationError);
    CHECK_THROWS_AS(parse_angle("pi/0"), ValidationError);
    CHECK_THROWS_AS(parse_angle("2x"), ValidationError);
}

TEST_CASE("pi/4 input lands exactly on the symmetry-line matcher") {
    ModelParams p;
    p.J = 1.0;
    p.theta = parse_angle("pi/4");
    CHECK(p.on_symmetry_line());
    p.theta = 0.7854;
    CHECK_FALSE(p.on_symmetry_line());
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0:1:0.25");
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g[4] == doctest::Approx(1.0));
    const auto list = parse_grid("0.1,0.4,pi/4");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == kPi / 4.0);
    CHECK(parse_grid("0.7").size() == 1);
    CHECK_THROWS_AS(parse_grid("1:0:0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1:-0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1"), ValidationError);
}

TEST_CASE("initial-state mini-language") {
    ModelParams p;
    p.J = 5.0;
    p.Omega = 0.0;
    p.Gamma = 1.0;
    p.theta = kPi / 4.0;
    const SpinOperators ops = build_spin_operators(p);

    const auto equalSpec = parse_initial_state("sx:0,3,5");
    const Eigen::VectorXcd amps = initial_sx_amplitudes(equalSpec, ops);
    CHECK(std::abs(amps(ops.sx_index(0.0)) - 1.0 / std::sqrt(3.0)) < 1e-14);
    CHECK(std::abs(amps(ops.sx_index(3.0)) - 1.0 / std::sqrt(3.0)) < 1e-14);
    CHECK(std::abs(amps(ops.sx_index(5.0)) - 1.0 / std::sqrt(3.0)) < 1e-14);
    CHECK(std::abs(amps.norm() - 1.0) < 1e-14);

    const auto weighted = parse_initial_state("sx:0*1,2*3");
    const Eigen::VectorXcd w = initial_sx_amplitudes(weighted, ops);
    CHECK(std::abs(w(ops.sx_index(2.0)) / w(ops.sx_index(0.0)) - 3.0) < 1e-12);

    const auto sz = parse_initial_state("sz:-J");
    const Eigen::VectorXcd ground = initial_pure_state(sz, ops);
    CHECK(std::abs(ground(ops.dim - 1) - 1.0) < 1e-15);

    const auto diag = parse_initial_state("uniform-diag");
    const Eigen::VectorXd pops = initial_diag_populations(diag, p);
    CHECK(pops.size() == 11);
    CHECK(std::abs(pops.sum() - 1.0) < 1e-14);
    CHECK(std::abs(pops(0) - 1.0 / 11.0) < 1e-14);

    CHECK_THROWS_AS(parse_initial_state("bogus"), ValidationError);
    CHECK_THROWS_AS(parse_initial_state("sx:"), ValidationError);
    CHECK_THROWS_AS(initial_sx_amplitudes(parse_initial_state("sx:7"), ops), ValidationError);
    CHECK_THROWS_AS(initial_sx_amplitudes(parse_initial_state("sx:0.5"), ops), ValidationError);
    CHECK_THROWS_AS(initial_pure_state(diag, ops), ValidationError);
}

TEST_CASE("FNV-1a 64 known vectors") {
    CHECK(fnv1a64(std::string("")) == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64(std::string("a")) == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64(std::string("foobar")) == 0x85944171f73967e8ULL);
    CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("CSV quoting is RFC-4180 style") {
    CHECK(CsvWriter::escape("plain") == "plain");
    CHECK(CsvWriter::escape("with,comma") == "\"with,comma\"");
    CHECK(CsvWriter::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(CsvWriter::escape("line\nbreak") == "\"line\nbreak\"");

    CsvWriter csv;
    csv.comment("header block");
    csv.header({"a", "b"});
    csv.row({"1", "x,y"});
    CHECK(csv.content() == "# header block\na,b\n1,\"x,y\"\n");
}

TEST_CASE("g17 round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678901234567, kPi / 4.0}) {
        CHECK(std::stod(g17(v)) == v);
    }
}

TEST_CASE("manifest digest ignores timestamps, tracks parameters") {
    RunManifest a;
    a.command = "spectrum";
    a.version = kToolVersion;
    a.parameters = {{"J", "2"}, {"omega", "1"}};
    a.seed = 5;
    a.startedAt = "2026-01-01T00:00:00Z";
    RunManifest b = a;
    b.startedAt = "2026-01-02T09:30:00Z";
    CHECK(a.paramsDigest() == b.paramsDigest());
    b.parameters["omega"] = "2";
    CHECK(a.paramsDigest() != b.paramsDigest());

    const std::string json = a.to_json();
    CHECK(json.find("\"command\": \"spectrum\"") != std::string::npos);
    CHECK(json.find("parameters_digest") != std::string::npos);
}
