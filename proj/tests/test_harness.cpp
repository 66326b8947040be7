#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nnls/harness.hpp"

using namespace nnls;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("nnls_harness_" + name);
    std::filesystem::remove_all(p);
    return p;
}

const char* kPureStep = R"(
[profile]
kind = PureStep
A = 2
[wedge]
alpha = 0.5, 0.75
s = 1
t = 1e3, 1e4, 1e5
side = both
)";

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse(kPureStep);
    CHECK(c.profile.kind == ProfileKind::PureStep);
    CHECK(c.profile.A == 2.0);
    CHECK(c.wedge.alpha == std::vector<double>{0.5, 0.75});
    CHECK(c.wedge.t.size() == 3);
    CHECK(c.wedge.sides.size() == 2);
    CHECK(c.wedge.convention == Convention::Consistent);
    CHECK(c.pde.skip);

    CHECK_THROWS_AS(parse("[profile]\nkind = Triangle\n"), ConfigError);
    CHECK_THROWS_AS(parse("[profile]\nA = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[profile]\nA = 1x\n"), ConfigError);
    CHECK_THROWS_AS(parse("[wedge]\nt = 100, 50\n"), ConfigError);
    CHECK_THROWS_AS(parse("[wedge]\nalpha = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("[wegde]\nalpha = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("[pde]\nmode = maybe\n"), ConfigError);

    auto t = c.tol;
    t.set("gap", 0.01);
    CHECK(t.gap == 0.01);
    CHECK_THROWS_AS(t.set("nope", 1.0), ConfigError);
}

TEST_CASE("pde block and domain size") {
    auto c = parse("[profile]\nkind = SmoothedStep\n[wedge]\nalpha = 0.8\ns = 1\nt = 50, 100, 200\n[pde]\nmode = run\n");
    CHECK(c.max_wedge_x() == doctest::Approx(262.5679).epsilon(1e-6));
    const auto ep = c.evolve_params();
    CHECK(ep.L == 530.0);
    CHECK(ep.N == 10601);
    CHECK(ep.T == 200.0);
    CHECK_NOTHROW(c.validate(true));
    c.pde.L = 200.0;
    CHECK_THROWS_AS(c.validate(true), ConfigError);

    auto sol = parse("[profile]\nkind = SolitonSnapshot\nphi = 3.14159\nR = 40\n[wedge]\nalpha = 0.5\ns = 4\nt = 2, 4\n"
                     "[pde]\nmode = run\nL = 40\n");
    CHECK_THROWS_AS(sol.validate(true), ConfigError);
}

TEST_CASE("prediction rows") {
    const auto c = parse(kPureStep);
    const PureStepSpectrum ps(2.0);
    const auto rows = predict_rows(ps, c.wedge);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].wp.alpha == 0.5);
    CHECK(rows[0].wp.side == Side::PlusX);
    CHECK(branch_id(rows[0].pred.branch) == "I+");
    CHECK(branch_id(rows[3].pred.branch) == "I-");
    // x < 0 at alpha = 0.5 in Case I only has a bound
    CHECK(rows[3].pred.bound_only);
    CHECK(rows[3].pred.value() == cplx(0.0));
    for (const auto& r : rows)
        if (r.wp.side == Side::PlusX) CHECK(r.ledger_residual < 1e-8);

    for (const auto& f : fit_phase_ledger(rows)) {
        CHECK(f.psi != 0.0);
        CHECK(std::abs(f.psi_fit / f.psi - 1.0) < 0.05);
        CHECK(f.residual < 1e-8);
    }

    std::ostringstream a, b;
    write_predictions_csv(a, rows);
    write_predictions_csv(b, predict_rows(ps, c.wedge));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# nnls-csv v1 predictions\nbranch,", 0) == 0);
}

TEST_CASE("reflectionless rows equal A") {
    auto c = parse(kPureStep);
    c.wedge.sides = {Side::PlusX};
    const SolitonSpectrum sol(1.5);
    for (const auto& r : predict_rows(sol, c.wedge)) {
        CHECK(r.pred.value() == cplx(1.5));
        CHECK(std::abs(r.pred.value() - r.gen.value()) < 1e-12);
    }
}

TEST_CASE("gap fits") {
    auto c = parse(kPureStep);
    c.wedge.sides = {Side::PlusX};
    c.wedge.alpha = {0.75};
    auto rows = predict_rows(PureStepSpectrum(2.0), c.wedge);
    // synthetic PDE values whose modulus approaches Q like t^-1/2
    for (auto& r : rows) {
        r.pde = r.pred.rough * (1.0 + 1.0 / std::sqrt(r.wp.t));
        r.rough_gap = std::abs(std::abs(*r.pde) - std::abs(r.pred.rough));
        r.abs_gap = std::abs(*r.pde - r.pred.value());
    }
    const auto fits = fit_gap_exponents(rows);
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].rough_exponent == doctest::Approx(-0.5));
    CHECK(fits[0].rough_decreasing);
    CHECK(fits[0].points == 3);
}

TEST_CASE("subcommands write their outputs") {
    const auto dir = scratch("pure");
    std::ostringstream log;
    auto c = parse(kPureStep);
    CHECK(cmd_scatter(c, dir.string(), log) == 0);
    CHECK(std::filesystem::exists(dir / "spectral.json"));
    CHECK(cmd_predict(c, dir.string(), log) == 0);
    const auto csv = read_file(dir / "predictions.csv");
    CHECK(csv.find("\nI-,") != std::string::npos);
    CHECK(cmd_match(c, dir.string(), log) == 0);
    const auto match = read_file(dir / "match.csv");
    CHECK(match.find("phi0_at_one,1,,4,4,0,1") != std::string::npos);
    CHECK(match.find("minus_x_exponent") != std::string::npos);

    // an empty wedge list only produces the summary
    const auto empty = scratch("empty");
    auto e = parse("[profile]\nkind = PureStep\n");
    CHECK(cmd_compare(e, empty.string(), log) == 0);
    CHECK(std::filesystem::exists(empty / "summary.txt"));
    CHECK_FALSE(std::filesystem::exists(empty / "comparison.csv"));
}

TEST_CASE("soliton comparison") {
    const auto dir = scratch("soliton");
    auto c = parse("[profile]\nkind = SolitonSnapshot\nphi = 3.141592653589793\nR = 40\n"
                   "[wedge]\nalpha = 0.5\ns = 4\nt = 1.5, 2.5\n[pde]\nmode = run\nL = 40\nh = 0.04\n");
    std::ostringstream log;
    CHECK(cmd_compare(c, dir.string(), log) == 0);
    const SolitonSpectrum sol(1.0);
    auto rows = predict_rows(sol, c.wedge);
    attach_pde(rows, run_pde_ladder(c));
    for (const auto& r : rows) {
        REQUIRE(r.pde.has_value());
        CHECK(r.abs_gap <= 1e-3);
    }
}
