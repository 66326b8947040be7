#include "doctest.h"

#include <cmath>

#include "nnls/special_functions.hpp"

using nnls::cplx;
using nnls::kPi;

namespace {

struct LgRef {
    cplx z;
    double re, im;
};

// Reference values: mpmath.loggamma at 25 digits.
const LgRef kLogGammaTable[] = {
    {{2, 3}, -2.0928517530927333496, 2.3023965434668676262},
    {{0.2, 30}, -47.225301594789440631, 71.564571416837276553},
    {{-2.5, 0.3}, -0.43208889261320192052, -9.0933454212897415073},
    {{-0.3, -4}, -6.4765289936352027889, -0.21911147775053550158},
    {{10, -45}, -33.534147797622682437, -140.22780472096060602},
    {{0.1, -0.05}, 2.1393504258651592868, 0.48479661624522171966},
    {{-7.2, 1e-3}, -7.2548198235040481078, -25.126375317526530445},
    {{0, 1}, -0.65092319930185633889, -1.8724366472624298171},
};

}  // namespace

TEST_CASE("log_gamma at simple points") {
    CHECK(std::abs(nnls::log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(nnls::log_gamma(2.0)) < 1e-14);
    CHECK(nnls::log_gamma(0.5).real() == doctest::Approx(0.57236494292470008707).epsilon(1e-14));
    CHECK(std::abs(std::exp(nnls::log_gamma(cplx(0, 1)))) ==
          doctest::Approx(std::sqrt(kPi / std::sinh(kPi))).epsilon(1e-13));
    CHECK(std::abs(std::exp(nnls::log_gamma(cplx(0, 1)))) == doctest::Approx(0.521564).epsilon(1e-6));
}

TEST_CASE("log_gamma matches the analytic branch off the real axis") {
    for (const auto& r : kLogGammaTable) {
        CAPTURE(r.z);
        const cplx v = nnls::log_gamma(r.z);
        const double scale = std::max(1.0, std::abs(cplx(r.re, r.im)));
        CHECK(std::abs(v - cplx(r.re, r.im)) < 1e-12 * scale);
    }
}

TEST_CASE("log_gamma recurrence and poles") {
    for (cplx z : {cplx(0.3, 2.0), cplx(-1.7, 0.4), cplx(3.1, -20.0)}) {
        const cplx lhs = std::exp(nnls::log_gamma(z + 1.0));
        const cplx rhs = z * std::exp(nnls::log_gamma(z));
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
    }
    CHECK_THROWS_AS(nnls::log_gamma(0.0), nnls::DomainError);
    CHECK_THROWS_AS(nnls::log_gamma(-3.0), nnls::DomainError);
}

TEST_CASE("reflection identity on the imaginary axis") {
    for (double y = 0.1; y <= 10.0 + 1e-12; y += 0.1) {
        const cplx g = std::exp(nnls::log_gamma(cplx(0, y)) + nnls::log_gamma(cplx(0, -y)));
        CHECK(std::abs(g - kPi / (y * std::sinh(kPi * y))) < 1e-10);
    }
}

TEST_CASE("dilogarithm") {
    CHECK(nnls::dilog(0.0) == 0.0);
    CHECK(nnls::dilog(1.0) == doctest::Approx(kPi * kPi / 6).epsilon(1e-15));
    const double xs[] = {0.1, 0.3, 0.5, 0.7, 0.95, -0.5, -3};
    const double ref[] = {0.10261779109939113696, 0.32612951007547605633, 0.5822405264650125059,
                          0.88937762428603866222, 1.4406337969700393438, -0.44841420692364620244,
                          -1.9393754207667089531};
    for (int i = 0; i < 7; ++i) CHECK(nnls::dilog(xs[i]) == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("quad examples") {
    auto id = [](double z) { return cplx(z); };
    CHECK(std::abs(nnls::integrate(id, 0.0, 1.0) - 0.5) < 1e-14);

    nnls::QuadratureSpec left;
    left.endpoint = nnls::EndpointLog::LogAtLeftEnd;
    // ln(-z) is singular at the right end of [-1, 0]
    nnls::QuadratureSpec right;
    right.endpoint = nnls::EndpointLog::LogAtRightEnd;
    CHECK(std::abs(nnls::integrate([](double z) { return cplx(std::log(-z)); }, -1.0, 0.0, right) + 1.0) <
          1e-12);
    CHECK(std::abs(nnls::integrate([](double z) { return cplx(std::log(z)); }, 0.0, 1.0, left) + 1.0) <
          1e-12);

    CHECK(std::abs(nnls::integrate([](double z) { return cplx(1.0 / (z * z)); },
                                   -std::numeric_limits<double>::infinity(), -1.0) -
                   1.0) < 1e-12);
}

TEST_CASE("quad is exact on low-degree polynomials") {
    auto p = [](double z) { return cplx(3 - 2 * z + z * z * z - 0.5 * std::pow(z, 5), 2 * z * z); };
    auto P = [](double z) {
        return cplx(3 * z - z * z + std::pow(z, 4) / 4 - std::pow(z, 6) / 12, 2 * z * z * z / 3);
    };
    for (auto [a, b] : {std::pair{-1.0, 2.0}, std::pair{0.5, 0.75}, std::pair{-3.0, -2.0}}) {
        CHECK(std::abs(nnls::integrate(p, a, b) - (P(b) - P(a))) < 1e-12);
    }
}

TEST_CASE("quad reports failure with the best estimate") {
    nnls::QuadratureSpec spec;
    spec.max_subdivisions = 3;
    try {
        nnls::quad([](double z) { return cplx(std::sin(200 * z)); }, 0.0, 10.0, spec);
        FAIL("expected ConvergenceError");
    } catch (const nnls::ConvergenceError& e) {
        CHECK(e.error_estimate > 0.0);
        CHECK(std::isfinite(e.best_estimate.real()));
    }
    spec.max_subdivisions = 0;
    CHECK_THROWS_AS(nnls::quad([](double) { return cplx(1); }, 0.0, 1.0, spec), nnls::DomainError);
}

TEST_CASE("imaginary-axis zero finder") {
    CHECK(nnls::find_imag_axis_zero([](double r) { return r - 1.0; }, 0.5, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // pure step A=2: a1(i rho) = 1 - A^2/(4 rho^2)
    auto a1 = [](double r) { return 1.0 - 4.0 / (4.0 * r * r); };
    CHECK(nnls::find_imag_axis_zero(a1, 2e-3, 2e3) == doctest::Approx(1.0).epsilon(1e-12));
    // soliton A=1: (rho - 1/2)/rho
    auto sol = [](double r) { return (r - 0.5) / r; };
    const double r1 = nnls::find_imag_axis_zero(sol, 1e-3, 1e3);
    const double r2 = nnls::find_imag_axis_zero(sol, 0.25, 0.75);
    CHECK(r1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r1 - r2) < 1e-10);
    CHECK_THROWS_AS(nnls::find_imag_axis_zero(sol, 1.0, 2.0), nnls::NotBracketedError);
}
