#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "nnls/phase_functionals.hpp"

using namespace nnls;

namespace {

const cplx I(0.0, 1.0);

const SampledSpectrum& smoothed() {
    static const SampledSpectrum s(compute_spectral_data({ProfileKind::SmoothedStep, 1.0, 1.0, 20.0, 0.0}));
    return s;
}

// single quadrature of the defining integral, no splitting at |k| = 1
cplx chi_single_pass(const Spectrum& sp, double z, double alpha, double s, double t) {
    const auto v = scaled_variables(alpha, s, t);
    QuadratureSpec q;
    q.max_subdivisions = 20000;
    const cplx r = integrate([&](double k) { return std::log(z - k * v.X) * sp.log_one_plus_r1r2_prime(k); },
                             -std::numeric_limits<double>::infinity(), -v.xi, q);
    return -r / (2.0 * kPi * I);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

}  // namespace

TEST_CASE("scaled variables round trip") {
    const auto v = scaled_variables(0.8, 1.0, 200.0);
    CHECK(v.x == doctest::Approx(262.56791517818834).epsilon(1e-13));
    CHECK(std::pow(v.x, 1.2) / (4.0 * 200.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(v.xi == doctest::Approx(std::pow(v.x, -0.2)).epsilon(1e-13));
    CHECK_THROWS_AS(scaled_variables(1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(scaled_variables(0.5, -1.0, 1.0), DomainError);
}

TEST_CASE("nu_hat for the pure step at k = -1") {
    // s = 1, t = 1/4 puts the stationary point at xi = 1
    const PureStepSpectrum ps(2.0);
    CHECK(nu_hat(ps, 0.5, 1.0, 0.25).real() == doctest::Approx(std::log(2.0) / (2.0 * kPi)).epsilon(1e-13));
    CHECK(nu_hat(ps, 0.5, 1.0, 0.25).imag() == 0.0);
}

TEST_CASE("reflectionless data give trivial functionals") {
    const SolitonSpectrum sol(1.0);
    CHECK(nu_hat(sol, 0.7, 1.0, 1e5) == cplx(0.0));
    CHECK(chi_hat(sol, 0.0, 0.7, 1.0, 1e5) == cplx(0.0));
    CHECK(chi_hat(sol, -1.0, 0.7, 1.0, 1e5) == cplx(0.0));
    CHECK(delta0(sol, 0.3) == cplx(1.0));
    const auto e = chi_nu_expansion(sol, 0.7, 1.0, 1e5);
    CHECK(e.nu == cplx(0.0));
    CHECK(e.chi_const == cplx(0.0));
    CHECK(e.chi_at_zero == cplx(0.0));
    CHECK(amplitude_Q(sol) == 1.0);
}

TEST_CASE("pure step chi_hat against high-precision values") {
    // A = 2, alpha = 0.8, s = 1, t = 1e4 (xi = 0.17099759466767)
    const PureStepSpectrum ps(2.0);
    const double al = 0.8, s = 1.0, t = 1e4;
    CHECK(scaled_variables(al, s, t).xi == doctest::Approx(0.1709975946676697).epsilon(1e-13));
    CHECK(nu_hat(ps, al, s, t).real() == doctest::Approx(0.56675591149295263).epsilon(1e-12));
    const cplx c0 = chi_hat(ps, 0.0, al, s, t);
    const cplx cs = chi_hat(ps, -s, al, s, t);
    const cplx ch = chi_hat(ps, 0.5, al, s, t);
    CHECK(std::abs(c0 - cplx(0.0, -0.62501452960261149)) < 1e-10);
    CHECK(std::abs(cs - cplx(0.0, -0.19197475919044788)) < 1e-10);
    CHECK(std::abs(ch - cplx(0.0, -0.7314369085487165)) < 1e-10);
}

TEST_CASE("pure step log moment is -pi^2/12") {
    const PureStepSpectrum ps(2.0);
    CHECK(std::abs(chi_hat_0(ps, 1.0) - I / (2.0 * kPi) * (-kPi * kPi / 12.0)) < 1e-11);
    const cplx d = chi_hat_0(ps, 2.0) - chi_hat_0(ps, 1.0);
    CHECK(std::abs(d - I * std::log(2.0) * std::log(2.0) / (2.0 * kPi)) < 1e-12);
}

TEST_CASE("split chi_hat agrees with a single-pass quadrature") {
    const PureStepSpectrum ps(2.0);
    const ModelCaseIISpectrum m(1.0, 0.5, 0.6), mt(1.0, 0.5, 0.6, 1.5);
    for (double t : {1e2, 1e5}) {
        CHECK(std::abs(chi_hat(ps, 0.0, 0.6, 1.0, t) - chi_single_pass(ps, 0.0, 0.6, 1.0, t)) < 1e-6);
        CHECK(std::abs(chi_hat(ps, 0.3, 0.6, 1.0, t) - chi_single_pass(ps, 0.3, 0.6, 1.0, t)) < 1e-6);
        CHECK(std::abs(chi_hat(m, 0.0, 0.6, 1.0, t) - chi_single_pass(m, 0.0, 0.6, 1.0, t)) < 1e-6);
        CHECK(std::abs(chi_hat(mt, 0.0, 0.6, 1.0, t) - chi_single_pass(mt, 0.0, 0.6, 1.0, t)) < 1e-6);
        CHECK(std::abs(chi_hat(smoothed(), 0.0, 0.6, 1.0, t) - chi_single_pass(smoothed(), 0.0, 0.6, 1.0, t)) <
              1e-6);
    }
}

TEST_CASE("chi_hat(-s) - chi_hat(0) approaches i pi/6") {
    const PureStepSpectrum ps(2.0);
    double prev = 1.0;
    for (double t : {1e2, 1e4, 1e6, 1e8}) {
        const double gap = std::abs(chi_hat(ps, -1.0, 0.8, 1.0, t) - chi_hat(ps, 0.0, 0.8, 1.0, t) - I * kPi / 6.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("Im nu_hat decays along a t-ladder") {
    const ModelCaseIISpectrum m(1.0, 0.5, 0.6, 1.5);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {1e2, 1e4, 1e6, 1e8}) {
        const double im = std::abs(nu_hat(m, 0.6, 1.0, t).imag());
        CHECK(im < prev);
        prev = im;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("nu_hat expansion error decays at twice the generic rate for real data") {
    const double al = 0.6;
    std::vector<double> lt, le;
    for (double t : {1e3, 1e4, 1e5, 1e6, 1e7}) {
        const auto e = chi_nu_expansion(smoothed(), al, 1.0, t);
        lt.push_back(std::log(t));
        le.push_back(std::log(std::abs(nu_hat(smoothed(), al, 1.0, t) - e.nu)));
    }
    const double order = (al - 1.0) / (2.0 - al);
    // real initial data make R even, so the linear term in xi vanishes and the
    // remainder is O(xi^2)
    CHECK(std::abs(slope(lt, le) / (2.0 * order) - 1.0) <= 0.2);
}

TEST_CASE("chi_hat expansion in both cases") {
    const PureStepSpectrum ps(2.0);
    const ModelCaseIISpectrum m(1.0, 0.5, 0.6);
    double prev_i = 1.0, prev_ii = 1.0;
    for (double t : {1e4, 1e8, 1e12}) {
        const auto di = phase_functionals_direct(ps, 0.8, 1.0, t);
        const auto ei = chi_nu_expansion(ps, 0.8, 1.0, t);
        const double gi = std::abs(di.chi_at_zero - ei.chi_at_zero);
        const auto dii = phase_functionals_direct(m, 0.8, 1.0, t);
        const auto eii = chi_nu_expansion(m, 0.8, 1.0, t);
        const double gii = std::abs(dii.chi_at_minus_s - eii.chi_at_minus_s);
        CHECK(gi < prev_i);
        CHECK(gii < prev_ii);
        prev_i = gi;
        prev_ii = gii;
    }
    CHECK(prev_i < 1e-5);
    CHECK(prev_ii < 1e-2);
}

TEST_CASE("expansion metadata and working band") {
    const PureStepSpectrum ps(2.0);
    const auto e = chi_nu_expansion(ps, 0.5, 1.0, 1e6);
    CHECK(e.method == PhaseMethod::AsymptoticExpansion);
    CHECK(e.nu_order.t_exponent == doctest::Approx(-1.0 / 3.0));
    CHECK(e.chi_order.log_power == 1.0);
    CHECK(e.warnings.empty());
    CHECK(chi_nu_expansion(ps, 0.5, 0.01, 1e6).warnings.size() == 1);
    CHECK(chi_nu_expansion(ps, 0.5, 30.0, 1e6).warnings.size() == 1);
    CHECK(to_string(e.chi_order) == "O(t^-0.333333 ln t)");
}

TEST_CASE("Re chi_hat plateau matches the amplitude") {
    const ModelCaseIISpectrum sp(1.0, 0.5, 0.6, 1.5);
    const double P = re_chi_plateau(sp);
    CHECK(2.0 * P == doctest::Approx(std::log(amplitude_Q(sp) / sp.A())).epsilon(1e-12));
    CHECK(std::abs(P) > 1e-4);
    double prev = 1.0;
    for (double t : {1e4, 1e8, 1e12}) {
        const double gap = std::abs(chi_hat(sp, 0.0, 0.6, 1.0, t).real() - P);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
    CHECK(std::abs(chi_hat(sp, 0.0, 0.6, 1.0, 1e12).real() - chi_hat(sp, -1.0, 0.6, 1.0, 1e12).real()) < 1e-3);
}

TEST_CASE("delta(0, xi) for the pure step") {
    const PureStepSpectrum ps(2.0);
    CHECK(std::abs(delta0(ps, 0.1) - cplx(0.56205404155621612, -0.82710051044012981)) < 1e-10);
    CHECK(std::abs(delta0(ps, 3.0) - cplx(0.99996295352571395, -0.0086076463758009826)) < 1e-10);
    for (double xi : {1e-6, 1e-3, 0.5, 2.0, 50.0}) CHECK(std::abs(delta0(ps, xi)) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 1.0;
    for (double xi : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double gap = std::abs(delta0(ps, xi) - delta0_expansion(ps, xi));
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("delta(0, xi) expansion in Case II") {
    const ModelCaseIISpectrum m(1.0, 0.5, 0.6);
    const double gap = std::abs(delta0(m, 1e-5) - delta0_expansion(m, 1e-5));
    CHECK(gap < 1e-4);
}

TEST_CASE("nu_hat rejects a vanishing 1 + r1 r2") {
    // xi = 1 and A = 1e7: 1 + r1 r2 = 4/(4 + A^2) ~ 4e-14
    const PureStepSpectrum ps(1e7);
    CHECK_THROWS_AS(nu_hat(ps, 0.5, 1.0, 0.25), LogSingularityError);
}
