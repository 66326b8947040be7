#include "nnls/phase_functionals.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace nnls {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Accumulator {
    cplx value;
    double error = 0.0;
    void add(const QuadResult& r) {
        value += r.value;
        error += r.error;
    }
};

QuadratureSpec with_endpoint(QuadratureSpec q, EndpointLog e) {
    q.endpoint = e;
    return q;
}

void check_alpha_s_t(double alpha, double s, double t) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!(s > 0.0)) throw DomainError("s must be positive");
    if (!(t > 0.0)) throw DomainError("t must be positive");
}

// int_{-inf}^{-1} ln(-k) L'(k) dk + int_{-1}^0 ln(-k) R'(k) dk
cplx log_moment(const Spectrum& sp) {
    const auto far = integrate([&](double k) { return std::log(-k) * sp.log_one_plus_r1r2_prime(k); },
                               -std::numeric_limits<double>::infinity(), -1.0);
    const auto near = integrate([&](double k) { return std::log(-k) * sp.log_regular_prime(k); }, -1.0, 0.0,
                                with_endpoint({}, EndpointLog::LogAtRightEnd));
    return far + near;
}

}  // namespace

ScaledVariables scaled_variables(double alpha, double s, double t) {
    check_alpha_s_t(alpha, s, t);
    ScaledVariables v;
    v.log4st = std::log(4.0 * s * t);
    v.x = std::exp(v.log4st / (2.0 - alpha));
    const double lnX = (1.0 - alpha) / (2.0 - alpha) * v.log4st;
    v.X = std::exp(lnX);
    v.xi = s * std::exp(-lnX);
    return v;
}

std::string to_string(const ErrorOrder& e) {
    if (e.log_power == 0.0) return fmt::format("O(t^{:.6g})", e.t_exponent);
    if (e.log_power == 1.0) return fmt::format("O(t^{:.6g} ln t)", e.t_exponent);
    return fmt::format("O(t^{:.6g} ln^{:g} t)", e.t_exponent, e.log_power);
}

cplx nu_hat(const Spectrum& sp, double alpha, double s, double t) {
    const auto v = scaled_variables(alpha, s, t);
    if (sp.reflectionless()) return 0.0;
    const cplx L = sp.log_one_plus_r1r2(-v.xi);
    // in Case I the k^2 zero at the origin is expected; only the regular part may not vanish
    if (sp.log_regular(-v.xi).real() < std::log(1e-12))
        throw LogSingularityError(fmt::format("nu_hat: 1 + r1 r2 vanishes at k = {:.6g}", -v.xi));
    return -L / (2.0 * kPi);
}

cplx chi_hat(const Spectrum& sp, double z, double alpha, double s, double t, const QuadratureSpec& q,
             double* error) {
    const auto v = scaled_variables(alpha, s, t);
    if (!(z >= -s)) throw DomainError("chi_hat: need z >= -s");
    if (error) *error = 0.0;
    if (sp.reflectionless()) return 0.0;

    const double lnX = std::log(v.X);
    const double zr = z / v.X;
    const bool at_minus_s = z == -s;
    // ln(z - k X) = ln X + ln(z/X - k); at z = -s the second log vanishes at k = -xi
    auto lg = [&](double k) { return lnX + std::log((at_minus_s ? -v.xi : zr) - k); };
    const double inf = std::numeric_limits<double>::infinity();
    // piece ending at k = -xi; at z = -s it runs in d = -xi - k so the log end stays exact
    auto near_piece = [&](auto deriv, double from) {
        if (!at_minus_s) return quad([&](double k) { return lg(k) * deriv(k); }, from, -v.xi, q);
        return quad([&](double d) { return (lnX + std::log(d)) * deriv(-v.xi - d); }, 0.0, -v.xi - from,
                    with_endpoint(q, EndpointLog::LogAtLeftEnd));
    };
    auto dL = [&](double k) { return sp.log_one_plus_r1r2_prime(k); };
    auto dR = [&](double k) { return sp.log_regular_prime(k); };

    Accumulator acc;
    if (v.xi >= 1.0 || sp.log_weight() == 0) {
        const double split = std::min(-1.0, -2.0 * v.xi);
        acc.add(quad([&](double k) { return lg(k) * dL(k); }, -inf, split, q));
        acc.add(near_piece(dL, split));
    } else {
        acc.add(quad([&](double k) { return lg(k) * dL(k); }, -inf, -1.0, q));
        acc.add(near_piece(dR, -1.0));

        // int_{-1}^{-xi} (2/k) ln(z - k X) dk = -2 int_xi^1 ln(z + p X)/p dp
        const double lxi = std::log(v.xi);
        double analytic = 2.0 * lnX * lxi + lxi * lxi;
        if (at_minus_s) {
            analytic += kPi * kPi / 3.0 - 2.0 * dilog(v.xi);
        } else if (z != 0.0) {
            const auto r = quad([&](double p) { return -2.0 * std::log(z + p * v.X) / p; }, v.xi, 1.0, q);
            analytic = r.value.real();
            acc.error += r.error;
        }
        acc.value += analytic;
    }
    if (error) *error = acc.error;
    return -acc.value / (2.0 * kPi * kI);
}

cplx delta0(const Spectrum& sp, double xi, const QuadratureSpec& q) {
    if (!(xi > 0.0)) throw DomainError("delta0: xi must be positive");
    if (sp.reflectionless()) return 1.0;
    const double inf = std::numeric_limits<double>::infinity();
    auto f = [&](double k) { return sp.log_one_plus_r1r2(k) / k; };
    cplx e;
    if (xi >= 1.0 || sp.log_weight() == 0) {
        e = integrate(f, -inf, std::min(-1.0, -xi), q);
        if (xi < 1.0) e -= integrate([&](double u) { return sp.log_one_plus_r1r2(-std::exp(u)); }, std::log(xi), 0.0, q);
    } else {
        // int_{-1}^{-xi} L/zeta = int_0^{ln xi} R(-e^u) du + ln^2 xi in Case I
        const double lxi = std::log(xi);
        e = integrate(f, -inf, -1.0, q);
        e -= integrate([&](double u) { return sp.log_regular(-std::exp(u)); }, lxi, 0.0, q);
        e += lxi * lxi;
    }
    return std::exp(e / (2.0 * kPi * kI));
}

cplx delta0_expansion(const Spectrum& sp, double xi) {
    if (!(xi > 0.0)) throw DomainError("delta0_expansion: xi must be positive");
    if (sp.reflectionless()) return 1.0;
    const double lxi = std::log(xi);
    if (sp.case_tag() == CaseTag::CaseI)
        return std::exp(kI / kPi * lxi * std::log(sp.A() * std::abs(sp.a2_0()) / (2.0 * xi)) + chi_hat_0(sp, xi));
    return std::exp(kI / (2.0 * kPi) * lxi * std::log(sp.a11() * sp.a21()) + chi_hat_1(sp));
}

double re_chi_plateau(const Spectrum& sp) {
    if (sp.reflectionless()) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    const cplx far = integrate([&](double k) { return sp.log_one_plus_r1r2(k).imag() / k; }, -inf, -1.0);
    const cplx near = integrate([&](double k) { return sp.log_regular(k).imag() / k; }, -1.0, 0.0,
                                with_endpoint({}, EndpointLog::LogAtRightEnd));
    return (far + near).real() / (2.0 * kPi);
}

double amplitude_Q(const Spectrum& sp) { return sp.A() * std::exp(2.0 * re_chi_plateau(sp)); }

cplx chi_hat_0(const Spectrum& sp, double s) {
    if (sp.case_tag() != CaseTag::CaseI) throw DomainError("chi_hat_0 is defined in Case I only");
    if (!(s > 0.0)) throw DomainError("chi_hat_0: s must be positive");
    const double ls = std::log(s);
    return kI / (2.0 * kPi) * (ls * ls + log_moment(sp));
}

cplx chi_hat_1(const Spectrum& sp) {
    if (sp.case_tag() != CaseTag::CaseII) throw DomainError("chi_hat_1 is defined in Case II only");
    if (sp.reflectionless()) return 0.0;
    return kI / (2.0 * kPi) * log_moment(sp);
}

PhaseFunctionalResult phase_functionals_direct(const Spectrum& sp, double alpha, double s, double t) {
    PhaseFunctionalResult r;
    r.method = PhaseMethod::DirectQuadrature;
    r.nu = nu_hat(sp, alpha, s, t);
    double e0 = 0.0, e1 = 0.0;
    r.chi_at_zero = chi_hat(sp, 0.0, alpha, s, t, {}, &e0);
    r.chi_at_minus_s = chi_hat(sp, -s, alpha, s, t, {}, &e1);
    r.max_quadrature_error = std::max(e0, e1);
    if (sp.case_tag() == CaseTag::CaseI) {
        r.chi_const = chi_hat_0(sp, s);
        r.chi_const_minus_s = r.chi_const + kI * kPi / 6.0;
    } else {
        r.chi_const = r.chi_const_minus_s = chi_hat_1(sp);
    }
    r.plateau = re_chi_plateau(sp);
    return r;
}

PhaseFunctionalResult chi_nu_expansion(const Spectrum& sp, double alpha, double s, double t) {
    const auto v = scaled_variables(alpha, s, t);
    const double a2 = check_assumption2(sp);
    if (!assumption2_holds(a2))
        throw AssumptionViolation(fmt::format("arg(1 + r1 r2) tends to {:.3g} at k -> 0-, expected 0", a2));

    PhaseFunctionalResult r;
    r.method = PhaseMethod::AsymptoticExpansion;
    const double order = (alpha - 1.0) / (2.0 - alpha);
    r.nu_order = {order, 0};
    r.chi_order = {order, 1};
    if (s < kBandLow || s > kBandHigh)
        r.warnings.push_back(fmt::format("s = {:.6g} outside the working band [{}, {}]; the expansion is not "
                                         "uniform there",
                                         s, kBandLow, kBandHigh));
    r.plateau = re_chi_plateau(sp);
    if (sp.reflectionless()) return r;

    const double p = (1.0 - alpha) / (2.0 - alpha);
    const double lg = v.log4st;
    if (sp.case_tag() == CaseTag::CaseI) {
        const double la = std::log(sp.A() * std::abs(sp.a2_0()) / 2.0);
        r.nu = p / kPi * lg + (la - std::log(s)) / kPi;
        r.chi_const = chi_hat_0(sp, s);
        r.chi_const_minus_s = r.chi_const + kI * kPi / 6.0;
        const cplx growth = kI / (2.0 * kPi) * (-p * p * lg * lg - 2.0 * p * la * lg);
        r.chi_at_zero = growth + r.chi_const;
        r.chi_at_minus_s = growth + r.chi_const_minus_s;
    } else {
        const cplx laa = std::log(sp.a11() * sp.a21());
        r.nu = laa / (2.0 * kPi);
        r.chi_const = r.chi_const_minus_s = chi_hat_1(sp);
        r.chi_at_zero = r.chi_at_minus_s = -kI * p / (2.0 * kPi) * laa * lg + r.chi_const;
    }
    return r;
}

}  // namespace nnls
