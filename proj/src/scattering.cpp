#include "nnls/scattering.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>

namespace nnls {

std::string to_string(CaseTag c) { return c == CaseTag::CaseI ? "CaseI" : "CaseII"; }

CaseTag case_tag_from_string(const std::string& s) {
    if (s == "CaseI") return CaseTag::CaseI;
    if (s == "CaseII") return CaseTag::CaseII;
    throw DomainError("unknown case tag '" + s + "'");
}

namespace {

namespace odeint = boost::numeric::odeint;
using Col = std::array<cplx, 2>;

constexpr double kTiny = 1e-300;

enum class Side { Left, Right };

// Potential entries with one-sided limits at x = 0, so that a jump of q0 at
// the origin (pure step) is seen from the side being integrated.
struct Potential {
    const InitialProfile& p;
    Side side;
    cplx q(double x) const { return side == Side::Left ? p(std::min(x, -kTiny)) : p(std::max(x, kTiny)); }
    cplx qm_conj(double x) const {
        return std::conj(side == Side::Left ? p(std::max(-x, kTiny)) : p(std::min(-x, -kTiny)));
    }
};

// Column `c` of Psi e^{...}: psi' = (-ik sigma3 + U + lambda) psi with lambda = +ik (c=0) or -ik (c=1).
Col integrate_column(const InitialProfile& p, cplx k, int c, Col y, double x0, double x1,
                     const JostOptions& opt) {
    const Potential pot{p, x0 < x1 ? Side::Left : Side::Right};
    const cplx two_ik = 2.0 * cplx(0, 1) * k;
    auto rhs = [&](const Col& v, Col& dv, double x) {
        const cplx q = pot.q(x), r = pot.qm_conj(x);
        if (c == 0) {
            dv[0] = q * v[1];
            dv[1] = -r * v[0] + two_ik * v[1];
        } else {
            dv[0] = -two_ik * v[0] + q * v[1];
            dv[1] = -r * v[0];
        }
    };
    auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<Col>());
    const double dt0 = (x1 > x0 ? 1.0 : -1.0) * std::min(1e-2, 0.1 / (1.0 + std::abs(k)));
    try {
        odeint::integrate_adaptive(stepper, rhs, y, x0, x1, dt0);
    } catch (const std::exception& e) {
        throw SolverError(std::string("Jost ODE failed: ") + e.what());
    }
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw SolverError("Jost ODE diverged");
    return y;
}

}  // namespace

JostPair jost_at_origin(const InitialProfile& p, double k, const JostOptions& opt) {
    if (k == 0.0 || !std::isfinite(k)) throw DomainError("jost_at_origin: k must be real and nonzero");
    p.validate();
    const cplx kk = k;
    const cplx n = p.A / (2.0 * cplx(0, 1) * kk);
    const double R = p.R;
    JostPair out;
    const Col l0 = integrate_column(p, kk, 0, {1.0, n}, -R, 0.0, opt);
    const Col l1 = integrate_column(p, kk, 1, {0.0, 1.0}, -R, 0.0, opt);
    const Col r0 = integrate_column(p, kk, 0, {1.0, 0.0}, R, 0.0, opt);
    const Col r1 = integrate_column(p, kk, 1, {n, 1.0}, R, 0.0, opt);
    out.psi1 << l0[0], l1[0], l0[1], l1[1];
    out.psi2 << r0[0], r1[0], r0[1], r1[1];
    return out;
}

Mat2 scattering_matrix_at(const InitialProfile& p, double k, const JostOptions& opt) {
    const JostPair j = jost_at_origin(p, k, opt);
    if (std::abs(j.psi2.determinant()) < 1e-12) throw SolverError("scattering_matrix: Psi_2 not invertible");
    return j.psi2.inverse() * j.psi1;
}

cplx a1_on_imaginary_axis(const InitialProfile& p, double rho, const JostOptions& opt) {
    if (!(rho > 0.0)) throw DomainError("a1_on_imaginary_axis: rho must be positive");
    p.validate();
    const cplx k(0.0, rho);
    const cplx n = p.A / (2.0 * cplx(0, 1) * k);
    // Column 1 of Psi_1 decays forward from -R, column 2 of Psi_2 decays backward from R.
    const Col u = integrate_column(p, k, 0, {1.0, n}, -p.R, 0.0, opt);
    const Col v = integrate_column(p, k, 1, {n, 1.0}, p.R, 0.0, opt);
    return u[0] * v[1] - v[0] * u[1];
}

std::vector<double> make_k_grid(const KGridSpec& g) {
    if (!(g.k_min > 0.0) || !(g.k_max > g.k_min) || g.n_per_sign < 4)
        throw DomainError("k-grid: need 0 < k_min < k_max and at least 4 points per sign");
    const int n = g.n_per_sign;
    const double u0 = std::log(g.k_min), u1 = std::log(g.k_max);
    std::vector<double> k(2 * n);
    for (int j = 0; j < n; ++j) {
        const double mag = std::exp(u0 + (u1 - u0) * j / (n - 1));
        k[n + j] = mag;
        k[n - 1 - j] = -mag;
    }
    k[n] = g.k_min;
    k[2 * n - 1] = g.k_max;
    k[n - 1] = -g.k_min;
    k[0] = -g.k_max;
    return k;
}

SpectralData scattering_samples(const InitialProfile& p, const KGridSpec& g, const JostOptions& opt) {
    p.validate();
    SpectralData sd;
    sd.A = p.A;
    sd.grid = g;
    sd.k = make_k_grid(g);
    sd.fingerprint = p.fingerprint();
    const std::size_t n = sd.k.size();
    sd.a1.resize(n);
    sd.a2.resize(n);
    sd.b.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        Mat2 S;
        try {
            S = scattering_matrix_at(p, sd.k[j], opt);
        } catch (const std::runtime_error& e) {
            throw SolverError(std::string(e.what()) + " at k = " + std::to_string(sd.k[j]));
        }
        sd.a1[j] = S(0, 0);
        sd.b[j] = S(1, 0);
        sd.a2[j] = S(1, 1);
    }
    return sd;
}

double a2_at_zero_volterra(const InitialProfile& p, int n_intervals) {
    p.validate();
    if (n_intervals < 16 || n_intervals % 2 != 0) throw DomainError("a2_at_zero_volterra: bad grid size");
    const Potential pot{p, Side::Left};
    const cplx v2_inf(0.0, -0.5 * p.A);

    auto solve = [&](int n) {
        const double h = p.R / n;
        std::vector<cplx> qa(n + 1), qb(n + 1), v1(n + 1, 0.0), v2(n + 1, v2_inf);
        for (int j = 0; j <= n; ++j) {
            const double x = -p.R + j * h;
            qa[j] = pot.q(j == n ? 0.0 : x);
            qb[j] = pot.qm_conj(j == n ? 0.0 : x);
        }
        for (int it = 0; it < 2000; ++it) {
            double change = 0.0;
            cplx s1 = 0.0, s2 = 0.0;
            std::vector<cplx> n1(n + 1), n2(n + 1);
            n1[0] = 0.0;
            n2[0] = v2_inf;
            for (int j = 1; j <= n; ++j) {
                s1 += 0.5 * h * (qa[j - 1] * v2[j - 1] + qa[j] * v2[j]);
                s2 += 0.5 * h * (qb[j - 1] * v1[j - 1] + qb[j] * v1[j]);
                n1[j] = s1;
                n2[j] = v2_inf - s2;
                change = std::max({change, std::abs(n1[j] - v1[j]), std::abs(n2[j] - v2[j])});
            }
            v1.swap(n1);
            v2.swap(n2);
            if (change <= 1e-15 * p.A) return 4.0 * (std::norm(v2[n]) - std::norm(v1[n])) / (p.A * p.A);
        }
        throw SolverError("a2_at_zero_volterra: Picard iteration did not converge");
    };
    const double coarse = solve(n_intervals / 2);
    const double fine = solve(n_intervals);
    return (4.0 * fine - coarse) / 3.0;
}

namespace {

// Richardson in k^2 from symmetric averages at the two smallest |k| on each side.
template <class F>
cplx extrapolate_to_zero(const SpectralData& sd, F&& symmetric_value) {
    const std::size_t n = sd.k.size() / 2;
    const double k1 = sd.k[n], k2 = sd.k[n + 1];
    const cplx f1 = symmetric_value(n, n - 1), f2 = symmetric_value(n + 1, n - 2);
    return (k2 * k2 * f1 - k1 * k1 * f2) / (k2 * k2 - k1 * k1);
}

}  // namespace

SmallKData small_k_data(const InitialProfile& p, const SpectralData& sd) {
    SmallKData out;
    out.a2_0 = a2_at_zero_volterra(p);
    out.a2_0_extrapolated =
        extrapolate_to_zero(sd, [&](std::size_t jp, std::size_t jm) { return 0.5 * (sd.a2[jp] + sd.a2[jm]); })
            .real();
    out.a11 = extrapolate_to_zero(sd, [&](std::size_t jp, std::size_t jm) {
        return 0.5 * (sd.k[jp] * sd.a1[jp] + sd.k[jm] * sd.a1[jm]);
    });
    out.a21 = extrapolate_to_zero(sd, [&](std::size_t jp, std::size_t jm) {
        return 0.5 * (sd.a2[jp] / sd.k[jp] + sd.a2[jm] / sd.k[jm]);
    });
    out.b0 = extrapolate_to_zero(sd, [&](std::size_t jp, std::size_t jm) { return 0.5 * (sd.b[jp] + sd.b[jm]); });

    const double eps = case_epsilon(p.A);
    if (std::abs(out.a2_0) > eps) {
        const double gap = std::abs(out.a2_0 - out.a2_0_extrapolated) / std::abs(out.a2_0);
        if (gap > 1e-3)
            throw DiagnosticsError("small_k_data: v-route a2(0) and extrapolated a2 disagree (relative gap " +
                                   std::to_string(gap) + ")");
    } else if (std::abs(out.a2_0_extrapolated) > 1e-3 * std::max(1.0, p.A)) {
        throw DiagnosticsError("small_k_data: v-route gives a2(0) ~ 0 but the k-grid does not");
    }
    return out;
}

double case_epsilon(double A) { return 1e-6 * std::max(1.0, A); }

CaseTag classify_case(const SpectralData& sd) {
    const double eps = case_epsilon(sd.A);
    if (std::abs(sd.a2_0) > eps) return CaseTag::CaseI;
    if (std::abs(sd.a11) <= eps || std::abs(sd.a21) <= eps)
        throw AssumptionViolation("classify_case: a2(0) = 0 with a vanishing a11 or a21");
    const cplx prod = sd.a11 * sd.a21;
    if (!(prod.real() > 0.0) || std::abs(prod.imag()) > 1e-6 * std::abs(prod))
        throw AssumptionViolation("classify_case: Case II requires a11 a21 > 0");
    return CaseTag::CaseII;
}

double locate_k1(const InitialProfile& p, const JostOptions& opt) {
    auto f = [&](double rho) { return a1_on_imaginary_axis(p, rho, opt).real(); };
    return find_imag_axis_zero(f, 1e-3 * p.A, 1e3 * p.A);
}

std::vector<cplx> unwrapped_log_samples(const SpectralData& sd, bool negative_side) {
    const std::size_t n = sd.k.size() / 2;
    std::vector<cplx> L(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // walk from the far end (|k| = k_max) toward 0
        const std::size_t j = negative_side ? i : sd.k.size() - 1 - i;
        const cplx v = 1.0 / (sd.a1[j] * sd.a2[j]);
        const double raw = std::arg(v);
        double ang = raw;
        if (i > 0) {
            double d = std::remainder(raw - prev, 2.0 * kPi);
            if (std::abs(d) > 0.5 * kPi)
                throw DiagnosticsError("branch tracking: argument jump too large near k = " +
                                       std::to_string(sd.k[j]) + "; refine the k-grid");
            ang = prev + d;
        }
        prev = ang;
        L[n - 1 - i] = cplx(std::log(std::abs(v)), ang);
    }
    return L;  // ordered by increasing |k|
}

SpectralData compute_spectral_data(const InitialProfile& p, const KGridSpec& g, const JostOptions& opt) {
    SpectralData sd = scattering_samples(p, g, opt);
    const SmallKData sk = small_k_data(p, sd);
    sd.a2_0 = sk.a2_0;
    sd.a2_0_extrapolated = sk.a2_0_extrapolated;
    sd.a11 = sk.a11;
    sd.a21 = sk.a21;
    sd.b0 = sk.b0;
    sd.case_tag = classify_case(sd);
    if (sd.case_tag == CaseTag::CaseI) {
        sd.a11 = sd.a21 = 0.0;
        sd.b0 = 0.0;
    } else {
        sd.a2_0 = 0.0;
    }
    sd.k1 = locate_k1(p, opt);
    const auto L = unwrapped_log_samples(sd, true);
    const std::size_t n = sd.k.size() / 2;
    const double k1 = -sd.k[n - 1], k2 = -sd.k[n - 2];
    sd.assumption2 = L[0].imag() - k1 * (L[1].imag() - L[0].imag()) / (k2 - k1);
    return sd;
}

IdentityResiduals spectral_identities(const SpectralData& sd) {
    IdentityResiduals r;
    for (std::size_t j = 0; j < sd.k.size(); ++j) {
        const std::size_t m = sd.mirror(j);
        r.det_s = std::max(r.det_s, std::abs(sd.a1[j] * sd.a2[j] + sd.b[j] * sd.b_mirror(j) - 1.0));
        r.symmetry_a1 = std::max(r.symmetry_a1, std::abs(std::conj(sd.a1[m]) - sd.a1[j]));
        r.symmetry_a2 = std::max(r.symmetry_a2, std::abs(std::conj(sd.a2[m]) - sd.a2[j]));
        if (std::abs(sd.k[j]) >= 10.0)
            r.tail_a1 = std::max(r.tail_a1, std::abs(sd.a1[j] - 1.0) * std::abs(sd.k[j]));
    }
    return r;
}

}  // namespace nnls
