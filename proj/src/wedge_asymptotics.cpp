#include "nnls/wedge_asymptotics.hpp"

#include <cmath>

#include <fmt/format.h>

namespace nnls {

namespace {

constexpr cplx kI{0.0, 1.0};

double case_II_product(const Spectrum& sp) {
    const cplx aa = sp.a11() * sp.a21();
    if (!(aa.real() > 0.0) || std::abs(aa.imag()) > 1e-6 * std::abs(aa))
        throw AssumptionViolation(fmt::format("a11 a21 = {:.6g}{:+.6g}i is not positive", aa.real(), aa.imag()));
    return aa.real();
}

double case_I_scale(const Spectrum& sp) {
    const double la = sp.A() * std::abs(sp.a2_0());
    if (!(la > 0.0)) throw AssumptionViolation("Case I requires a2(0) != 0");
    return la;
}

cplx exp_log_gamma_ratio(cplx numerator_log, cplx gamma_arg) { return std::exp(numerator_log - log_gamma(gamma_arg)); }

// t-independent pieces shared by the predictions.
struct CaseConstants {
    double Q = 0;
    double psi0 = 0;    // constant part of Psi_I / Psi_II
    cplx chi_minus_s;   // chi_hat_{-s}(s) or chi_hat_1
    cplx bt_as, gt_as;  // tilde beta/gamma constants
    cplx A1, A2, A3;
};

CaseConstants case_constants(const Spectrum& sp, double alpha, double s, Convention conv) {
    CaseConstants k;
    k.Q = amplitude_Q(sp);
    const double p = (1.0 - alpha) / (2.0 - alpha);
    const double q = (alpha + 2.0) / (2.0 * alpha - 4.0);
    const double k1 = sp.k1();
    const double common = p * std::log(s) + q * std::log(2.0);
    const cplx twist = conv == Convention::Consistent ? 2.0 : 2.0 * kI;  // factor in front of chi

    if (sp.case_tag() == CaseTag::CaseI) {
        const double la = case_I_scale(sp);
        const cplx chi0 = chi_hat_0(sp, s);
        k.chi_minus_s = chi0 + kI * kPi / 6.0;
        k.psi0 = 2.0 / kPi * std::log(s) * std::log(la / (2.0 * s)) + 2.0 * chi0.imag();
        const double c = (1.0 - alpha) / (kPi * (2.0 - alpha));
        const double d = std::log(la / (2.0 * s)) / kPi;
        const double ph = d * (std::log(s / 2.0) + std::log(c));
        k.bt_as = kI * sp.A() / (2.0 * k1) * std::sqrt(c) * std::exp(kI * ph + common + twist * k.chi_minus_s);
        k.gt_as = -kI * 2.0 * k1 / sp.A() * std::sqrt(c) * std::exp(-kI * ph + common - twist * k.chi_minus_s);
    } else {
        const double aa = case_II_product(sp);
        const double nu0 = std::log(aa) / (2.0 * kPi);
        k.chi_minus_s = chi_hat_1(sp);
        k.psi0 = std::log(s) * std::log(aa) / kPi + 2.0 * k.chi_minus_s.imag();
        const cplx b0 = sp.b0();
        if (std::abs(b0) > 0.0) {
            const cplx pre = std::sqrt(2.0 * kPi) * std::pow(aa, -0.25);
            const cplx beta = pre * exp_log_gamma_ratio(-0.75 * kPi * kI, cplx(0, -nu0)) * sp.a11() / (-kI * k1 * b0);
            const cplx gamma =
                pre * exp_log_gamma_ratio(-0.25 * kPi * kI, cplx(0, nu0)) * k1 * sp.a21() / (kI * std::conj(b0));
            const double ph = nu0 * std::log(s / 2.0);
            k.bt_as = kI * beta * std::exp(kI * ph + common + twist * k.chi_minus_s);
            k.gt_as = -kI * gamma * std::exp(-kI * ph + common - twist * k.chi_minus_s);
        }
    }
    k.A1 = -2.0 * k1 / s * k.bt_as;
    k.A2 = k.Q * k.Q / (2.0 * k1 * s) * k.gt_as;
    if (conv == Convention::Consistent) k.A2 *= std::exp(2.0 * kI * k.psi0);
    k.A3 = std::pow(s, alpha / (2.0 - alpha)) / (std::pow(2.0, (2.0 - 3.0 * alpha) / (2.0 - alpha)) * k1) *
           std::conj(k.gt_as);
    return k;
}

void require_log_range(const WedgePoint& wp) {
    if (!(wp.log4st > 1.0) || !(wp.t > 1.0))
        throw DomainError(fmt::format("wedge point t = {:.6g} too small for the large-t formulas (need 4st > e, t > 1)",
                                      wp.t));
}

double fast_phase(const WedgePoint& wp) { return phi0(wp.alpha, wp.s) * std::pow(wp.t, wp.alpha / (2.0 - wp.alpha)); }

Branch branch_of(CaseTag c, Side side) {
    if (c == CaseTag::CaseI) return side == Side::PlusX ? Branch::CaseIPlus : Branch::CaseIMinus;
    return side == Side::PlusX ? Branch::CaseIIPlus : Branch::CaseIIMinus;
}

void band_warning(const WedgePoint& wp, std::vector<std::string>& w) {
    if (wp.s < kBandLow || wp.s > kBandHigh)
        w.push_back(fmt::format("s = {:.6g} outside the working band [{}, {}]", wp.s, kBandLow, kBandHigh));
}

}  // namespace

std::string to_string(Side s) { return s == Side::PlusX ? "plus" : "minus"; }

Side side_from_string(const std::string& s) {
    if (s == "plus" || s == "+") return Side::PlusX;
    if (s == "minus" || s == "-") return Side::MinusX;
    throw DomainError("unknown side '" + s + "' (expected plus or minus)");
}

std::string to_string(Convention c) { return c == Convention::Printed ? "printed" : "consistent"; }

Convention convention_from_string(const std::string& s) {
    if (s == "printed") return Convention::Printed;
    if (s == "consistent") return Convention::Consistent;
    throw DomainError("unknown convention '" + s + "' (expected printed or consistent)");
}

std::string branch_id(Branch b) {
    switch (b) {
    case Branch::CaseIPlus: return "I+";
    case Branch::CaseIMinus: return "I-";
    case Branch::CaseIIPlus: return "II+";
    case Branch::CaseIIMinus: return "II-";
    }
    return "?";
}

WedgePoint wedge_point(double alpha, double s, double t, Side side) {
    const auto v = scaled_variables(alpha, s, t);
    WedgePoint wp;
    wp.alpha = alpha;
    wp.s = s;
    wp.t = t;
    wp.x = v.x;
    wp.xi = v.xi;
    wp.log4st = v.log4st;
    wp.side = side;
    return wp;
}

double phi0(double alpha, double s) {
    if (!(alpha > 0.0 && alpha <= 1.0) || !(s > 0.0)) throw DomainError("phi0: need alpha in (0, 1] and s > 0");
    return std::pow(2.0, 2.0 * alpha / (2.0 - alpha)) * std::pow(s, 2.0 / (2.0 - alpha));
}

PhaseCoefficients phase_coefficients(const Spectrum& sp, double alpha, double s, Convention conv) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("phase_coefficients: alpha must lie in (0, 1)");
    if (!(s > 0.0)) throw DomainError("phase_coefficients: s must be positive");
    PhaseCoefficients pc;
    pc.convention = conv;
    const bool printed = conv == Convention::Printed;
    const double a = alpha, two_a = 2.0 - alpha;
    const double c = (1.0 - a) / (kPi * two_a);
    const double psi = (1.0 - a) * (1.0 - a) / (kPi * two_a * two_a);
    pc.phi0 = phi0(a, s);
    pc.phi2 = c;
    pc.tilde_phi3 = c * (std::log(c) - 1.0);

    if (sp.case_tag() == CaseTag::CaseI) {
        const double la = case_I_scale(sp);
        const double lr = std::log(2.0 * s / la);
        const double weight = printed ? a / (kPi * (1.0 - a)) : a / (1.0 - a);
        pc.psi = printed ? psi : -psi;
        pc.hat_phi1 = pc.psi;
        pc.phi_I = 2.0 * c * lr;
        pc.phi4 = -lr / kPi;
        pc.hat_phi3 = c * (std::log(c) + std::log(2.0 * s / (la * la)) - 1.0);
        pc.phi31 = c * (std::log(c) + std::log(2.0 * s / (la * la)) + weight * lr - 1.0);
        pc.phi32 = c * (-std::log(c) + std::log(8.0 * s * s * s / (la * la)) - weight * lr + 1.0);
        const double u = (1.0 - a) / (kPi * two_a * two_a), v = (1.0 - a) * (1.0 - 2.0 * a) / (kPi * two_a * two_a);
        pc.phi11 = printed ? v : -u;
        pc.phi12 = printed ? u : -v;
    } else {
        const double laa = std::log(case_II_product(sp));
        pc.phi_II = (1.0 - a) / (kPi * (a - 2.0)) * laa;
        if (printed) {
            pc.phi51 = laa / (2.0 * kPi * (a - 2.0));
            pc.phi52 = (4.0 * a - 5.0) * pc.phi51;
            pc.hat_phi5 = (1.0 - a) / (2.0 * kPi * (a - 2.0)) * laa;
        } else {
            const double shift = a * laa / (2.0 * kPi * two_a);
            pc.phi51 = pc.phi_II - shift;
            pc.phi52 = pc.phi_II + shift;
            pc.hat_phi5 = pc.phi_II;
        }
    }
    return pc;
}

BetaGamma beta_gamma(const Spectrum& sp, const WedgePoint& wp, PhaseSource src, Convention conv) {
    BetaGamma bg;
    if (sp.reflectionless()) {
        bg.degenerate = true;
        return bg;
    }
    cplx chi_s;
    if (src == PhaseSource::Direct) {
        bg.nu = nu_hat(sp, wp.alpha, wp.s, wp.t);
        chi_s = chi_hat(sp, -wp.s, wp.alpha, wp.s, wp.t);
    } else {
        const auto e = chi_nu_expansion(sp, wp.alpha, wp.s, wp.t);
        bg.nu = e.nu;
        chi_s = e.chi_at_minus_s;
    }
    const Reflection r = reflection_coefficients(sp, -wp.xi);
    const cplx factor = 1.0 + kI * sp.k1() / wp.xi;
    bg.r1_hat = factor * r.r1;
    bg.r2_hat = r.r2 / factor;
    if (std::abs(bg.r1_hat) < 1e-10 || std::abs(bg.r2_hat) < 1e-10) {
        bg = BetaGamma{};
        bg.degenerate = true;
        return bg;
    }

    const cplx ln_pre = 0.5 * std::log(2.0 * kPi) - 0.5 * kPi * bg.nu;
    bg.beta = exp_log_gamma_ratio(ln_pre - 0.75 * kPi * kI, -kI * bg.nu) / bg.r1_hat;
    bg.gamma = exp_log_gamma_ratio(ln_pre - 0.25 * kPi * kI, kI * bg.nu) / bg.r2_hat;

    const double a = wp.alpha;
    const double common = (1.0 - a) / (2.0 - a) * std::log(wp.s) + (a + 2.0) / (2.0 * a - 4.0) * std::log(2.0);
    const cplx ph = kI * bg.nu * std::log(wp.s / 2.0);
    bg.beta_tilde = kI * bg.beta * std::exp(ph + common + 2.0 * chi_s);
    bg.gamma_tilde = -kI * bg.gamma * std::exp(-ph + common - 2.0 * chi_s);

    const CaseConstants k = case_constants(sp, a, wp.s, conv);
    const PhaseCoefficients pc = phase_coefficients(sp, a, wp.s, conv);
    bg.beta_tilde_as_const = k.bt_as;
    bg.gamma_tilde_as_const = k.gt_as;
    const double L = wp.log4st;
    if (sp.case_tag() == CaseTag::CaseI) {
        require_log_range(wp);
        const double l = std::log(L);
        const double psi_plus = pc.hat_phi1 * L * L + pc.phi2 * L * l + pc.hat_phi3 * L + pc.phi4 * l;
        const double root = std::sqrt(std::log(wp.t));
        bg.beta_tilde_as = k.bt_as * std::exp(kI * psi_plus) * root;
        bg.gamma_tilde_as = k.gt_as * std::exp(-kI * psi_plus) * root;
    } else {
        bg.beta_tilde_as = k.bt_as * std::exp(kI * pc.hat_phi5 * L);
        bg.gamma_tilde_as = k.gt_as * std::exp(-kI * pc.hat_phi5 * L);
    }
    return bg;
}

AsymptoticPrediction predict_q(const Spectrum& sp, const WedgePoint& wp, Convention conv) {
    require_log_range(wp);
    AsymptoticPrediction out;
    out.case_tag = sp.case_tag();
    out.branch = branch_of(out.case_tag, wp.side);
    band_warning(wp, out.warnings);

    const double a = wp.alpha;
    const double L = wp.log4st, l = std::log(L), lt = std::log(wp.t);
    const PhaseCoefficients pc = phase_coefficients(sp, a, wp.s, conv);
    const CaseConstants k = case_constants(sp, a, wp.s, conv);
    const double T = fast_phase(wp);
    const bool case_I = out.case_tag == CaseTag::CaseI;
    const bool corrections = !sp.reflectionless();
    // sqrt(ln t) weights the Case I corrections only
    const double root = case_I ? std::sqrt(lt) : 1.0;

    double psi1, psi2;
    if (case_I) {
        psi1 = T + pc.phi11 * L * L + pc.phi2 * L * l + pc.phi31 * L + pc.phi4 * l;
        psi2 = -T + pc.phi12 * L * L - pc.phi2 * L * l + pc.phi32 * L - pc.phi4 * l;
    } else {
        psi1 = T + pc.phi51 * L;
        psi2 = -T + pc.phi52 * L;
    }

    if (wp.side == Side::PlusX) {
        const double psi = case_I ? pc.psi * L * L + pc.phi_I * L + k.psi0 : pc.phi_II * L + k.psi0;
        out.leading = k.Q * std::exp(kI * psi);
        out.rough = out.leading;
        out.ledger = case_I ? PhaseLedger{0.0, pc.psi, 0.0, pc.phi_I, 0.0, k.psi0}
                            : PhaseLedger{0.0, 0.0, 0.0, pc.phi_II, 0.0, k.psi0};
        const double order_hi = (1.0 - a) / (a - 2.0);
        if (a < 2.0 / 3.0) {
            if (corrections)
                out.correction = std::pow(wp.t, a / (2.0 * a - 4.0)) * root *
                                 (k.A1 * std::exp(kI * psi1) + k.A2 * std::exp(kI * psi2));
            if (case_I)
                out.error_order = {a / (2.0 * a - 4.0), -0.5};
            else
                out.error_order = a < 0.5 ? ErrorOrder{a / (a - 2.0), 1.0} : ErrorOrder{order_hi, 1.0};
        } else {
            out.error_order = {order_hi, 1.0};
        }
        return out;
    }

    const double term_order = (4.0 - 3.0 * a) / (2.0 * a - 4.0);
    if (a <= 2.0 / 3.0) {
        out.bound_only = true;
        out.error_order = {1.0 / (a - 2.0), 1.0};
        return out;
    }
    if (corrections) out.correction = std::pow(wp.t, term_order) * root * k.A3 * std::exp(kI * psi1);
    const double arg3 = corrections ? std::arg(k.A3) : 0.0;
    out.ledger = case_I ? PhaseLedger{pc.phi0, pc.phi11, pc.phi2, pc.phi31, pc.phi4, arg3}
                        : PhaseLedger{pc.phi0, 0.0, 0.0, pc.phi51, 0.0, arg3};
    if (case_I)
        out.error_order = {term_order, -0.5};
    else
        out.error_order = a <= 0.8 ? ErrorOrder{1.0 / (a - 2.0), 1.0} : ErrorOrder{(6.0 - 5.0 * a) / (2.0 * a - 4.0), 0.5};
    return out;
}

AsymptoticPrediction gen_as_predict(const Spectrum& sp, const WedgePoint& wp) {
    AsymptoticPrediction out;
    out.case_tag = sp.case_tag();
    out.branch = branch_of(out.case_tag, wp.side);
    band_warning(wp, out.warnings);
    const double a = wp.alpha;
    if (wp.side == Side::PlusX)
        out.error_order = a > 2.0 / 3.0 ? ErrorOrder{-0.5, 0.5} : ErrorOrder{a / (a - 2.0), 1.0};
    else
        out.error_order = a > 0.8 ? ErrorOrder{(6.0 - 5.0 * a) / (2.0 * a - 4.0), 0.5} : ErrorOrder{1.0 / (a - 2.0), 1.0};

    if (sp.reflectionless()) {
        if (wp.side == Side::PlusX) out.leading = out.rough = sp.A();
        return out;
    }

    const BetaGamma bg = beta_gamma(sp, wp, PhaseSource::Direct);
    const double L = wp.log4st;
    const cplx slow = kI * a * bg.nu / (2.0 - a) * L;
    const double decay = std::pow(wp.t, a / (2.0 * a - 4.0));
    const double T = fast_phase(wp);
    const double k1 = sp.k1(), s = wp.s;
    cplx B12, B21;
    if (!bg.degenerate) {
        B12 = bg.beta_tilde * std::exp(kI * T - slow) * decay;
        B21 = bg.gamma_tilde * std::exp(-kI * T + slow) * decay;
    }

    if (wp.side == Side::PlusX) {
        const cplx chi0 = chi_hat(sp, 0.0, a, s, wp.t);
        const cplx delta = std::exp(kI * bg.nu * std::log(s) + chi0);
        const cplx d2 = delta * delta;
        out.leading = out.rough = sp.A() * d2;
        out.correction = sp.A() * sp.A() / (2.0 * k1 * s) * d2 * d2 * B21 - 2.0 * k1 / s * B12;
    } else {
        out.correction = 2.0 * s / k1 * std::exp((2.0 * a - 2.0) / (2.0 - a) * L) * std::conj(B21);
    }
    return out;
}

MatchingReport matching_check(const Spectrum& sp, double s, const std::vector<double>& alphas, double product) {
    if (!(s > 0.0) || !(product > 0.0)) throw DomainError("matching_check: need s > 0 and a positive (1-alpha) ln t");
    MatchingReport rep;
    rep.case_tag = sp.case_tag();
    rep.s = s;
    rep.phi0_at_one = phi0(1.0, s);
    const bool case_I = rep.case_tag == CaseTag::CaseI;

    // 2 arg of the small-xi form of delta(0, xi)
    cplx chi1;
    double laa = 0.0, la = 0.0;
    if (case_I)
        la = case_I_scale(sp);
    else if (!sp.reflectionless())
        laa = std::log(case_II_product(sp));
    if (!case_I) chi1 = chi_hat_1(sp);
    auto two_arg_delta = [&](double xi) {
        const double lx = std::log(xi);
        if (case_I) return 2.0 * (lx * std::log(la / (2.0 * xi)) / kPi + chi_hat_0(sp, xi).imag());
        return 2.0 * (lx * laa / (2.0 * kPi) + chi1.imag());
    };
    const double target = two_arg_delta(s);

    std::vector<double> xs, ys;
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw DomainError("matching_check: alpha must lie in (0, 1)");
        MatchingRow row;
        row.alpha = a;
        row.log_t = product / (1.0 - a);
        const double L = std::log(4.0 * s) + row.log_t;
        const PhaseCoefficients pc = phase_coefficients(sp, a, s, Convention::Consistent);
        const CaseConstants k = case_constants(sp, a, s, Convention::Consistent);
        const double psi = case_I ? pc.psi * L * L + pc.phi_I * L + k.psi0 : pc.phi_II * L + k.psi0;
        row.residual = std::abs(psi - target);
        const double xi_line = s * std::exp(-(1.0 - a) / (2.0 - a) * L);
        row.same_point_residual = std::abs(psi - two_arg_delta(xi_line));
        if (case_I && !sp.reflectionless()) {
            row.log_abs_minus_x = (4.0 - 3.0 * a) / (2.0 * a - 4.0) * row.log_t + 0.5 * std::log(row.log_t) +
                                  std::log(std::abs(k.A3));
            xs.push_back(row.log_t);
            ys.push_back(row.log_abs_minus_x);
        }
        rep.rows.push_back(row);
    }
    rep.residual_decreasing = rep.rows.size() >= 2;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].residual < rep.rows[i - 1].residual)) rep.residual_decreasing = false;

    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= double(xs.size());
        my /= double(ys.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        rep.minus_x_exponent = sxy / sxx;
    }

    if (!case_I) {
        rep.nu0 = laa / (2.0 * kPi);
        const cplx b0 = sp.b0();
        if (sp.reflectionless() || std::abs(b0) == 0.0) {
            rep.notes.push_back("b(0) = 0: the x<0 term vanishes and alpha_1 is not defined");
        } else {
            const double nu0 = rep.nu0;
            const cplx num = std::exp(-0.5 * kPi * nu0 + 0.25 * kPi * kI - 2.0 * std::conj(chi1) -
                                      3.0 * kI * nu0 * std::log(2.0) - log_gamma(cplx(0, -nu0)));
            rep.alpha1 = -std::sqrt(kPi) * num * s * sp.a21() / b0;
            // |A_3| at alpha = 1: 2s/k1 |gamma_tilde_as| with (1-alpha)/(2-alpha) -> 0
            const CaseConstants k = case_constants(sp, 1.0 - 1e-12, s, Convention::Consistent);
            rep.a3_limit_modulus = std::abs(k.A3);
            rep.notes.push_back(fmt::format("|alpha_1| = {:.10g}, |A_3(alpha -> 1)| = {:.10g}", std::abs(rep.alpha1),
                                            rep.a3_limit_modulus));
        }
    }
    return rep;
}

}  // namespace nnls
