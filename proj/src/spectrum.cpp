#include "nnls/spectrum.hpp"

#include <cmath>
#include <limits>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace nnls {

cplx Spectrum::log_one_plus_r1r2(double k) const {
    return log_regular(k) + 2.0 * log_weight() * std::log(std::abs(k));
}

cplx Spectrum::log_one_plus_r1r2_prime(double k) const {
    return log_regular_prime(k) + 2.0 * log_weight() / k;
}

Reflection reflection_coefficients(const Spectrum& s, double k) {
    const cplx a1 = s.a1(k), a2 = s.a2(k);
    if (std::abs(a1) < 1e-14 || std::abs(a2) < 1e-14)
        throw DomainError("reflection_coefficients: evaluation at a zero of a1 or a2");
    Reflection r;
    r.r1 = s.b(k) / a1;
    r.r2 = s.b_mirror(k) / a2;
    r.one_plus_r1r2 = 1.0 + r.r1 * r.r2;
    return r;
}

double check_assumption2(const Spectrum& s) {
    // arg(1 + r1 r2) = Im R in both cases; R is regular at the origin
    return s.log_regular(-1e-14).imag();
}

// ---------------------------------------------------------------- closed forms

PureStepSpectrum::PureStepSpectrum(double A) : A_(A) {
    if (!(A > 0.0)) throw DomainError("PureStepSpectrum: A must be positive");
}

cplx PureStepSpectrum::a1(double k) const { return 1.0 + A_ * A_ / (4.0 * k * k); }
cplx PureStepSpectrum::a2(double) const { return 1.0; }
cplx PureStepSpectrum::b(double k) const { return A_ / (2.0 * cplx(0, 1) * k); }
cplx PureStepSpectrum::log_regular(double k) const { return std::log(4.0 / (4.0 * k * k + A_ * A_)); }
cplx PureStepSpectrum::log_regular_prime(double k) const { return -8.0 * k / (4.0 * k * k + A_ * A_); }

SolitonSpectrum::SolitonSpectrum(double A) : A_(A) {
    if (!(A > 0.0)) throw DomainError("SolitonSpectrum: A must be positive");
}

cplx SolitonSpectrum::a1(double k) const { return (k - cplx(0, 0.5 * A_)) / k; }
cplx SolitonSpectrum::a2(double k) const { return k / (k - cplx(0, 0.5 * A_)); }

ModelCaseIISpectrum::ModelCaseIISpectrum(double A, double kappa, double beta0, double theta)
    : A_(A), kappa_(kappa), beta0_(beta0), theta_(theta) {
    if (!(A > 0.0) || !(kappa > 0.0) || !(std::abs(beta0) < 1.0) || !std::isfinite(theta))
        throw DomainError("ModelCaseIISpectrum: need A > 0, kappa > 0, |beta0| < 1");
}

cplx ModelCaseIISpectrum::a11() const { return cplx(0, -kappa_) * std::sqrt(1.0 - beta0_ * beta0_); }
cplx ModelCaseIISpectrum::a21() const { return cplx(0, 1.0 / kappa_) * std::sqrt(1.0 - beta0_ * beta0_); }

cplx ModelCaseIISpectrum::b(double k) const {
    const double d = k * k + kappa_ * kappa_;
    return beta0_ * kappa_ * kappa_ / d * std::polar(1.0, theta_ * kappa_ * k / d);
}

cplx ModelCaseIISpectrum::product(double k) const {
    const double d = k * k + kappa_ * kappa_;
    const double m = beta0_ * kappa_ * kappa_ / d;
    return m * m * std::polar(1.0, 2.0 * theta_ * kappa_ * k / d);
}

cplx ModelCaseIISpectrum::a1(double k) const { return (k - cplx(0, kappa_)) / k * std::sqrt(1.0 - product(k)); }
cplx ModelCaseIISpectrum::a2(double k) const { return k / (k - cplx(0, kappa_)) * std::sqrt(1.0 - product(k)); }

// |product| < 1 keeps 1 - product in the right half plane, so the principal log is continuous
cplx ModelCaseIISpectrum::log_regular(double k) const { return -std::log(1.0 - product(k)); }

cplx ModelCaseIISpectrum::log_regular_prime(double k) const {
    const double d = k * k + kappa_ * kappa_;
    const cplx P = product(k);
    const cplx dlogP = -4.0 * k / d + cplx(0, 2.0 * theta_ * kappa_ * (kappa_ * kappa_ - k * k) / (d * d));
    return P * dlogP / (1.0 - P);
}

// ---------------------------------------------------------------- sampled

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

class ComplexSpline {
public:
    ComplexSpline(const std::vector<cplx>& v, double u0, double h)
        : re_(make(v, u0, h, false)), im_(make(v, u0, h, true)) {}
    cplx operator()(double u) const { return {re_(u), im_(u)}; }
    cplx prime(double u) const { return {re_.prime(u), im_.prime(u)}; }
    cplx double_prime(double u) const { return {re_.double_prime(u), im_.double_prime(u)}; }

private:
    static Spline make(const std::vector<cplx>& v, double u0, double h, bool imag) {
        std::vector<double> d(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) d[i] = imag ? v[i].imag() : v[i].real();
        return Spline(d.begin(), d.end(), u0, h);
    }
    Spline re_, im_;
};

}  // namespace

struct SampledSpectrum::Side {
    double m_min, m_max, u0, h;
    ComplexSpline w1, a2, kb, lr;
    cplx L_at_max;

    // value and d/dm of a spline quantity as a function of m = |k|; below m_min
    // the second-order Taylor extension at m_min is used.
    std::pair<cplx, cplx> eval(const ComplexSpline& s, double m) const {
        if (m >= m_min) {
            const double u = std::log(m);
            return {s(u), s.prime(u) / m};
        }
        const cplx fu = s.prime(u0);
        const cplx f = s(u0), fp = fu / m_min, fpp = (s.double_prime(u0) - fu) / (m_min * m_min);
        const double d = m - m_min;
        return {f + fp * d + 0.5 * fpp * d * d, fp + fpp * d};
    }
    void require_inside(double m) const {
        if (m > m_max * (1.0 + 1e-12))
            throw DomainError("SampledSpectrum: |k| beyond the sampled range");
    }
};

SampledSpectrum::SampledSpectrum(SpectralData sd) : sd_(std::move(sd)) {
    const std::size_t n = sd_.k.size() / 2;
    if (n < 8 || sd_.k.size() != 2 * n) throw DomainError("SampledSpectrum: need >= 8 samples per sign");
    const double u0 = std::log(sd_.grid.k_min), u1 = std::log(sd_.grid.k_max);
    const double h = (u1 - u0) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(std::log(std::abs(sd_.k[n + i])) - (u0 + h * i)) > 1e-9 ||
            std::abs(sd_.k[n - 1 - i] + sd_.k[n + i]) > 1e-12 * std::abs(sd_.k[n + i]))
            throw DomainError("SampledSpectrum: grid must be symmetric and uniform in ln|k|");

    const int c = sd_.case_tag == CaseTag::CaseI ? 1 : 0;
    auto build = [&](bool negative) {
        const auto L = unwrapped_log_samples(sd_, negative);
        std::vector<cplx> w1(n), a2(n), kb(n), lr(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = negative ? n - 1 - i : n + i;
            const double k = sd_.k[j];
            w1[i] = k * k * sd_.a1[j];
            a2[i] = sd_.a2[j];
            kb[i] = k * sd_.b[j];
            lr[i] = L[i] - 2.0 * c * std::log(std::abs(k));
        }
        return std::unique_ptr<Side>(new Side{sd_.grid.k_min, sd_.grid.k_max, u0, h, ComplexSpline(w1, u0, h),
                                              ComplexSpline(a2, u0, h), ComplexSpline(kb, u0, h),
                                              ComplexSpline(lr, u0, h), L[n - 1]});
    };
    neg_ = build(true);
    pos_ = build(false);

    double bmax = 0.0;
    for (const auto& v : sd_.b) bmax = std::max(bmax, std::abs(v));
    reflectionless_ = bmax <= 1e-8;
}

SampledSpectrum::~SampledSpectrum() = default;

const SampledSpectrum::Side& SampledSpectrum::side(double k) const {
    if (k == 0.0) throw DomainError("SampledSpectrum: k = 0");
    return k < 0.0 ? *neg_ : *pos_;
}

cplx SampledSpectrum::a1(double k) const {
    const Side& s = side(k);
    s.require_inside(std::abs(k));
    return s.eval(s.w1, std::abs(k)).first / (k * k);
}

cplx SampledSpectrum::a2(double k) const {
    const Side& s = side(k);
    s.require_inside(std::abs(k));
    return s.eval(s.a2, std::abs(k)).first;
}

cplx SampledSpectrum::b(double k) const {
    const Side& s = side(k);
    s.require_inside(std::abs(k));
    return s.eval(s.kb, std::abs(k)).first / k;
}

cplx SampledSpectrum::log_regular(double k) const {
    const Side& s = side(k);
    const double m = std::abs(k);
    if (m <= s.m_max) return s.eval(s.lr, m).first;
    const double r = s.m_max / m;
    return s.L_at_max * (r * r) - 2.0 * log_weight() * std::log(m);
}

cplx SampledSpectrum::log_regular_prime(double k) const {
    const Side& s = side(k);
    const double m = std::abs(k);
    const double sign = k < 0.0 ? -1.0 : 1.0;
    if (m <= s.m_max) return sign * s.eval(s.lr, m).second;
    const double r = s.m_max / m;
    return sign * (-2.0 * s.L_at_max * (r * r) / m - 2.0 * log_weight() / m);
}

}  // namespace nnls
