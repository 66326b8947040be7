#pragma once

#include <array>
#include <memory>

#include "nnls/scattering.hpp"

namespace nnls {

// Spectral functions on the real k axis together with the scalars the
// asymptotic formulas need. The logarithm L(k) = ln(1 + r1 r2) is the
// continuous branch that vanishes at k -> -infinity; in Case I it is split as
// L = R + 2 ln|k| with R regular at k = 0 (in Case II, R = L).
class Spectrum {
public:
    virtual ~Spectrum() = default;

    virtual double A() const = 0;
    virtual CaseTag case_tag() const = 0;
    virtual double k1() const = 0;
    virtual double a2_0() const { return 0.0; }
    virtual cplx a11() const { return 0.0; }
    virtual cplx a21() const { return 0.0; }
    virtual cplx b0() const { return 0.0; }
    virtual bool reflectionless() const { return false; }

    virtual cplx a1(double k) const = 0;
    virtual cplx a2(double k) const = 0;
    virtual cplx b(double k) const = 0;
    cplx b_mirror(double k) const { return std::conj(b(-k)); }

    virtual cplx log_regular(double k) const = 0;
    virtual cplx log_regular_prime(double k) const = 0;

    int log_weight() const { return case_tag() == CaseTag::CaseI ? 1 : 0; }
    cplx log_one_plus_r1r2(double k) const;
    cplx log_one_plus_r1r2_prime(double k) const;
};

struct Reflection {
    cplx r1, r2, one_plus_r1r2;
};

// r1 = b/a1, r2 = conj(b(-k))/a2. Throws DomainError at a zero of a1 or a2.
Reflection reflection_coefficients(const Spectrum& s, double k);

// lim_{k->0-} of the unwrapped arg(1 + r1 r2). Assumption 2 asks for 0.
double check_assumption2(const Spectrum& s);
inline bool assumption2_holds(double limit) { return std::abs(limit) <= 1e-2; }

class PureStepSpectrum final : public Spectrum {
public:
    explicit PureStepSpectrum(double A);
    double A() const override { return A_; }
    CaseTag case_tag() const override { return CaseTag::CaseI; }
    double k1() const override { return 0.5 * A_; }
    double a2_0() const override { return 1.0; }
    cplx a1(double k) const override;
    cplx a2(double k) const override;
    cplx b(double k) const override;
    cplx log_regular(double k) const override;
    cplx log_regular_prime(double k) const override;

private:
    double A_;
};

class SolitonSpectrum final : public Spectrum {
public:
    explicit SolitonSpectrum(double A);
    double A() const override { return A_; }
    CaseTag case_tag() const override { return CaseTag::CaseII; }
    double k1() const override { return 0.5 * A_; }
    cplx a11() const override { return {0.0, -0.5 * A_}; }
    cplx a21() const override { return {0.0, 2.0 / A_}; }
    bool reflectionless() const override { return true; }
    cplx a1(double k) const override;
    cplx a2(double k) const override;
    cplx b(double) const override { return 0.0; }
    cplx log_regular(double) const override { return 0.0; }
    cplx log_regular_prime(double) const override { return 0.0; }

private:
    double A_;
};

// Case II spectral data with
//   b(k) = beta0 kappa^2/(k^2 + kappa^2) exp(i theta kappa k/(k^2 + kappa^2)),
//   a1 = (k - i kappa)/k * m, a2 = k/(k - i kappa) * m, m = sqrt(1 - b(k) conj(b(-k))).
// Satisfies a1 a2 + b conj(b(-k)) = 1 and the conjugation symmetries exactly;
// a11 a21 = 1 - beta0^2, b(0) = beta0, k1 = kappa. theta != 0 makes
// 1 + r1 r2 complex while keeping its argument zero at k = 0.
class ModelCaseIISpectrum final : public Spectrum {
public:
    ModelCaseIISpectrum(double A, double kappa, double beta0, double theta = 0.0);
    double A() const override { return A_; }
    CaseTag case_tag() const override { return CaseTag::CaseII; }
    double k1() const override { return kappa_; }
    cplx a11() const override;
    cplx a21() const override;
    cplx b0() const override { return beta0_; }
    cplx a1(double k) const override;
    cplx a2(double k) const override;
    cplx b(double k) const override;
    cplx log_regular(double k) const override;
    cplx log_regular_prime(double k) const override;

private:
    cplx product(double k) const;  // b(k) conj(b(-k))
    double A_, kappa_, beta0_, theta_;
};

// Spline-backed spectrum built from sampled data. Interpolation runs in
// u = ln|k| on each sign of k (the default grid is uniform in u).
class SampledSpectrum final : public Spectrum {
public:
    explicit SampledSpectrum(SpectralData sd);
    ~SampledSpectrum() override;
    SampledSpectrum(const SampledSpectrum&) = delete;
    SampledSpectrum& operator=(const SampledSpectrum&) = delete;

    const SpectralData& data() const { return sd_; }
    double A() const override { return sd_.A; }
    CaseTag case_tag() const override { return sd_.case_tag; }
    double k1() const override { return sd_.k1; }
    double a2_0() const override { return sd_.a2_0; }
    cplx a11() const override { return sd_.a11; }
    cplx a21() const override { return sd_.a21; }
    cplx b0() const override { return sd_.b0; }
    bool reflectionless() const override { return reflectionless_; }
    cplx a1(double k) const override;
    cplx a2(double k) const override;
    cplx b(double k) const override;
    cplx log_regular(double k) const override;
    cplx log_regular_prime(double k) const override;

private:
    struct Side;
    SpectralData sd_;
    bool reflectionless_ = false;
    std::unique_ptr<Side> neg_, pos_;
    const Side& side(double k) const;
};

}  // namespace nnls
