#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "nnls/spectrum.hpp"

using namespace nnls;

namespace {

const cplx I(0.0, 1.0);

InitialProfile pure_step(double A) { return {ProfileKind::PureStep, A, 0.0, 20.0, 0.0}; }
// R = 40 keeps the clamping error e^{-AR} below what 1/k amplification at k_min exposes
InitialProfile soliton(double A) { return {ProfileKind::SolitonSnapshot, A, 0.0, 40.0 / A, kPi}; }
InitialProfile smoothed() { return {ProfileKind::SmoothedStep, 1.0, 1.0, 20.0, 0.0}; }

const SpectralData& smoothed_data() {
    static const SpectralData sd = compute_spectral_data(smoothed());
    return sd;
}

const SpectralData& soliton_data() {
    static const SpectralData sd = compute_spectral_data(soliton(1.0));
    return sd;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pure step Jost matrices are the constant-background solutions") {
    const double A = 2.0, k = 0.7;
    const JostPair j = jost_at_origin(pure_step(A), k);
    Mat2 nm, np;
    const cplx n = A / (2.0 * I * k);
    nm << 1.0, 0.0, n, 1.0;
    np << 1.0, n, 0.0, 1.0;
    CHECK(max_abs(j.psi1 - nm) < 1e-13);
    CHECK(max_abs(j.psi2 - np) < 1e-13);
}

TEST_CASE("vanishing amplitude gives identity Jost matrices") {
    const JostPair j = jost_at_origin(pure_step(1e-13), 0.9);
    CHECK(max_abs(j.psi1 - Mat2::Identity()) < 1e-12);
    CHECK(max_abs(j.psi2 - Mat2::Identity()) < 1e-12);
}

TEST_CASE("Jost determinants are conserved") {
    const JostPair j = jost_at_origin(smoothed(), 1.0);
    CHECK(std::abs(j.psi1.determinant() - 1.0) < 1e-10);
    CHECK(std::abs(j.psi2.determinant() - 1.0) < 1e-10);
    CHECK_THROWS_AS(jost_at_origin(smoothed(), 0.0), DomainError);
}

TEST_CASE("scattering matrix closed forms") {
    Mat2 ref;
    ref << 2.0, I, -I, 1.0;
    CHECK(max_abs(scattering_matrix_at(pure_step(2.0), 1.0) - ref) < 1e-12);

    const cplx d = 1.0 - 0.5 * I;
    Mat2 sol;
    sol << d, 0.0, 0.0, 1.0 / d;
    CHECK(max_abs(scattering_matrix_at(soliton(1.0), 1.0) - sol) < 1e-6);

    for (auto p : {smoothed(), soliton(1.0), InitialProfile{ProfileKind::CompactStep, 1.5, 2.0, 10.0, 0.0}})
        for (double k : {-30.0, -1.3, -0.01, 0.2, 5.0})
            CHECK(std::abs(scattering_matrix_at(p, k).determinant() - 1.0) < 1e-10);
}

TEST_CASE("a1 on the imaginary axis and k1") {
    CHECK(std::abs(a1_on_imaginary_axis(pure_step(2.0), 0.5) - (1.0 - 4.0 / (4.0 * 0.25))) < 1e-10);
    CHECK(locate_k1(pure_step(2.0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(locate_k1(soliton(1.0)) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(a1_on_imaginary_axis(smoothed(), 2.0).imag()) < 1e-10);
}

TEST_CASE("k-grid layout") {
    const auto k = make_k_grid({});
    REQUIRE(k.size() == 800);
    CHECK(k.front() == -100.0);
    CHECK(k[399] == -1e-3);
    CHECK(k[400] == 1e-3);
    CHECK(k.back() == 100.0);
    for (std::size_t j = 0; j < k.size(); ++j) CHECK(k[j] == -k[k.size() - 1 - j]);
    CHECK_THROWS_AS(make_k_grid({1.0, 0.5, 10}), DomainError);
}

TEST_CASE("a2(0) from the Volterra route") {
    CHECK(a2_at_zero_volterra(pure_step(1.7)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(a2_at_zero_volterra(soliton(1.0))) < 1e-8);
    // a2(0) of the tanh step, cross-checked against a direct integration of the v-system
    CHECK(a2_at_zero_volterra(smoothed()) == doctest::Approx(0.6366197723675814).epsilon(1e-9));
}

TEST_CASE("pure step spectral data reproduce the closed forms") {
    for (double A : {1.0, 2.0}) {
        const SpectralData sd = compute_spectral_data(pure_step(A));
        const PureStepSpectrum ref(A);
        double err = 0.0;
        for (std::size_t j = 0; j < sd.k.size(); ++j) {
            const double k = sd.k[j];
            err = std::max({err, std::abs(sd.a1[j] - ref.a1(k)), std::abs(sd.a2[j] - ref.a2(k)),
                            std::abs(sd.b[j] - ref.b(k)), std::abs(sd.b_mirror(j) - ref.b_mirror(k))});
        }
        CHECK(err < 1e-6);
        CHECK(sd.case_tag == CaseTag::CaseI);
        CHECK(sd.k1 == doctest::Approx(A / 2).epsilon(1e-6));
        CHECK(sd.a2_0 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(sd.assumption2) < 1e-12);
    }
}

TEST_CASE("soliton spectral data") {
    const SpectralData& sd = soliton_data();
    const SolitonSpectrum ref(1.0);
    double bmax = 0.0, err = 0.0;
    for (std::size_t j = 0; j < sd.k.size(); ++j) {
        bmax = std::max(bmax, std::abs(sd.b[j]));
        err = std::max({err, std::abs(sd.a1[j] / ref.a1(sd.k[j]) - 1.0), std::abs(sd.a2[j] / ref.a2(sd.k[j]) - 1.0)});
    }
    CHECK(bmax < 1e-8);
    CHECK(err < 1e-6);
    CHECK(sd.case_tag == CaseTag::CaseII);
    CHECK(std::abs(sd.a11 - cplx(0, -0.5)) < 1e-6);
    CHECK(std::abs(sd.a21 - cplx(0, 2.0)) < 1e-6);
    CHECK(std::abs(sd.a11 * sd.a21 - 1.0) < 1e-6);
}

TEST_CASE("smoothed step: classification and spectral identities") {
    const SpectralData& sd = smoothed_data();
    CHECK(sd.case_tag == CaseTag::CaseI);
    CHECK(std::abs(sd.a2_0) > 0.5);
    const IdentityResiduals r = spectral_identities(sd);
    CHECK(r.det_s < 1e-8);
    CHECK(r.symmetry_a1 < 1e-8);
    CHECK(r.symmetry_a2 < 1e-8);
    CHECK(r.tail_a1 < 1.0);
    // k^2 a1 -> A^2 a2(0)/4 as k -> 0
    const std::size_t n = sd.k.size() / 2;
    double prev = 1e9;
    for (std::size_t i = 4; i-- > 0;) {
        const std::size_t j = n + i;
        const double d = std::abs(sd.k[j] * sd.k[j] * sd.a1[j] - sd.A * sd.A * sd.a2_0 / 4.0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-3);
    CHECK(assumption2_holds(sd.assumption2));
}

TEST_CASE("classification rejects a11 a21 <= 0") {
    SpectralData sd;
    sd.A = 1.0;
    sd.a2_0 = 0.0;
    sd.a11 = cplx(0, 1);
    sd.a21 = cplx(0, 1);
    CHECK_THROWS_AS(classify_case(sd), AssumptionViolation);
    sd.a21 = 0.0;
    CHECK_THROWS_AS(classify_case(sd), AssumptionViolation);
    sd.a2_0 = 1e-3;
    CHECK(classify_case(sd) == CaseTag::CaseI);
}

TEST_CASE("reflection coefficients") {
    const PureStepSpectrum ps(2.0);
    const Reflection r = reflection_coefficients(ps, -1.0);
    CHECK(std::abs(r.r1 - 0.5 * I) < 1e-15);
    CHECK(std::abs(r.r2 - I) < 1e-15);
    CHECK(std::abs(r.one_plus_r1r2 - 0.5) < 1e-15);

    const SolitonSpectrum so(1.0);
    for (double k : {-3.0, -0.1, 0.4}) {
        const Reflection rs = reflection_coefficients(so, k);
        CHECK(std::abs(rs.r1) == 0.0);
        CHECK(std::abs(rs.r2) == 0.0);
    }

    const SampledSpectrum sm(smoothed_data());
    const double A = sm.A(), a20 = sm.a2_0();
    double prev = 1e9;
    for (double k : {-0.1, -0.03, -0.01, -0.003}) {
        const cplx ratio = reflection_coefficients(sm, k).one_plus_r1r2 / (4 * k * k / (A * A * a20 * a20));
        CHECK(std::abs(ratio - 1.0) < prev);
        prev = std::abs(ratio - 1.0);
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("Assumption 2 limit") {
    CHECK(check_assumption2(PureStepSpectrum(2.0)) == 0.0);
    CHECK(check_assumption2(SolitonSpectrum(1.0)) == 0.0);
    CHECK(std::abs(check_assumption2(SampledSpectrum(smoothed_data()))) < 1e-2);
}

TEST_CASE("sampled pure step matches the closed form") {
    const SampledSpectrum s(compute_spectral_data(pure_step(2.0)));
    const PureStepSpectrum ref(2.0);
    for (double k : {-150.0, -37.0, -2.2, -1.0, -0.31, -0.02, -4e-4, 3e-3, 0.5, 12.0}) {
        CAPTURE(k);
        CHECK(std::abs(s.log_regular(k) - ref.log_regular(k)) < 1e-6);
        CHECK(std::abs(s.log_regular_prime(k) - ref.log_regular_prime(k)) < 1e-5);
        if (std::abs(k) <= 100.0) {
            CHECK(std::abs(s.a1(k) / ref.a1(k) - 1.0) < 1e-6);
            CHECK(std::abs(s.b(k) / ref.b(k) - 1.0) < 1e-6);
        }
    }
    CHECK_THROWS_AS(s.a1(-200.0), DomainError);
}

TEST_CASE("model Case II spectrum satisfies the spectral identities") {
  for (double theta : {0.0, 1.5}) {
    const ModelCaseIISpectrum m(1.0, 0.5, 0.6, theta);
    CHECK(std::abs(check_assumption2(m)) < 1e-12);
    for (double k : {-7.0, -0.3, -1e-3, 2e-2, 1.1}) {
        CHECK(std::abs(m.a1(k) * m.a2(k) + m.b(k) * m.b_mirror(k) - 1.0) < 1e-14);
        CHECK(std::abs(std::conj(m.a1(-k)) - m.a1(k)) < 1e-14);
        CHECK(std::abs(m.log_one_plus_r1r2(k) - std::log(reflection_coefficients(m, k).one_plus_r1r2)) < 1e-14);
        const double h = 1e-6;
        const cplx fd = (m.log_regular(k + h) - m.log_regular(k - h)) / (2 * h);
        CHECK(std::abs(fd - m.log_regular_prime(k)) < 1e-8);
    }
    CHECK(std::abs(m.a11() * m.a21() - 0.64) < 1e-15);
  }
}

TEST_CASE("spectral cache round trip") {
    const SpectralData& sd = soliton_data();
    const std::string path = "test_cache_roundtrip.json";
    save_spectral_cache(sd, path);
    const SpectralData back = load_spectral_cache(path);
    std::remove(path.c_str());
    CHECK(back.fingerprint == sd.fingerprint);
    CHECK(back.case_tag == sd.case_tag);
    CHECK(back.k == sd.k);
    CHECK(back.a1 == sd.a1);
    CHECK(back.b == sd.b);
    CHECK(back.a11 == sd.a11);
    CHECK(back.k1 == sd.k1);
    CHECK_THROWS(load_spectral_cache("does-not-exist.json"));
}
