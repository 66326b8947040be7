#pragma once

#include <string>
#include <vector>

#include "nnls/spectrum.hpp"

namespace nnls {

// Variables of the curve t = x^{2-alpha}/(4s): x = (4st)^{1/(2-alpha)},
// X = x^{1-alpha} and the rescaled stationary point xi = s/X.
struct ScaledVariables {
    double x = 0.0;
    double X = 0.0;
    double xi = 0.0;
    double log4st = 0.0;
};

ScaledVariables scaled_variables(double alpha, double s, double t);

class LogSingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

// Remainder of an expansion as t^{t_exponent} (ln t)^{log_power}.
struct ErrorOrder {
    double t_exponent = 0.0;
    double log_power = 0.0;
};

std::string to_string(const ErrorOrder& e);

enum class PhaseMethod { DirectQuadrature, AsymptoticExpansion };

struct PhaseFunctionalResult {
    cplx nu;
    cplx chi_at_zero;       // chi_hat(0, s, t)
    cplx chi_at_minus_s;    // chi_hat(-s, s, t)
    cplx chi_const;         // chi_hat_0(s) in Case I, chi_hat_1 in Case II
    cplx chi_const_minus_s; // chi_hat_{-s}(s) in Case I, chi_hat_1 in Case II
    double plateau = 0.0;   // t -> infinity limit of Re chi_hat
    PhaseMethod method = PhaseMethod::DirectQuadrature;
    ErrorOrder nu_order, chi_order;
    double max_quadrature_error = 0.0;
    std::vector<std::string> warnings;
};

// -ln(1 + r1 r2)/(2 pi) at k = -xi on the continuous branch.
cplx nu_hat(const Spectrum& sp, double alpha, double s, double t);

// -(1/2 pi i) int_{-inf}^{-xi} ln(z - k X) d ln(1 + r1 r2)(k), z >= -s.
// In Case I the 2/k part of the integrand below |k| = 1 is integrated in
// closed form (exactly for z = 0 and z = -s).
cplx chi_hat(const Spectrum& sp, double z, double alpha, double s, double t,
             const QuadratureSpec& q = {}, double* error = nullptr);

cplx delta0(const Spectrum& sp, double xi, const QuadratureSpec& q = {});
cplx delta0_expansion(const Spectrum& sp, double xi);

// (1/2 pi) int_{-inf}^0 arg(1 + r1 r2)/zeta dzeta and Q = A exp(2 * plateau).
double re_chi_plateau(const Spectrum& sp);
double amplitude_Q(const Spectrum& sp);

// Case I: (i/2 pi)(ln^2 s + int_{-inf}^{-1} ln(-k) dL + int_{-1}^0 ln(-k) dR).
cplx chi_hat_0(const Spectrum& sp, double s);
// Case II: (i/2 pi) int_{-inf}^0 ln(-k) dL.
cplx chi_hat_1(const Spectrum& sp);

inline constexpr double kBandLow = 0.05;
inline constexpr double kBandHigh = 20.0;

// All functionals at (alpha, s, t) by quadrature.
PhaseFunctionalResult phase_functionals_direct(const Spectrum& sp, double alpha, double s, double t);

// Large-t expansions of nu_hat and chi_hat. Throws AssumptionViolation when
// arg(1 + r1 r2) does not vanish at k -> 0-.
PhaseFunctionalResult chi_nu_expansion(const Spectrum& sp, double alpha, double s, double t);

}  // namespace nnls
