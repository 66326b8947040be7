#pragma once

#include <array>
#include <string>
#include <vector>

#include "nnls/phase_functionals.hpp"

namespace nnls {

enum class Side { PlusX, MinusX };

std::string to_string(Side s);
Side side_from_string(const std::string& s);

// A point on the curve t = x^{2-alpha}/(4s). For side MinusX the field is
// evaluated at -x.
struct WedgePoint {
    double alpha = 0.5;
    double s = 1.0;
    double t = 1.0;
    double x = 0.0;
    double xi = 0.0;
    double log4st = 0.0;
    Side side = Side::PlusX;
};

WedgePoint wedge_point(double alpha, double s, double t, Side side = Side::PlusX);

// phi_0 = 2^{2 alpha/(2-alpha)} s^{2/(2-alpha)}; defined for alpha in (0, 1].
double phi0(double alpha, double s);

// Printed: the coefficient formulas as published. Consistent: the values that
// reproduce the direct-quadrature phases (see README, "Coefficient conventions").
enum class Convention { Printed, Consistent };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

// Each coefficient is stored with the sign it carries in the phase it
// multiplies, so Psi_I = psi ln^2 4st + phi_I ln 4st + const in both conventions.
// Coefficients belonging to the other case are zero.
struct PhaseCoefficients {
    Convention convention = Convention::Printed;
    double psi = 0, phi_I = 0, phi_II = 0, phi0 = 0;
    double phi11 = 0, phi12 = 0, phi2 = 0, phi31 = 0, phi32 = 0, phi4 = 0;
    double phi51 = 0, phi52 = 0;
    double tilde_phi3 = 0, hat_phi1 = 0, hat_phi3 = 0, hat_phi5 = 0;
};

PhaseCoefficients phase_coefficients(const Spectrum& sp, double alpha, double s,
                                     Convention c = Convention::Printed);

enum class PhaseSource { Direct, Expansion };

struct BetaGamma {
    bool degenerate = false;  // zero-correction sentinel: everything below is 0
    cplx nu;
    cplx r1_hat, r2_hat;      // r^R_j(-s)
    cplx beta, gamma;
    cplx beta_tilde, gamma_tilde;
    // large-t forms: full approximations and their t-independent constants
    cplx beta_tilde_as, gamma_tilde_as;
    cplx beta_tilde_as_const, gamma_tilde_as_const;
};

BetaGamma beta_gamma(const Spectrum& sp, const WedgePoint& wp, PhaseSource src = PhaseSource::Direct,
                     Convention c = Convention::Consistent);

enum class Branch { CaseIPlus, CaseIMinus, CaseIIPlus, CaseIIMinus };

// Short identifiers "I+", "I-", "II+", "II-".
std::string branch_id(Branch b);

// Phase of the dominant term split as
// {t^{alpha/(2-alpha)}, ln^2 4st, ln 4st ln ln 4st, ln 4st, ln ln 4st, constant}.
using PhaseLedger = std::array<double, 6>;

struct AsymptoticPrediction {
    cplx leading;
    cplx correction;
    cplx rough;  // Q e^{i Psi} for x > 0, 0 for x < 0
    PhaseLedger ledger{};
    ErrorOrder error_order;
    CaseTag case_tag = CaseTag::CaseI;
    Branch branch = Branch::CaseIPlus;
    bool bound_only = false;  // only an error bound is available on this branch
    std::vector<std::string> warnings;

    cplx value() const { return leading + correction; }
};

AsymptoticPrediction predict_q(const Spectrum& sp, const WedgePoint& wp,
                               Convention c = Convention::Consistent);

// Mid-level prediction built from directly computed nu_hat, chi_hat and the
// exact beta/gamma; used as an oracle for predict_q.
AsymptoticPrediction gen_as_predict(const Spectrum& sp, const WedgePoint& wp);

struct MatchingRow {
    double alpha = 0;
    double log_t = 0;
    double residual = 0;             // |Psi(alpha) - 2 arg delta_as(s)|
    double same_point_residual = 0;  // delta_as evaluated at xi = x/(4t)
    double log_abs_minus_x = 0;      // ln |q(-x,t)| of the x<0 term (Case I)
};

struct MatchingReport {
    CaseTag case_tag = CaseTag::CaseI;
    double s = 1;
    std::vector<MatchingRow> rows;
    bool residual_decreasing = false;
    double phi0_at_one = 0;      // phi_0(1, s)
    double minus_x_exponent = 0; // fitted exponent of |q(-x,t)| in t (Case I)
    double nu0 = 0;              // Case II
    cplx alpha1;                 // Case II constant of the x<0 term at alpha = 1
    double a3_limit_modulus = 0; // |A_3| at alpha -> 1 (Case II)
    std::vector<std::string> notes;
};

// alpha ladder approaching 1 with (1 - alpha) ln t = product held fixed.
MatchingReport matching_check(const Spectrum& sp, double s, const std::vector<double>& alphas,
                              double product = 1.0);

}  // namespace nnls
