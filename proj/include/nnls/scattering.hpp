#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnls/profiles.hpp"
#include "nnls/special_functions.hpp"

namespace nnls {

enum class CaseTag { CaseI, CaseII };

std::string to_string(CaseTag c);
CaseTag case_tag_from_string(const std::string& s);

using Mat2 = Eigen::Matrix2cd;

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DiagnosticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct JostOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
};

struct JostPair {
    Mat2 psi1;  // Psi_1(0,0,k): normalized to N_-(k) for x <= -R
    Mat2 psi2;  // Psi_2(0,0,k): normalized to N_+(k) for x >= R
};

// Jost matrices at x = 0 (t = 0) for real k != 0, from the linear ODE for
// Psi_j e^{ikx sigma3} integrated from -R (resp. R) to 0.
JostPair jost_at_origin(const InitialProfile& p, double k, const JostOptions& opt = {});

// Scattering matrix S(k) = Psi_2(0)^{-1} Psi_1(0) = [[a1, -conj b(-k)], [b, a2]].
Mat2 scattering_matrix_at(const InitialProfile& p, double k, const JostOptions& opt = {});

// a1(i rho) for rho > 0 as the Wronskian of the decaying columns; real up to round-off.
cplx a1_on_imaginary_axis(const InitialProfile& p, double rho, const JostOptions& opt = {});

struct KGridSpec {
    double k_min = 1e-3;
    double k_max = 1e2;
    int n_per_sign = 400;
};

// Symmetric grid: -k_max .. -k_min, k_min .. k_max, log-spaced in |k|.
std::vector<double> make_k_grid(const KGridSpec& g);

struct SpectralData {
    double A = 1.0;
    KGridSpec grid;
    std::vector<double> k;
    std::vector<cplx> a1, a2, b;
    double k1 = 0.0;
    CaseTag case_tag = CaseTag::CaseI;
    double a2_0 = 0.0;  // Case I (v-route value)
    cplx a11, a21;      // Case II
    cplx b0;            // b(0), meaningful in Case II
    double a2_0_extrapolated = 0.0;
    double assumption2 = 0.0;
    std::string fingerprint;

    std::size_t mirror(std::size_t j) const { return k.size() - 1 - j; }
    // conj(b(-k_j)) from the mirrored sample
    cplx b_mirror(std::size_t j) const { return std::conj(b[mirror(j)]); }
};

// Samples a1, a2, b on the grid (0 must not be a grid point).
SpectralData scattering_samples(const InitialProfile& p, const KGridSpec& g, const JostOptions& opt = {});

// a2(0) by Picard iteration of the v1/v2 Volterra system on [-R, 0].
double a2_at_zero_volterra(const InitialProfile& p, int n_intervals = 1 << 14);

struct SmallKData {
    double a2_0 = 0.0;
    double a2_0_extrapolated = 0.0;
    cplx a11, a21, b0;
};

SmallKData small_k_data(const InitialProfile& p, const SpectralData& sd);

double case_epsilon(double A);
CaseTag classify_case(const SpectralData& sd);

// k1 as the zero of a1(i rho) on [1e-3 A, 1e3 A].
double locate_k1(const InitialProfile& p, const JostOptions& opt = {});

// Full pipeline: samples, k1, small-k data, Case tag, Assumption 2 value.
SpectralData compute_spectral_data(const InitialProfile& p, const KGridSpec& g = {},
                                   const JostOptions& opt = {});

struct IdentityResiduals {
    double det_s = 0.0;       // max |a1 a2 + b conj(b(-k)) - 1|
    double symmetry_a1 = 0.0; // max |conj(a1(-k)) - a1(k)|
    double symmetry_a2 = 0.0;
    double tail_a1 = 0.0;     // max |a1 - 1| |k| over the tail |k| >= 10
};

IdentityResiduals spectral_identities(const SpectralData& sd);

// ln(1 + r1 r2) = -ln(a1 a2) at the nodes of one side of the grid, ordered by
// increasing |k|, with the argument unwrapped from |k| = k_max (where it is
// taken as the principal value, i.e. pinned to the branch vanishing at infinity).
std::vector<cplx> unwrapped_log_samples(const SpectralData& sd, bool negative_side);

void save_spectral_cache(const SpectralData& sd, const std::string& path);
SpectralData load_spectral_cache(const std::string& path);

}  // namespace nnls
