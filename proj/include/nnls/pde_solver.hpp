#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nnls/profiles.hpp"

namespace nnls {

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<cplx> q;

    double h() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
    // Four-point Lagrange interpolation of q at a point inside the grid.
    cplx at(double xp) const;
};

// First t > 0 at which the one-soliton denominator vanishes (at x = 0).
double soliton_blow_up_time(double A, double phi);

// Uniform grid of n points (odd) on [-L, L]; x_j = -x_{n-1-j} exactly.
std::vector<double> symmetric_grid(double L, std::size_t n);

// RK4 on the fourth-order Laplacian is stable for dt <= 0.53 h^2; keep a margin.
inline constexpr double kStabilityConstant = 0.5;

struct EvolveParams {
    double L = 40.0;
    std::size_t N = 4001;
    double dt = 0.0;  // 0: the largest step <= kStabilityConstant h^2 dividing T
    double T = 1.0;
    std::size_t stride = 0;  // steps between snapshots; 0 keeps only the first and last

    double h() const { return 2.0 * L / static_cast<double>(N - 1); }
    void validate() const;
};

// 2 q(x_j)^2 conj(q(x_{n-1-j})).
std::vector<cplx> mirror_nonlinearity(const FieldSnapshot& snap);

// Trapezoid value of int q(x) conj(q(-x)) dx.
cplx conserved_probe(const FieldSnapshot& snap);

enum class EvolveStatus { Completed, BlowUp, BoundaryDrift };

std::string to_string(EvolveStatus s);

struct EvolveResult {
    EvolveParams params;
    InitialProfile profile;
    EvolveStatus status = EvolveStatus::Completed;
    std::string message;
    std::vector<FieldSnapshot> snapshots;  // partial when status != Completed
    std::vector<cplx> probes;              // conserved_probe per snapshot
    double max_boundary_drift = 0.0;       // over all steps, within the edge layers
    std::size_t steps = 0;

    bool ok() const { return status == EvolveStatus::Completed; }
};

inline constexpr double kBlowUpFactor = 1e3;
inline constexpr double kBoundaryDriftLimit = 1e-3;

// i q_t = -q_xx - 2 q^2 conj(q(-x)) with q(-L) = 0 and q(L) = A pinned.
// Aborts (with the snapshots so far) when |q| exceeds kBlowUpFactor * A or
// when the field within 1% of either edge departs from the pinned value by
// more than kBoundaryDriftLimit.
// `profile` in the result is left default by evolve_field.
EvolveResult evolve(const InitialProfile& p, const EvolveParams& ep);

// Same scheme from an arbitrary field on symmetric_grid(L, N), pinned to 0 on
// the left and `right` on the right; the blow-up scale is max(|right|, |q0|).
// Time runs from q0.t to q0.t + T.
EvolveResult evolve_field(FieldSnapshot q0, double right, const EvolveParams& ep);

// CSV: '#'-prefixed metadata lines, then "t,x,re_q,im_q" rows.
void write_snapshots_csv(std::ostream& os, const EvolveResult& r);

// Binary cache, all little-endian:
//   char[8] "NNLSQ001", u64 snapshot count M, u64 grid size N,
//   f64 x[N], then per snapshot f64 t and N pairs (f64 re, f64 im).
void write_snapshots_binary(std::ostream& os, const std::vector<FieldSnapshot>& snaps);
std::vector<FieldSnapshot> read_snapshots_binary(std::istream& is);

}  // namespace nnls
