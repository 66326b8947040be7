#pragma once

#include <string>
#include <vector>

#include "nnls/special_functions.hpp"

namespace nnls {

enum class ProfileKind { PureStep, SmoothedStep, CompactStep, SolitonSnapshot };

std::string to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);

struct InitialProfile {
    ProfileKind kind = ProfileKind::SmoothedStep;
    double A = 1.0;
    double w = 1.0;
    double R = 20.0;
    double phi = 0.0;

    void validate() const;
    // Value of q0 at a single point. Outside [-R, R] the value is exactly 0 or A.
    cplx operator()(double x) const;
    // Stable textual key identifying the profile (used to tag spectral caches).
    std::string fingerprint() const;
};

// Throws DomainError unless x_j == -x_{N-1-j} (to a few ulps of the grid span).
void require_symmetric_grid(const std::vector<double>& x);

std::vector<cplx> sample_profile(const InitialProfile& p, const std::vector<double>& grid);

class BlowUpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One-soliton solution A / (1 - exp(-A x - i A^2 t + i phi)).
cplx soliton_exact(double A, double phi, double x, double t);

}  // namespace nnls
