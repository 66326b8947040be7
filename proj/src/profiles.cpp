#include "nnls/profiles.hpp"

#include <cmath>

#include <fmt/format.h>

namespace nnls {

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::PureStep: return "PureStep";
        case ProfileKind::SmoothedStep: return "SmoothedStep";
        case ProfileKind::CompactStep: return "CompactStep";
        case ProfileKind::SolitonSnapshot: return "SolitonSnapshot";
    }
    return "?";
}

ProfileKind profile_kind_from_string(const std::string& s) {
    for (auto k : {ProfileKind::PureStep, ProfileKind::SmoothedStep, ProfileKind::CompactStep,
                   ProfileKind::SolitonSnapshot})
        if (s == to_string(k)) return k;
    throw DomainError("unknown profile kind '" + s + "'");
}

void InitialProfile::validate() const {
    if (!(A > 0.0) || !std::isfinite(A)) throw DomainError("profile: amplitude A must be positive");
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("profile: width w must be nonnegative");
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("profile: support radius R must be positive");
    if (!std::isfinite(phi)) throw DomainError("profile: phase must be finite");
    if (kind == ProfileKind::CompactStep && w > R)
        throw DomainError("profile: CompactStep needs w <= R");
    if (kind == ProfileKind::SolitonSnapshot && std::abs(1.0 - std::exp(cplx(0.0, phi))) < 1e-8)
        throw DomainError("profile: soliton phase places the singularity at x = 0");
}

cplx InitialProfile::operator()(double x) const {
    if (x <= -R) return 0.0;
    if (x >= R) return A;
    switch (kind) {
        case ProfileKind::PureStep:
            return x < 0.0 ? 0.0 : (x > 0.0 ? A : 0.5 * A);
        case ProfileKind::SmoothedStep:
            if (w == 0.0) return x < 0.0 ? 0.0 : (x > 0.0 ? A : 0.5 * A);
            return 0.5 * A * (1.0 + std::tanh(x / w));
        case ProfileKind::CompactStep: {
            if (w == 0.0) return x < 0.0 ? 0.0 : (x > 0.0 ? A : 0.5 * A);
            if (x <= -w) return 0.0;
            if (x >= w) return A;
            const double u = 0.5 * (x + w) / w;
            return A * u * u * (3.0 - 2.0 * u);
        }
        case ProfileKind::SolitonSnapshot:
            return A / (1.0 - std::exp(cplx(-A * x, phi)));
    }
    return 0.0;
}

std::string InitialProfile::fingerprint() const {
    return fmt::format("{};A={:.17g};w={:.17g};R={:.17g};phi={:.17g}", to_string(kind), A, w, R, phi);
}

void require_symmetric_grid(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n == 0) throw DomainError("grid: empty");
    const double span = std::abs(x.front()) + std::abs(x.back());
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(x[j] + x[n - 1 - j]) > 1e-12 * span)
            throw DomainError("grid: not symmetric about 0");
}

std::vector<cplx> sample_profile(const InitialProfile& p, const std::vector<double>& grid) {
    p.validate();
    require_symmetric_grid(grid);
    std::vector<cplx> q(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) q[j] = p(grid[j]);
    return q;
}

cplx soliton_exact(double A, double phi, double x, double t) {
    const cplx den = 1.0 - std::exp(cplx(-A * x, -A * A * t + phi));
    if (std::abs(den) < 1e-8) throw BlowUpError("soliton_exact: too close to the blow-up locus");
    return A / den;
}

}  // namespace nnls
