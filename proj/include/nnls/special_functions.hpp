#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace nnls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Analytic continuation of ln Gamma (real on the positive axis, cut along
// the negative axis), accurate to ~1e-13 relative for |Im z| <= 50.
cplx log_gamma(cplx z);

// Real dilogarithm Li2(x) for x <= 1.
double dilog(double x);

enum class EndpointLog { None, LogAtLeftEnd, LogAtRightEnd };

struct QuadratureSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 4000;
    EndpointLog endpoint = EndpointLog::None;
};

struct QuadResult {
    cplx value;
    double error = 0.0;
    int subdivisions = 0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, cplx best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
    cplx best_estimate;
    double error_estimate;
};

using Integrand = std::function<cplx(double)>;

// Adaptive Gauss-Kronrod 7/15. `a` may be -infinity. Throws
// ConvergenceError when the subdivision budget is exhausted.
QuadResult quad(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

// Convenience wrapper returning only the value.
cplx integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

class NotBracketedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Zero of a real function on [lo, hi] by a bracketing secant/bisection hybrid
// (TOMS 748). The returned point satisfies |f| < f_tol.
double find_imag_axis_zero(const std::function<double(double)>& f, double lo, double hi,
                           double f_tol = 1e-10);

}  // namespace nnls
