#include "nnls/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace nnls {

namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoef = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

cplx log_gamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) x += kLanczosCoef[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx sinpi(cplx z) {
    // exact zeros of sin/cos at (half-)integers keep the value off the wrong side of the log cut
    const double x = z.real(), y = z.imag();
    const double re = boost::math::sin_pi(x) * std::cosh(kPi * y);
    const double im = boost::math::cos_pi(x) * std::sinh(kPi * y);
    return {re, im == 0.0 ? 0.0 : im};
}

}  // namespace

cplx log_gamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("log_gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return log_gamma_right(z);
    // Reflection, with the 2*pi*i shift that keeps the result on the analytic branch.
    const double shift = std::copysign(2.0 * kPi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
    return cplx(std::log(kPi), shift) - std::log(sinpi(z)) - log_gamma_right(1.0 - z);
}

double dilog(double x) {
    if (x > 1.0) throw DomainError("dilog: argument above 1");
    if (x == 1.0) return kPi * kPi / 6.0;
    if (x < 0.0) {
        // Landen: maps (-inf, 0) into (0, 1)
        const double l = std::log1p(-x);
        return -dilog(x / (x - 1.0)) - 0.5 * l * l;
    }
    if (x > 0.5) return kPi * kPi / 6.0 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
    double sum = 0.0, p = x;
    for (int n = 1; n < 200; ++n) {
        const double term = p / (double(n) * n);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        p *= x;
    }
    return sum;
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& g, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = g(c);
    cplx kron = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const cplx f1 = g(c - dx), f2 = g(c + dx);
        kron += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

// Exponential endpoint map cutoff: e^u below this contributes nothing measurable.
constexpr double kLogCut = -50.66;  // ln(1e-22)

}  // namespace

QuadResult quad(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        throw DomainError("quad: invalid QuadratureSpec");
    if (std::isinf(b) || (std::isinf(a) && a > 0)) throw DomainError("quad: upper limit must be finite");
    if (a == b) return {cplx(0.0), 0.0, 0};

    Integrand g;
    double lo = 0.0, hi = 1.0;
    if (std::isinf(a)) {
        if (spec.endpoint != EndpointLog::None)
            throw DomainError("quad: endpoint log flag requires finite limits");
        g = [&f, b](double u) {
            const double z = b - (1.0 - u) / u;
            return f(z) / (u * u);
        };
    } else if (spec.endpoint == EndpointLog::LogAtLeftEnd) {
        const double w = b - a;
        g = [&f, a, w](double u) {
            const double e = std::exp(u);
            return f(a + w * e) * (w * e);
        };
        lo = kLogCut;
        hi = 0.0;
    } else if (spec.endpoint == EndpointLog::LogAtRightEnd) {
        const double w = b - a;
        g = [&f, b, w](double u) {
            const double e = std::exp(u);
            return f(b - w * e) * (w * e);
        };
        lo = kLogCut;
        hi = 0.0;
    } else {
        g = [&f](double z) { return f(z); };
        lo = a;
        hi = b;
    }

    std::priority_queue<Segment> heap;
    std::vector<Segment> frozen;
    Segment first = gk15(g, lo, hi);
    cplx total = first.value;
    double err = first.error;
    heap.push(first);
    int n = 1;
    while (!heap.empty() && err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (n >= spec.max_subdivisions)
            throw ConvergenceError("quad: subdivision limit reached", total, err);
        Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b) ||
            (s.b - s.a) < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
            frozen.push_back(s);
            continue;
        }
        Segment l = gk15(g, s.a, mid), r = gk15(g, mid, s.b);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++n;
    }
    // Re-sum from the pieces to shed the drift of incremental updates.
    cplx sum = 0.0;
    double esum = 0.0;
    for (const auto& s : frozen) {
        sum += s.value;
        esum += s.error;
    }
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    if (esum > std::max(spec.abs_tol, spec.rel_tol * std::abs(sum)) && !frozen.empty())
        throw ConvergenceError("quad: roundoff limit reached", sum, esum);
    return {sum, esum, n};
}

cplx integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    return quad(f, a, b, spec).value;
}

double find_imag_axis_zero(const std::function<double(double)>& f, double lo, double hi, double f_tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) throw NotBracketedError("find_imag_axis_zero: no sign change in bracket");
    boost::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::abs(x - y) <= 4e-16 * std::max(std::abs(x), std::abs(y)); };
    auto [x0, x1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    const double f0 = f(x0), f1 = f(x1);
    const double root = std::abs(f0) <= std::abs(f1) ? x0 : x1;
    const double fr = std::min(std::abs(f0), std::abs(f1));
    if (!(fr < f_tol))
        throw ConvergenceError("find_imag_axis_zero: residual above tolerance", cplx(root), fr);
    return root;
}

}  // namespace nnls
