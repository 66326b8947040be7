#include "nnls/pde_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace nnls {

static_assert(std::endian::native == std::endian::little, "binary snapshot format assumes a little-endian host");

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr char kMagic[8] = {'N', 'N', 'L', 'S', 'Q', '0', '0', '1'};

// q_t = i (q_xx + N[q]) with the end nodes pinned; the nodes next to the pins
// use the three-point stencil since the five-point one would reach past them.
void rhs(const std::vector<cplx>& q, double h, std::vector<cplx>& out) {
    const std::size_t n = q.size();
    const double c2 = 1.0 / (h * h), c4 = 1.0 / (12.0 * h * h);
    out[0] = out[n - 1] = 0.0;
    out[1] = (q[0] - 2.0 * q[1] + q[2]) * c2;
    out[n - 2] = (q[n - 3] - 2.0 * q[n - 2] + q[n - 1]) * c2;
    for (std::size_t j = 2; j + 2 < n; ++j)
        out[j] = (-q[j - 2] + 16.0 * q[j - 1] - 30.0 * q[j] + 16.0 * q[j + 1] - q[j + 2]) * c4;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const cplx v = q[j];
        out[j] = kI * (out[j] + 2.0 * v * v * std::conj(q[n - 1 - j]));
    }
}

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("snapshot file truncated");
    return v;
}

}  // namespace

double soliton_blow_up_time(double A, double phi) {
    double r = std::fmod(phi, 2.0 * kPi);
    if (r <= 0.0) r += 2.0 * kPi;
    return r / (A * A);
}

cplx FieldSnapshot::at(double xp) const {
    const std::size_t n = x.size();
    if (n < 4 || xp < x.front() || xp > x.back()) throw DomainError(fmt::format("point {} outside the grid", xp));
    const double hh = h();
    auto j = static_cast<std::ptrdiff_t>(std::floor((xp - x.front()) / hh)) - 1;
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n) - 4);
    cplx v = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (xp - x[j + b]) / (x[j + a] - x[j + b]);
        v += w * q[j + a];
    }
    return v;
}

std::vector<double> symmetric_grid(double L, std::size_t n) {
    if (!(L > 0.0)) throw DomainError("grid: L must be positive");
    if (n < 5 || n % 2 == 0) throw DomainError("grid: need an odd number of points >= 5");
    std::vector<double> x(n);
    const std::size_t m = n / 2;
    const double h = L / static_cast<double>(m);
    x[m] = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        x[m + k] = k == m ? L : h * static_cast<double>(k);
        x[m - k] = -x[m + k];
    }
    return x;
}

void EvolveParams::validate() const {
    if (!(L > 0.0)) throw DomainError("evolve: L must be positive");
    if (N < 5 || N % 2 == 0) throw DomainError("evolve: N must be odd and >= 5");
    if (!(T >= 0.0)) throw DomainError("evolve: T must be nonnegative");
    if (dt < 0.0) throw DomainError("evolve: dt must be nonnegative");
    if (dt > kStabilityConstant * h() * h())
        throw DomainError(fmt::format("evolve: dt = {} exceeds the stability limit {} h^2 = {}", dt,
                                      kStabilityConstant, kStabilityConstant * h() * h()));
}

std::vector<cplx> mirror_nonlinearity(const FieldSnapshot& snap) {
    require_symmetric_grid(snap.x);
    if (snap.q.size() != snap.x.size()) throw DomainError("snapshot: q and x differ in length");
    const std::size_t n = snap.q.size();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = 2.0 * snap.q[j] * snap.q[j] * std::conj(snap.q[n - 1 - j]);
    return out;
}

cplx conserved_probe(const FieldSnapshot& snap) {
    const std::size_t n = snap.q.size();
    if (n < 2) return 0.0;
    cplx sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx f = snap.q[j] * std::conj(snap.q[n - 1 - j]);
        sum += (j == 0 || j + 1 == n) ? 0.5 * f : f;
    }
    return sum * snap.h();
}

std::string to_string(EvolveStatus s) {
    switch (s) {
        case EvolveStatus::Completed: return "completed";
        case EvolveStatus::BlowUp: return "blow-up";
        case EvolveStatus::BoundaryDrift: return "boundary-drift";
    }
    return "?";
}

EvolveResult evolve_field(FieldSnapshot cur, double right, const EvolveParams& ep_in) {
    EvolveParams ep = ep_in;
    ep.validate();
    if (cur.x.size() != ep.N || cur.q.size() != ep.N) throw DomainError("evolve: initial field does not match N");
    require_symmetric_grid(cur.x);
    const double h = ep.h();
    std::size_t steps = 0;
    if (ep.T > 0.0) {
        const double cap = ep.dt > 0.0 ? ep.dt : kStabilityConstant * h * h;
        steps = static_cast<std::size_t>(std::ceil(ep.T / cap - 1e-9));
        ep.dt = ep.T / static_cast<double>(steps);
    }

    EvolveResult res;
    res.params = ep;
    const std::size_t n = ep.N;
    const double t0 = cur.t;
    cur.q.front() = 0.0;
    cur.q.back() = right;
    double scale = std::abs(right);
    for (const auto& v : cur.q) scale = std::max(scale, std::abs(v));

    auto record = [&] {
        res.snapshots.push_back(cur);
        res.probes.push_back(conserved_probe(cur));
    };
    record();

    const std::size_t layer = std::max<std::size_t>(2, n / 100);
    const double limit = kBlowUpFactor * scale;
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double dt = ep.dt;
    for (std::size_t s = 1; s <= steps; ++s) {
        const auto& q = cur.q;
        rhs(q, h, k1);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = q[j] + 0.5 * dt * k1[j];
        rhs(tmp, h, k2);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = q[j] + 0.5 * dt * k2[j];
        rhs(tmp, h, k3);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = q[j] + dt * k3[j];
        rhs(tmp, h, k4);
        double peak = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cur.q[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            const double m = std::abs(cur.q[j]);
            peak = std::isnan(m) ? m : std::isnan(peak) ? peak : std::max(peak, m);
        }
        cur.t = t0 + static_cast<double>(s) * dt;
        res.steps = s;

        double drift = 0.0;
        for (std::size_t j = 1; j <= layer; ++j) {
            drift = std::max(drift, std::abs(cur.q[j]));
            drift = std::max(drift, std::abs(cur.q[n - 1 - j] - right));
        }
        res.max_boundary_drift = std::max(res.max_boundary_drift, drift);

        if (!(peak <= limit)) {
            res.status = EvolveStatus::BlowUp;
            res.message = fmt::format("|q| reached {:.3g} > {:.3g} at t = {:.6g}", peak, limit, cur.t);
            record();
            return res;
        }
        if (drift > kBoundaryDriftLimit) {
            res.status = EvolveStatus::BoundaryDrift;
            res.message = fmt::format("field near the edges moved by {:.3g} at t = {:.6g}; enlarge L", drift, cur.t);
            record();
            return res;
        }
        if (s == steps || (ep.stride > 0 && s % ep.stride == 0)) record();
    }
    return res;
}

EvolveResult evolve(const InitialProfile& p, const EvolveParams& ep) {
    p.validate();
    ep.validate();
    if (p.kind == ProfileKind::SolitonSnapshot && ep.T >= soliton_blow_up_time(p.A, p.phi))
        throw DomainError(fmt::format("evolve: T = {} is past the soliton blow-up time {}", ep.T,
                                      soliton_blow_up_time(p.A, p.phi)));
    FieldSnapshot q0;
    q0.x = symmetric_grid(ep.L, ep.N);
    q0.q = sample_profile(p, q0.x);
    auto res = evolve_field(std::move(q0), p.A, ep);
    res.profile = p;
    return res;
}

void write_snapshots_csv(std::ostream& os, const EvolveResult& r) {
    fmt::print(os, "# profile: {}\n", r.profile.fingerprint());
    fmt::print(os, "# L: {:.17g}\n# N: {}\n# dt: {:.17g}\n# T: {:.17g}\n", r.params.L, r.params.N, r.params.dt,
               r.params.T);
    fmt::print(os, "# status: {}\n", to_string(r.status));
    if (!r.message.empty()) fmt::print(os, "# message: {}\n", r.message);
    fmt::print(os, "# max_boundary_drift: {:.6e}\n", r.max_boundary_drift);
    os << "t,x,re_q,im_q\n";
    for (const auto& s : r.snapshots)
        for (std::size_t j = 0; j < s.x.size(); ++j)
            fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.x[j], s.q[j].real(), s.q[j].imag());
}

void write_snapshots_binary(std::ostream& os, const std::vector<FieldSnapshot>& snaps) {
    os.write(kMagic, sizeof kMagic);
    const std::uint64_t n = snaps.empty() ? 0 : snaps.front().x.size();
    put<std::uint64_t>(os, snaps.size());
    put<std::uint64_t>(os, n);
    if (snaps.empty()) return;
    for (double v : snaps.front().x) put(os, v);
    for (const auto& s : snaps) {
        if (s.q.size() != n) throw DomainError("snapshots on different grids");
        put(os, s.t);
        for (const auto& v : s.q) {
            put(os, v.real());
            put(os, v.imag());
        }
    }
}

std::vector<FieldSnapshot> read_snapshots_binary(std::istream& is) {
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("not a snapshot file");
    const auto m = get<std::uint64_t>(is);
    const auto n = get<std::uint64_t>(is);
    std::vector<double> x(n);
    if (m > 0)
        for (auto& v : x) v = get<double>(is);
    std::vector<FieldSnapshot> out(m);
    for (auto& s : out) {
        s.x = x;
        s.t = get<double>(is);
        s.q.resize(n);
        for (auto& v : s.q) {
            const double re = get<double>(is);
            v = cplx(re, get<double>(is));
        }
    }
    return out;
}

}  // namespace nnls
