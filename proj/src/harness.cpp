#include "nnls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

namespace nnls {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<std::string> parts;
    boost::split(parts, v, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<double> out;
    for (auto& p : parts)
        if (!p.empty()) out.push_back(to_double(key, p));
    return out;
}

std::vector<Side> to_sides(const std::string& v) {
    if (v == "both") return {Side::PlusX, Side::MinusX};
    std::vector<std::string> parts;
    boost::split(parts, v, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<Side> out;
    for (auto& p : parts) {
        if (p.empty()) continue;
        try {
            out.push_back(side_from_string(p));
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("wedge.side: unknown side '{}'", p));
        }
    }
    return out;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= double(x.size());
    my /= double(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

// Phase basis matching PhaseLedger.
std::array<double, 6> ledger_basis(const WedgePoint& wp) {
    const double L = wp.log4st, l = std::log(L);
    return {std::pow(wp.t, wp.alpha / (2.0 - wp.alpha)), L * L, L * l, L, l, 1.0};
}

double ledger_sum(const ComparisonRecord& r) {
    const auto b = ledger_basis(r.wp);
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += r.pred.ledger[i] * b[i];
    return s;
}

cplx dominant(const AsymptoticPrediction& p) { return p.leading != cplx(0.0) ? p.leading : p.correction; }

std::string csv_quote(const std::vector<std::string>& w) {
    std::string s = boost::algorithm::join(w, "; ");
    boost::replace_all(s, "\"", "\"\"");
    return "\"" + s + "\"";
}

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

void write_rows(std::ostream& os, const std::vector<ComparisonRecord>& rows, bool with_pde) {
    fmt::print(os, "# nnls-csv v{} {}\n", kCsvSchemaVersion, with_pde ? "comparison" : "predictions");
    os << "branch,alpha,s,t,side,x,xi,leading_re,leading_im,correction_re,correction_im,value_re,value_im,"
          "rough_re,rough_im,gen_as_re,gen_as_im,error_order,bound_only,ledger_fast,ledger_ln2,ledger_ln_lnln,"
          "ledger_ln,ledger_lnln,ledger_const,ledger_residual";
    if (with_pde) os << ",pde_re,pde_im,abs_gap,rel_gap,rough_gap";
    os << ",warnings\n";
    for (const auto& r : rows) {
        const auto& p = r.pred;
        const auto v = p.value(), g = r.gen.value();
        fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", branch_id(p.branch),
                   fmt_num(r.wp.alpha), fmt_num(r.wp.s), fmt_num(r.wp.t), to_string(r.wp.side), fmt_num(r.wp.x),
                   fmt_num(r.wp.xi), fmt_num(p.leading.real()), fmt_num(p.leading.imag()),
                   fmt_num(p.correction.real()), fmt_num(p.correction.imag()), fmt_num(v.real()),
                   fmt_num(v.imag()), fmt_num(p.rough.real()), fmt_num(p.rough.imag()), fmt_num(g.real()),
                   fmt_num(g.imag()), to_string(p.error_order), p.bound_only ? 1 : 0);
        for (double c : p.ledger) os << ',' << fmt_num(c);
        os << ',' << fmt_num(r.ledger_residual);
        if (with_pde) {
            if (r.pde)
                fmt::print(os, ",{},{},{},{},{}", fmt_num(r.pde->real()), fmt_num(r.pde->imag()), fmt_num(r.abs_gap),
                           fmt_num(r.rel_gap), fmt_num(r.rough_gap));
            else
                os << ",,,,,";
        }
        os << ',' << csv_quote(p.warnings) << '\n';
    }
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", (fs::path(dir) / name).string()));
    return f;
}

SpectralData spectral_data_for(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const auto path = fs::path(out_dir) / cfg.out.cache;
    if (fs::exists(path)) {
        auto sd = load_spectral_cache(path.string());
        if (sd.fingerprint == cfg.profile.fingerprint()) return sd;
        fmt::print(log, "cache {} belongs to another profile; recomputing\n", path.string());
    }
    auto sd = compute_spectral_data(cfg.profile, cfg.kgrid);
    fs::create_directories(out_dir);
    save_spectral_cache(sd, path.string());
    fmt::print(log, "wrote {}\n", path.string());
    return sd;
}

}  // namespace

void Tolerances::set(const std::string& key, double value) {
    if (!(value > 0.0)) throw ConfigError(fmt::format("tolerance {} must be positive", key));
    if (key == "gap") gap = value;
    else if (key == "drift") drift = value;
    else if (key == "ledger_fit") ledger_fit = value;
    else if (key == "exponent") exponent = value;
    else throw ConfigError(fmt::format("unknown tolerance '{}'", key));
}

double ExperimentConfig::max_wedge_x() const {
    double x = 0.0;
    for (double a : wedge.alpha)
        for (double s : wedge.s)
            for (double t : wedge.t) x = std::max(x, wedge_point(a, s, t).x);
    return x;
}

EvolveParams ExperimentConfig::evolve_params() const {
    EvolveParams ep;
    ep.L = pde.L > 0.0 ? pde.L : 10.0 * std::ceil(0.2 * max_wedge_x());
    const auto half = static_cast<std::size_t>(std::llround(ep.L / pde.h));
    ep.N = 2 * half + 1;
    ep.dt = pde.dt;
    ep.T = wedge.t.empty() ? 0.0 : wedge.t.back();
    ep.stride = pde.stride;
    return ep;
}

void ExperimentConfig::validate(bool with_pde) const {
    try {
        profile.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("profile: ") + e.what());
    }
    if (!(kgrid.k_min > 0.0 && kgrid.k_max > kgrid.k_min && kgrid.n_per_sign >= 8))
        throw ConfigError("kgrid: need 0 < k_min < k_max and n_per_sign >= 8");
    for (double a : wedge.alpha)
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("wedge.alpha: values must lie in (0, 1)");
    for (double s : wedge.s)
        if (!(s > 0.0)) throw ConfigError("wedge.s: values must be positive");
    for (std::size_t i = 0; i < wedge.t.size(); ++i)
        if (!(wedge.t[i] > 1.0) || (i > 0 && !(wedge.t[i] > wedge.t[i - 1])))
            throw ConfigError("wedge.t: the ladder must be strictly increasing and above 1");
    if (wedge.sides.empty()) throw ConfigError("wedge.side: no side given");
    for (double a : match.alpha)
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("match.alpha: values must lie in (0, 1)");
    if (!(match.product > 0.0) || !(match.s > 0.0)) throw ConfigError("match: product and s must be positive");
    if (!with_pde) return;
    if (pde.skip) throw ConfigError("pde: this command needs mode = run");
    if (!(pde.h > 0.0)) throw ConfigError("pde.h must be positive");
    const auto ep = evolve_params();
    try {
        ep.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("pde: ") + e.what());
    }
    if (profile.kind == ProfileKind::SolitonSnapshot && ep.T >= soliton_blow_up_time(profile.A, profile.phi))
        throw ConfigError(fmt::format("pde: t = {} is past the soliton blow-up time {}", ep.T,
                                      soliton_blow_up_time(profile.A, profile.phi)));
    if (max_wedge_x() >= 0.95 * ep.L)
        throw ConfigError(fmt::format("pde: wedge point x = {:.6g} is not inside the domain L = {:.6g}", max_wedge_x(),
                                      ep.L));
}

ExperimentConfig parse_config(std::istream& is) {
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    const std::map<std::string, std::vector<std::string>> known{
        {"profile", {"kind", "A", "w", "R", "phi"}},
        {"kgrid", {"k_min", "k_max", "n_per_sign"}},
        {"wedge", {"alpha", "s", "t", "side", "convention"}},
        {"pde", {"mode", "L", "h", "dt", "stride"}},
        {"match", {"alpha", "product", "s"}},
        {"output", {"cache", "predictions", "comparison", "summary", "match", "snapshots"}},
        {"tolerance", {"gap", "drift", "ledger_fit", "exponent"}},
    };
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end()) throw ConfigError(fmt::format("config: unknown section [{}]", section));
        for (const auto& [key, val] : body) {
            const auto& keys = it->second;
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ConfigError(fmt::format("config: unknown key {}.{}", section, key));
            const std::string v = val.data();
            const std::string name = section + "." + key;
            if (section == "profile") {
                if (key == "kind") {
                    try {
                        c.profile.kind = profile_kind_from_string(v);
                    } catch (const DomainError& e) {
                        throw ConfigError(std::string("profile.kind: ") + e.what());
                    }
                } else {
                    const double d = to_double(name, v);
                    if (key == "A") c.profile.A = d;
                    else if (key == "w") c.profile.w = d;
                    else if (key == "R") c.profile.R = d;
                    else c.profile.phi = d;
                }
            } else if (section == "kgrid") {
                const double d = to_double(name, v);
                if (key == "k_min") c.kgrid.k_min = d;
                else if (key == "k_max") c.kgrid.k_max = d;
                else c.kgrid.n_per_sign = static_cast<int>(d);
            } else if (section == "wedge") {
                if (key == "alpha") c.wedge.alpha = to_list(name, v);
                else if (key == "s") c.wedge.s = to_list(name, v);
                else if (key == "t") c.wedge.t = to_list(name, v);
                else if (key == "side") c.wedge.sides = to_sides(v);
                else {
                    try {
                        c.wedge.convention = convention_from_string(v);
                    } catch (const std::exception&) {
                        throw ConfigError(fmt::format("wedge.convention: unknown value '{}'", v));
                    }
                }
            } else if (section == "pde") {
                if (key == "mode") {
                    if (v != "run" && v != "skip") throw ConfigError("pde.mode must be run or skip");
                    c.pde.skip = v == "skip";
                } else {
                    const double d = to_double(name, v);
                    if (key == "L") c.pde.L = d;
                    else if (key == "h") c.pde.h = d;
                    else if (key == "dt") c.pde.dt = d;
                    else c.pde.stride = static_cast<std::size_t>(d);
                }
            } else if (section == "match") {
                if (key == "alpha") c.match.alpha = to_list(name, v);
                else if (key == "product") c.match.product = to_double(name, v);
                else c.match.s = to_double(name, v);
            } else if (section == "output") {
                if (key == "cache") c.out.cache = v;
                else if (key == "predictions") c.out.predictions = v;
                else if (key == "comparison") c.out.comparison = v;
                else if (key == "summary") c.out.summary = v;
                else if (key == "match") c.out.match = v;
                else c.out.snapshots = v;
            } else {
                c.tol.set(key, to_double(name, v));
            }
        }
    }
    c.validate(false);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(fmt::format("cannot open config {}", path));
    return parse_config(f);
}

// segments keep the ladder times exact whatever the step size
EvolveResult run_pde_ladder(const ExperimentConfig& cfg) {
    const EvolveParams base = cfg.evolve_params();
    std::vector<double> ladder = cfg.wedge.t;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

    auto first = base;
    first.T = 0.0;
    EvolveResult all = evolve(cfg.profile, first);
    FieldSnapshot cur = all.snapshots.back();
    for (double t : ladder) {
        auto seg = base;
        seg.T = t - cur.t;
        auto r = evolve_field(cur, cfg.profile.A, seg);
        all.steps += r.steps;
        all.max_boundary_drift = std::max(all.max_boundary_drift, r.max_boundary_drift);
        all.params.dt = r.params.dt;
        all.snapshots.push_back(r.snapshots.back());
        all.probes.push_back(r.probes.back());
        if (!r.ok()) {
            all.status = r.status;
            all.message = r.message;
            break;
        }
        cur = r.snapshots.back();
    }
    all.params.T = all.snapshots.back().t;
    return all;
}

std::vector<ComparisonRecord> predict_rows(const Spectrum& sp, const WedgeBlock& w) {
    std::vector<ComparisonRecord> rows;
    for (double a : w.alpha)
        for (double s : w.s)
            for (Side side : w.sides)
                for (double t : w.t) rows.push_back({wedge_point(a, s, t, side), {}, {}, {}, 0, 0, 0, 0});

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(rows.size());
    auto work = [&] {
        for (std::size_t i; (i = next++) < rows.size();) {
            try {
                auto& r = rows[i];
                r.pred = predict_q(sp, r.wp, w.convention);
                r.gen = gen_as_predict(sp, r.wp);
                const cplx d = dominant(r.pred);
                if (d != cplx(0.0)) r.ledger_residual = std::abs(std::remainder(ledger_sum(r) - std::arg(d), 2.0 * kPi));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < n; ++k) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

void attach_pde(std::vector<ComparisonRecord>& rows, const EvolveResult& run) {
    for (auto& r : rows) {
        const auto it = std::find_if(run.snapshots.begin(), run.snapshots.end(),
                                     [&](const FieldSnapshot& s) { return std::abs(s.t - r.wp.t) <= 1e-9 * r.wp.t; });
        if (it == run.snapshots.end()) continue;
        const double x = r.wp.side == Side::PlusX ? r.wp.x : -r.wp.x;
        const cplx q = it->at(x);
        r.pde = q;
        r.abs_gap = std::abs(q - r.pred.value());
        r.rel_gap = r.abs_gap / std::max(std::abs(q), 1e-300);
        r.rough_gap = std::abs(std::abs(q) - std::abs(r.pred.rough));
    }
}

std::vector<LedgerFit> fit_phase_ledger(const std::vector<ComparisonRecord>& rows) {
    std::map<std::pair<double, double>, std::vector<const ComparisonRecord*>> groups;
    for (const auto& r : rows)
        if (r.wp.side == Side::PlusX) groups[{r.wp.alpha, r.wp.s}].push_back(&r);
    std::vector<LedgerFit> out;
    for (const auto& [key, g] : groups) {
        if (g.size() < 3) continue;
        Eigen::MatrixXd M(g.size(), 3);
        Eigen::VectorXd y(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double L = g[i]->wp.log4st;
            M(i, 0) = L * L;
            M(i, 1) = L;
            M(i, 2) = 1.0;
            y(i) = ledger_sum(*g[i]);
        }
        const Eigen::VectorXd c = M.colPivHouseholderQr().solve(y);
        LedgerFit f;
        f.alpha = key.first;
        f.s = key.second;
        f.psi = g.front()->pred.ledger[1];
        f.psi_fit = c(0);
        f.residual = std::sqrt((M * c - y).squaredNorm() / double(g.size()));
        out.push_back(f);
    }
    return out;
}

std::vector<DecayFit> fit_gap_exponents(const std::vector<ComparisonRecord>& rows) {
    std::map<std::tuple<double, double, int>, std::vector<const ComparisonRecord*>> groups;
    for (const auto& r : rows)
        if (r.pde) groups[{r.wp.alpha, r.wp.s, static_cast<int>(r.wp.side)}].push_back(&r);
    std::vector<DecayFit> out;
    for (const auto& [key, g] : groups) {
        DecayFit f;
        f.alpha = std::get<0>(key);
        f.s = std::get<1>(key);
        f.side = static_cast<Side>(std::get<2>(key));
        f.points = g.size();
        std::vector<double> lt, la, lr;
        f.rough_decreasing = g.size() >= 2;
        for (std::size_t i = 0; i < g.size(); ++i) {
            lt.push_back(std::log(g[i]->wp.t));
            la.push_back(std::log(std::max(g[i]->abs_gap, 1e-300)));
            lr.push_back(std::log(std::max(g[i]->rough_gap, 1e-300)));
            if (i > 0 && !(g[i]->rough_gap < g[i - 1]->rough_gap)) f.rough_decreasing = false;
        }
        if (g.size() >= 2) {
            f.exponent = slope(lt, la);
            f.rough_exponent = slope(lt, lr);
        }
        out.push_back(f);
    }
    return out;
}

void write_predictions_csv(std::ostream& os, const std::vector<ComparisonRecord>& rows) { write_rows(os, rows, false); }

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRecord>& rows) { write_rows(os, rows, true); }

void write_match_csv(std::ostream& os, const MatchingReport& rep, const Tolerances& tol) {
    fmt::print(os, "# nnls-csv v{} match case={} s={}\n", kCsvSchemaVersion, to_string(rep.case_tag), fmt_num(rep.s));
    os << "check,alpha,log_t,value,reference,residual,pass\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        const bool pass = i == 0 || r.residual < rep.rows[i - 1].residual;
        fmt::print(os, "phase_vs_delta,{},{},{},,{},{}\n", fmt_num(r.alpha), fmt_num(r.log_t), fmt_num(r.residual),
                   fmt_num(r.residual), pass ? 1 : 0);
        fmt::print(os, "phase_vs_delta_same_point,{},{},{},,{},\n", fmt_num(r.alpha), fmt_num(r.log_t),
                   fmt_num(r.same_point_residual), fmt_num(r.same_point_residual));
    }
    const double ref = 4.0 * rep.s * rep.s;
    fmt::print(os, "phi0_at_one,1,,{},{},{},{}\n", fmt_num(rep.phi0_at_one), fmt_num(ref),
               fmt_num(std::abs(rep.phi0_at_one - ref)), rep.phi0_at_one == ref ? 1 : 0);
    if (rep.case_tag == CaseTag::CaseI) {
        const double e = std::abs(rep.minus_x_exponent + 0.5);
        fmt::print(os, "minus_x_exponent,,,{},-0.5,{},{}\n", fmt_num(rep.minus_x_exponent), fmt_num(e),
                   e <= tol.exponent ? 1 : 0);
    } else {
        fmt::print(os, "nu0,,,{},,,\n", fmt_num(rep.nu0));
        if (rep.a3_limit_modulus > 0.0) {
            const double m = std::abs(rep.alpha1);
            fmt::print(os, "alpha1_modulus,1,,{},{},{},\n", fmt_num(m), fmt_num(rep.a3_limit_modulus),
                       fmt_num(std::abs(m - rep.a3_limit_modulus)));
        }
    }
    for (const auto& n : rep.notes) fmt::print(os, "# {}\n", n);
}

int cmd_scatter(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const auto sd = compute_spectral_data(cfg.profile, cfg.kgrid);
    fs::create_directories(out_dir);
    const auto path = (fs::path(out_dir) / cfg.out.cache).string();
    save_spectral_cache(sd, path);
    const auto id = spectral_identities(sd);
    fmt::print(log, "case: {}\nk1: {:.12g}\nassumption2: {:.3e}\ndet_s residual: {:.3e}\nwrote {}\n",
               to_string(sd.case_tag), sd.k1, sd.assumption2, id.det_s, path);
    return 0;
}

int cmd_predict(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const SampledSpectrum sp(spectral_data_for(cfg, out_dir, log));
    const auto rows = predict_rows(sp, cfg.wedge);
    auto f = open_out(out_dir, cfg.out.predictions);
    write_predictions_csv(f, rows);
    fmt::print(log, "{} rows -> {}\n", rows.size(), (fs::path(out_dir) / cfg.out.predictions).string());
    int bad = 0;
    for (const auto& fit : fit_phase_ledger(rows)) {
        if (fit.psi == 0.0) continue;
        const double rel = std::abs(fit.psi_fit / fit.psi - 1.0);
        const bool ok = rel <= cfg.tol.ledger_fit;
        bad += !ok;
        fmt::print(log, "ledger fit alpha={} s={}: psi={:.10g} fitted={:.10g} rel={:.2e} {}\n", fit.alpha, fit.s,
                   fit.psi, fit.psi_fit, rel, ok ? "ok" : "FAIL");
    }
    return bad ? 1 : 0;
}

int cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    auto summary = open_out(out_dir, cfg.out.summary);
    fmt::print(summary, "# nnls summary v{}\nprofile: {}\n", kCsvSchemaVersion, cfg.profile.fingerprint());
    if (cfg.wedge.alpha.empty() || cfg.wedge.s.empty() || cfg.wedge.t.empty()) {
        summary << "rows: 0\n";
        fmt::print(log, "empty wedge list: summary only\n");
        return 0;
    }
    cfg.validate(true);

    const SampledSpectrum sp(spectral_data_for(cfg, out_dir, log));
    auto rows = predict_rows(sp, cfg.wedge);
    const auto ep = cfg.evolve_params();
    fmt::print(log, "pde: L={} N={} T={}\n", ep.L, ep.N, ep.T);
    const auto run = run_pde_ladder(cfg);
    attach_pde(rows, run);
    if (!cfg.out.snapshots.empty()) {
        auto f = open_out(out_dir, cfg.out.snapshots);
        write_snapshots_csv(f, run);
    }
    {
        auto f = open_out(out_dir, cfg.out.comparison);
        write_comparison_csv(f, rows);
    }

    const double Q = amplitude_Q(sp);
    const bool drift_ok = run.max_boundary_drift <= cfg.tol.drift;
    fmt::print(summary, "rows: {}\nQ: {}\npde_status: {}\n", rows.size(), fmt_num(Q), to_string(run.status));
    if (!run.message.empty()) fmt::print(summary, "pde_message: {}\n", run.message);
    fmt::print(summary, "pde_L: {}\npde_N: {}\npde_dt: {}\nmax_boundary_drift: {:.6e}\ndrift_ok: {}\n", fmt_num(ep.L),
               ep.N, fmt_num(run.params.dt), run.max_boundary_drift, drift_ok ? "yes" : "no");
    bool all_ok = run.ok() && drift_ok;
    for (const auto& f : fit_gap_exponents(rows)) {
        double last = 0.0;
        for (const auto& r : rows)
            if (r.pde && r.wp.alpha == f.alpha && r.wp.s == f.s && r.wp.side == f.side) last = r.rough_gap;
        const bool below = f.side == Side::MinusX || last < cfg.tol.gap;
        fmt::print(summary,
                   "group alpha={} s={} side={}: points={} gap_exponent={:.6g} rough_gap_exponent={:.6g} "
                   "rough_gap_decreasing={} final_rough_gap={:.6e} below_tol={}\n",
                   f.alpha, f.s, to_string(f.side), f.points, f.exponent, f.rough_exponent,
                   f.rough_decreasing ? "yes" : "no", last, below ? "yes" : "no");
        all_ok = all_ok && below;
    }
    fmt::print(log, "pde {} after {} steps; comparison -> {}\n", to_string(run.status), run.steps,
               (fs::path(out_dir) / cfg.out.comparison).string());
    if (!run.ok()) return 3;
    return all_ok ? 0 : 1;
}

int cmd_match(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    const SampledSpectrum sp(spectral_data_for(cfg, out_dir, log));
    const auto rep = matching_check(sp, cfg.match.s, cfg.match.alpha, cfg.match.product);
    auto f = open_out(out_dir, cfg.out.match);
    write_match_csv(f, rep, cfg.tol);
    fmt::print(log, "residual decreasing: {}\n", rep.residual_decreasing ? "yes" : "no");
    for (const auto& n : rep.notes) fmt::print(log, "{}\n", n);
    return rep.residual_decreasing ? 0 : 1;
}

}  // namespace nnls
