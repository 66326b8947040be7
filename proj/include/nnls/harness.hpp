#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nnls/pde_solver.hpp"
#include "nnls/wedge_asymptotics.hpp"

namespace nnls {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WedgeBlock {
    std::vector<double> alpha, s, t;
    std::vector<Side> sides{Side::PlusX};
    Convention convention = Convention::Consistent;
};

struct PdeBlock {
    bool skip = true;
    double L = 0.0;  // 0: twice the largest wedge |x|, rounded up to a multiple of 10
    double h = 0.1;
    double dt = 0.0;
    std::size_t stride = 0;
};

struct MatchBlock {
    std::vector<double> alpha{0.9, 0.99, 0.999};
    double product = 1.0;  // (1 - alpha) ln t
    double s = 1.0;
};

struct OutputBlock {
    std::string cache = "spectral.json";
    std::string predictions = "predictions.csv";
    std::string comparison = "comparison.csv";
    std::string summary = "summary.txt";
    std::string match = "match.csv";
    std::string snapshots;  // optional PDE snapshot CSV
};

// Pass/fail thresholds used by the summaries. Keys match the [tolerance] section.
struct Tolerances {
    double gap = 0.1;           // final | |q_pde| - Q | on x > 0 rows
    double drift = 1e-6;        // right-boundary drift of the PDE run
    double ledger_fit = 0.05;   // relative error of the fitted ln^2 coefficient
    double exponent = 0.05;     // |fitted - (-1/2)| in the matching report

    void set(const std::string& key, double value);
};

struct ExperimentConfig {
    InitialProfile profile;
    KGridSpec kgrid;
    WedgeBlock wedge;
    PdeBlock pde;
    MatchBlock match;
    OutputBlock out;
    Tolerances tol;

    // x > 0 of the largest wedge point.
    double max_wedge_x() const;
    EvolveParams evolve_params() const;
    void validate(bool with_pde) const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

struct ComparisonRecord {
    WedgePoint wp;
    AsymptoticPrediction pred;
    AsymptoticPrediction gen;
    std::optional<cplx> pde;
    double abs_gap = 0.0;    // |q_pde - prediction|
    double rel_gap = 0.0;    // abs_gap / max(|q_pde|, 1e-300)
    double rough_gap = 0.0;  // | |q_pde| - |rough| |
    double ledger_residual = 0.0;  // |sum of ledger terms - arg of leading| mod 2 pi, x > 0
};

// One record per (alpha, s, t, side), in config order. Rows run concurrently.
std::vector<ComparisonRecord> predict_rows(const Spectrum& sp, const WedgeBlock& w);

// PDE run with snapshots at t = 0 and at every time of the wedge ladder.
EvolveResult run_pde_ladder(const ExperimentConfig& cfg);

void attach_pde(std::vector<ComparisonRecord>& rows, const EvolveResult& run);

struct LedgerFit {
    double alpha = 0, s = 0;
    double psi = 0, psi_fit = 0;  // ln^2 4st coefficient: from the ledger and by regression
    double residual = 0;          // rms of the regression
};

// Regress the x > 0 phase sum over the t ladder on {ln^2 4st, ln 4st, 1}.
std::vector<LedgerFit> fit_phase_ledger(const std::vector<ComparisonRecord>& rows);

struct DecayFit {
    double alpha = 0, s = 0;
    Side side = Side::PlusX;
    double exponent = 0;        // slope of ln abs_gap against ln t
    double rough_exponent = 0;  // same for rough_gap
    bool rough_decreasing = false;
    std::size_t points = 0;
};

std::vector<DecayFit> fit_gap_exponents(const std::vector<ComparisonRecord>& rows);

inline constexpr int kCsvSchemaVersion = 1;

void write_predictions_csv(std::ostream& os, const std::vector<ComparisonRecord>& rows);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRecord>& rows);
void write_match_csv(std::ostream& os, const MatchingReport& rep, const Tolerances& tol);

// Subcommands. Each writes into out_dir and returns the process exit code.
int cmd_scatter(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_predict(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_match(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

}  // namespace nnls
