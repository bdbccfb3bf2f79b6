#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clipcs/config.hpp"
#include "clipcs/metrics.hpp"
#include "clipcs/scene.hpp"

namespace clipcs {

/// A full experiment request: which system, which clip levels, which
/// estimators, how many trials. Everything an output file needs to be
/// reproduced lands in the JSON sidecar.
struct ExperimentSpec {
    OfdmConfig cfg;
    std::vector<double> gamma_grid{2.0}; ///< units of sigma_|X|
    std::vector<Method> methods{Method::kLasso};
    int n_trials = 500;
    ClipScheme scheme = ClipScheme::kPeakSuppression;
    std::optional<double> zeta; ///< units of sigma_|X| (digital clipping)
    std::string output_path;    ///< empty: keep results in memory only
    double lambda_kappa = 1.0;
    int n_workers = 0; ///< 0 picks the hardware concurrency

    void validate() const;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::string csv_text;
};

/// SER/NMSE/PAPR-reduction vs gamma for every requested method. Each trial
/// builds one scene shared by all methods (paired comparison); per-trial
/// seeds derive from (cfg.seed, trial index) so results do not depend on
/// scheduling. Writes CSV plus a JSON sidecar when output_path is set.
SweepResult run_sweep(const ExperimentSpec& spec);

struct ZetaRow {
    double zeta = 0.0;
    Method method = Method::kNone;
    int trials = 0;
    double nmse_mean = 0.0;
    double nmse_ci95 = 0.0;
};

struct ZetaSweepResult {
    std::vector<ZetaRow> rows;
    std::string csv_text;
};

/// NMSE of digital-clipper estimates versus the suppression magnitude zeta
/// at a fixed gamma.
ZetaSweepResult run_nmse_zeta(const ExperimentSpec& spec,
                              const std::vector<double>& zeta_grid,
                              double gamma_mult);

struct InclusionRow {
    double gamma = 0.0;
    double beta_fraction = 0.0;
    int trials = 0;
    double probability = 0.0;
};

struct InclusionResult {
    std::vector<InclusionRow> rows;
    std::string csv_text;
};

/// Probability that the clip support survives pool truncation, per gamma
/// and pool fraction.
InclusionResult run_inclusion(const ExperimentSpec& spec,
                              const std::vector<double>& beta_fractions);

struct PaprResult {
    struct Row {
        double gamma = 0.0;
        double reduction_db = 0.0;
        double ccdf = 0.0;
    };
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> mean_by_gamma;
    std::string csv_text;
};

/// Distribution of 10 log10(max|x|^2 / gamma^2) per clip level.
PaprResult run_papr_ccdf(const ExperimentSpec& spec);

struct CapacityRow {
    double gamma = 0.0;
    double snr_db = 0.0;
    Method method = Method::kNone;
    int trials = 0;
    double c1_per_tone = 0.0;
    double c2_per_tone = 0.0;
    double clip_var_full = 0.0;
    double resid_var = 0.0;
    bool condition_holds = false;
};

struct CapacityResult {
    std::vector<CapacityRow> rows;
    std::string csv_text;
};

/// Capacity per transmitted tone of the all-tones clipping system versus
/// the tone-reserving system, over the gamma grid.
CapacityResult run_capacity_gamma(const ExperimentSpec& spec);

/// Same comparison against SNR at a fixed gamma.
CapacityResult run_capacity_snr(const ExperimentSpec& spec,
                                const std::vector<double>& snr_grid_db,
                                double gamma_mult);

struct TimingRow {
    Method method = Method::kNone;
    double norm_time = 0.0;
    double ccdf = 0.0;
};

struct TimingResult {
    std::vector<TimingRow> rows;
    std::vector<std::pair<Method, double>> median_by_method;
    std::string csv_text;
};

/// CCDF of recovery wall times normalized by the slowest sample across all
/// methods. Runs single-worker so contention cannot skew the samples.
TimingResult run_timing(const ExperimentSpec& spec);

/// Shared helpers.
void write_text_file(const std::string& path, const std::string& text);
std::string spec_to_json(const ExperimentSpec& spec, const std::string& command);
ExperimentSpec spec_from_json_text(const std::string& text);

} // namespace clipcs
