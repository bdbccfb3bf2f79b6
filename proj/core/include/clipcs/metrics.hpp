#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clipcs/config.hpp"
#include "clipcs/recovery.hpp"

namespace clipcs {

/// One Monte Carlo trial's outcome. nmse is NaN (and excluded from
/// aggregation) when the trial produced an empty clip.
struct TrialRecord {
    std::uint64_t seed = 0;
    double gamma = 0.0; ///< threshold in units of sigma_|X|
    Method method = Method::kNone;
    double ser = 0.0;
    double nmse = 0.0;
    double papr_reduction_db = 0.0;
    double residual_clip_var = 0.0; ///< sigma^2 of c - c_hat on data tones
    double wall_time = 0.0;         ///< recovery wall time, seconds
};

/// Fraction of symbol mismatches.
double ser(const std::vector<int>& decoded, const std::vector<int>& truth);

/// ||c - c_hat||^2 / ||c||^2; NaN sentinel when ||c|| = 0.
double nmse(const Eigen::VectorXcd& c, const Eigen::VectorXcd& c_hat);

/// Empirical survival function P(X > value), one row per distinct sample.
struct CcdfTable {
    std::vector<double> value;
    std::vector<double> ccdf;
};

CcdfTable empirical_ccdf(std::vector<double> samples);

/// CCDF of the per-trial PAPR reduction 10 log10(max|x|^2 / gamma^2).
/// Requires at least 100 trials.
CcdfTable papr_reduction_ccdf(const std::vector<TrialRecord>& trials);

/// Inputs of the two-system capacity comparison: system 1 clips on all N
/// tones and never estimates c; system 2 reserves m tones and cancels its
/// estimate. Variances are per-tone, measured in the frequency domain.
struct CapacitySummary {
    int n_tones = 0;
    int n_reserved = 0;
    double gain = 1.0;          ///< mean |h(k)|^2 over tones and realizations
    double signal_var = 1.0;    ///< per-tone data power
    double clip_var_full = 0.0; ///< sigma_c^2 of the all-tones system
    double resid_var = 0.0;     ///< sigma_{c - c_hat}^2 of the reserving system
    double noise_var_s1 = 0.0;
    double noise_var_s2 = 0.0;
};

/// Capacity per transmitted tone of the all-tones clipping system.
double capacity_c1(const CapacitySummary& s);

/// Capacity per transmitted tone of the tone-reserving system (the N - m
/// data tones are averaged over the full block of N).
double capacity_c2(const CapacitySummary& s);

/// Reserved tones are justified when the residual distortion falls below
/// the closed-form break-even level; algebraically identical to C2 > C1.
bool capacity_condition(const CapacitySummary& s);

/// True when `support` is contained in the `beta` smallest-weight indices.
bool support_included(const std::vector<int>& support,
                      const Eigen::VectorXd& weights, int beta);

/// Monte Carlo probability that the true clip support lies entirely within
/// the first beta_fraction * N indices of the ascending-sorted posterior
/// weights, under peak suppression at gamma_mult * sigma_|X|.
double inclusion_probability(const OfdmConfig& cfg, double gamma_mult,
                             double beta_fraction, int n_trials);

/// Aggregate of one (gamma, method) sweep cell.
struct SweepCell {
    double gamma = 0.0;
    Method method = Method::kNone;
    int trials = 0;
    double ser_mean = 0.0;
    double ser_ci95 = 0.0;
    double nmse_mean = 0.0; ///< over trials with a nonempty clip
    double papr_red_db_mean = 0.0;
    double resid_var_mean = 0.0;
    double wall_ms_median = 0.0;
};

/// Order-independent reduction of per-trial records into a cell.
SweepCell aggregate_trials(double gamma, Method method,
                           const std::vector<TrialRecord>& records);

} // namespace clipcs
