#pragma once

#include <optional>

#include <Eigen/Dense>

#include "clipcs/clipper.hpp"
#include "clipcs/config.hpp"
#include "clipcs/recovery.hpp"

namespace clipcs {

/// Knobs of the truncated greedy Bayesian MMSE search.
struct FbmpParams {
    int beta = 0;   ///< candidate pool: indices of the beta smallest weights
    int rho = 5;    ///< survivors kept per Hamming weight
    int s_max = 0;  ///< greedy expansion rounds past the singleton sweep
    double prior_var = 1.0;    ///< sigma_v^2 of active coefficients
    double active_prob = 0.1;  ///< Bernoulli prior on a clip per index
    double noise_var = 1e-3;   ///< sigma_z^2
    double expected_sparsity = 0.0; ///< for the truncation-risk diagnostic
};

/// Defaults used by the experiments: pool 0.3 N, rho 5, s_max 1.5x the mean
/// sparsity, amplitude prior variance from the clipper's tail second moment
/// (zeta^2 for digital clipping).
FbmpParams default_fbmp_params(const OfdmConfig& cfg, double gamma,
                               ClipScheme scheme,
                               std::optional<double> zeta = std::nullopt);

/// Number of evidence evaluations the search performs over a pool of the
/// given size: pool singletons plus rho (pool - r) candidates in expansion
/// round r = 1..s_max.
long fbmp_evaluation_count(int pool, int rho, int s_max);

/// Percent reduction in evidence evaluations from truncating the pool from
/// n to beta.
double fbmp_reduction_percent(int n, int beta, int rho, int s_max);

/// Approximate MMSE estimate of c: a greedy search over clip-support
/// vectors restricted to the most probable clipping locations, followed by
/// the normalized posterior-weighted sum of conditional LMMSE means over
/// the surviving supports.
RecoveryEstimate beta_fbmp(const Eigen::VectorXcd& y_proj,
                           const Eigen::MatrixXcd& psi,
                           const WeightVector& weights,
                           const FbmpParams& params);

} // namespace clipcs
