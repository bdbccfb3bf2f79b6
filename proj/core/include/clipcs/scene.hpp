#pragma once

#include <optional>

#include <Eigen/Dense>

#include "clipcs/block.hpp"
#include "clipcs/channel.hpp"
#include "clipcs/clipper.hpp"
#include "clipcs/config.hpp"
#include "clipcs/fbmp.hpp"
#include "clipcs/qam.hpp"
#include "clipcs/recovery.hpp"
#include "clipcs/tones.hpp"

namespace clipcs {

/// Everything one simulated OFDM block produces on its way to the receiver:
/// data, clip, channel draw, reserved-tone observations and the equalized
/// data estimate every estimator starts from. Trials are independent; all
/// randomness derives from (cfg.seed, trial_index).
struct TrialScene {
    ToneMap tones;
    std::vector<int> data_labels;
    Eigen::VectorXcd data_symbols;
    ComplexBlock x;    ///< clean time-domain block
    ClipOutcome clip;  ///< the planted sparse clipper
    ComplexBlock xbar; ///< x + c, what the amplifier sees
    ChannelRealization channel;
    ComplexBlock y; ///< received block
    ProjectedMeasurements meas;
    Eigen::VectorXcd xbar_hat_freq; ///< ZF estimate over all N tones
    Eigen::VectorXcd xbar_hat_time;
    double sigma_e = 0.0; ///< ZF error floor sigma_z / rms|h|
    double gamma_abs = 0.0;
    std::optional<double> zeta_abs;
    ClipScheme scheme = ClipScheme::kPeakSuppression;
    double noise_var = 0.0;
};

/// Generate one trial: fresh tone map, data, channel and noise. gamma and
/// zeta are in units of sigma_|X|.
TrialScene make_scene(const OfdmConfig& cfg, const QamModem& modem,
                      double gamma_mult, ClipScheme scheme,
                      std::optional<double> zeta_mult,
                      std::uint64_t trial_index);

/// Per-trial estimator settings shared across methods.
struct RecoveryOptions {
    SolverOptions solver;
    FbmpParams fbmp;
    bool force_dmc_magnitudes = false;
};

/// Defaults for a given configuration and clip level: lambda from the noise
/// level, FBMP priors from the clipper statistics.
RecoveryOptions default_recovery_options(const OfdmConfig& cfg,
                                         double gamma_mult, ClipScheme scheme,
                                         std::optional<double> zeta_mult,
                                         double lambda_kappa = 1.0);

/// Run one estimator end to end on a scene (weights, phases, solve,
/// refinement) and return its clip estimate.
RecoveryEstimate run_method(Method method, const TrialScene& scene,
                            const RecoveryOptions& opts);

/// Subtract the clip estimate on the data tones and demap:
/// labels of S_d^T (F xbar_hat - F c_hat).
std::vector<int> decode_labels(const TrialScene& scene, const QamModem& modem,
                               const Eigen::VectorXcd& c_hat);

/// Mean squared magnitude of F (c - c_hat) on the data tones.
double residual_clip_var(const TrialScene& scene,
                         const Eigen::VectorXcd& c_hat);

} // namespace clipcs
