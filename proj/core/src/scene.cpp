#include "clipcs/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "clipcs/fourier.hpp"
#include "clipcs/ofdm.hpp"

namespace clipcs {

TrialScene make_scene(const OfdmConfig& cfg, const QamModem& modem,
                      double gamma_mult, ClipScheme scheme,
                      std::optional<double> zeta_mult,
                      std::uint64_t trial_index) {
    cfg.validate();
    if (gamma_mult <= 0.0)
        throw std::invalid_argument("make_scene: gamma must be positive");
    if (scheme == ClipScheme::kDigitalMagnitude && !zeta_mult)
        throw std::invalid_argument("make_scene: digital clipping needs zeta");

    TrialScene scene;
    scene.scheme = scheme;
    scene.gamma_abs = gamma_mult * cfg.envelope_sigma();
    if (zeta_mult) scene.zeta_abs = *zeta_mult * cfg.envelope_sigma();
    scene.noise_var = cfg.noise_var();

    Rng rng_tones = Rng::derive(cfg.seed, trial_index, Stream::kTones);
    Rng rng_data = Rng::derive(cfg.seed, trial_index, Stream::kData);
    Rng rng_channel = Rng::derive(cfg.seed, trial_index, Stream::kChannel);
    Rng rng_noise = Rng::derive(cfg.seed, trial_index, Stream::kNoise);

    scene.tones = draw_tone_map(cfg, rng_tones);
    scene.data_symbols =
        modem.draw_symbols(cfg.n_data_tones(), rng_data, &scene.data_labels);
    scene.x = modulate(scene.data_symbols, scene.tones);

    scene.clip = scheme == ClipScheme::kPeakSuppression
                     ? clip_ps(scene.x, scene.gamma_abs)
                     : clip_dmc(scene.x, scene.gamma_abs, *scene.zeta_abs);
    scene.xbar = ComplexBlock{scene.x.values + scene.clip.c, Basis::kTime};

    scene.channel = draw_channel(cfg, rng_channel);
    scene.y = apply_channel(scene.channel, scene.xbar, scene.noise_var, rng_noise);
    scene.meas = project_measurements(scene.y, scene.channel, scene.tones);

    scene.xbar_hat_freq = equalize_zf(scene.y, scene.channel);
    scene.xbar_hat_time = fourier::idft(scene.xbar_hat_freq);
    // ZF error floor: the per-tone noise boost sigma_z^2 / |h(k)|^2 spreads
    // uniformly over the time samples through the unitary IDFT. A dead tone
    // loses at most its unit signal power, so the boost is capped there.
    const Eigen::ArrayXd gains =
        scene.channel.freq_response.cwiseAbs2().array() + 1e-12;
    const double err_floor =
        (scene.noise_var / gains).min(1.0).mean();
    scene.sigma_e = std::sqrt(std::max(err_floor, 1e-18));
    return scene;
}

RecoveryOptions default_recovery_options(const OfdmConfig& cfg,
                                         double gamma_mult, ClipScheme scheme,
                                         std::optional<double> zeta_mult,
                                         double lambda_kappa) {
    RecoveryOptions opts;
    opts.solver.lambda = default_lambda(std::sqrt(cfg.noise_var()),
                                        cfg.n_subcarriers, lambda_kappa);
    std::optional<double> zeta_abs;
    if (zeta_mult) zeta_abs = *zeta_mult * cfg.envelope_sigma();
    opts.fbmp = default_fbmp_params(cfg, gamma_mult * cfg.envelope_sigma(),
                                    scheme, zeta_abs);
    return opts;
}

namespace {

/// Distance anchor for the posterior weights: peak suppression parks
/// clipped envelopes exactly at gamma; digital clipping leaves them near
/// gamma + E[excess] - zeta.
double weight_clip_level(const TrialScene& scene) {
    if (scene.scheme == ClipScheme::kPeakSuppression) return scene.gamma_abs;
    const double sigma = std::sqrt(0.5); // unit-power data envelope
    const double excess = tail_excess_moment(scene.gamma_abs, sigma, 1);
    return std::max(scene.gamma_abs + excess - *scene.zeta_abs,
                    0.05 * scene.gamma_abs);
}

WeightVector scene_weights(const TrialScene& scene) {
    return ps_weights(scene.xbar_hat_time, scene.gamma_abs, scene.sigma_e, 1.0,
                      weight_clip_level(scene));
}

} // namespace

RecoveryEstimate run_method(Method method, const TrialScene& scene,
                            const RecoveryOptions& opts) {
    const Eigen::VectorXcd& y = scene.meas.y_proj;
    const Eigen::MatrixXcd& psi = scene.meas.psi;

    RecoveryEstimate est;
    switch (method) {
        case Method::kNone: {
            est.c_hat = Eigen::VectorXcd::Zero(psi.cols());
            est.method = Method::kNone;
            break;
        }
        case Method::kLasso: {
            est = lasso(y, psi, opts.solver);
            cap_support(est, static_cast<int>(psi.rows()));
            est = refine_ls(est, y, psi);
            est.method = Method::kLasso;
            break;
        }
        case Method::kWl: {
            const WeightVector w = scene_weights(scene);
            est = weighted_lasso(y, psi, opts.solver, w);
            cap_support(est, static_cast<int>(psi.rows()));
            est = refine_ls(est, y, psi);
            est.method = Method::kWl;
            break;
        }
        case Method::kPalStr: {
            est = recover_str(y, psi, antiphase_of(scene.xbar_hat_time),
                              opts.solver);
            break;
        }
        case Method::kPalRts: {
            est = recover_rts(y, psi, antiphase_of(scene.xbar_hat_time),
                              opts.solver);
            break;
        }
        case Method::kWpal: {
            const WeightVector w = scene_weights(scene);
            est = recover_rts(y, psi, antiphase_of(scene.xbar_hat_time),
                              opts.solver, &w);
            break;
        }
        case Method::kBetaFbmp: {
            const WeightVector w = scene_weights(scene);
            est = beta_fbmp(y, psi, w, opts.fbmp);
            break;
        }
        case Method::kOracleLs: {
            est = oracle_ls(y, psi, scene.clip.support);
            break;
        }
        case Method::kOraclePhase: {
            est = recover_rts(y, psi, antiphase_of(scene.x.values), opts.solver);
            est.method = Method::kOraclePhase;
            break;
        }
    }

    if (opts.force_dmc_magnitudes &&
        scene.scheme == ClipScheme::kDigitalMagnitude && scene.zeta_abs &&
        method != Method::kNone) {
        est = force_digital_magnitudes(est, *scene.zeta_abs);
    }
    return est;
}

std::vector<int> decode_labels(const TrialScene& scene, const QamModem& modem,
                               const Eigen::VectorXcd& c_hat) {
    Eigen::VectorXcd spectrum = scene.xbar_hat_freq;
    if (c_hat.size() == spectrum.size() && c_hat.squaredNorm() > 0.0)
        spectrum -= fourier::dft(c_hat);
    const Eigen::VectorXcd symbols = scene.tones.select_data(spectrum);

    std::vector<int> labels(symbols.size());
    for (Eigen::Index i = 0; i < symbols.size(); ++i)
        labels[i] = modem.demap_index(symbols(i));
    return labels;
}

double residual_clip_var(const TrialScene& scene,
                         const Eigen::VectorXcd& c_hat) {
    Eigen::VectorXcd diff = scene.clip.c;
    if (c_hat.size() == diff.size()) diff -= c_hat;
    const Eigen::VectorXcd freq = fourier::dft(diff);
    return scene.tones.select_data(freq).squaredNorm() /
           static_cast<double>(scene.tones.data_tones.size());
}

} // namespace clipcs
