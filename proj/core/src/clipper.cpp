#include "clipcs/clipper.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clipcs {

namespace {

double rayleigh_pdf(double r, double sigma) {
    const double s2 = sigma * sigma;
    return (r / s2) * std::exp(-r * r / (2.0 * s2));
}

} // namespace

ClipOutcome clip_ps(const ComplexBlock& x, double gamma) {
    if (x.basis != Basis::kTime)
        throw std::invalid_argument("clip_ps: block must be in the time basis");
    if (gamma <= 0.0) throw std::invalid_argument("clip_ps: gamma must be positive");

    ClipOutcome out;
    out.scheme = ClipScheme::kPeakSuppression;
    out.gamma = gamma;
    out.c = Eigen::VectorXcd::Zero(x.values.size());
    for (Eigen::Index i = 0; i < x.values.size(); ++i) {
        const double mag = std::abs(x.values(i));
        if (mag > gamma) {
            // x_bar(i) = gamma e^{j theta}: c carries magnitude mag - gamma
            // at angle theta + pi.
            out.c(i) = (gamma / mag - 1.0) * x.values(i);
            out.support.push_back(static_cast<int>(i));
        }
    }
    return out;
}

ClipOutcome clip_dmc(const ComplexBlock& x, double gamma, double zeta) {
    if (x.basis != Basis::kTime)
        throw std::invalid_argument("clip_dmc: block must be in the time basis");
    if (gamma <= 0.0) throw std::invalid_argument("clip_dmc: gamma must be positive");
    if (zeta <= 0.0) throw std::invalid_argument("clip_dmc: zeta must be positive");

    ClipOutcome out;
    out.scheme = ClipScheme::kDigitalMagnitude;
    out.gamma = gamma;
    out.zeta = zeta;

    OfdmConfig floor_cfg;
    floor_cfg.n_subcarriers = static_cast<int>(x.values.size());
    out.zeta_floor_warning = zeta < zeta_safe_floor(gamma, floor_cfg);

    out.c = Eigen::VectorXcd::Zero(x.values.size());
    for (Eigen::Index i = 0; i < x.values.size(); ++i) {
        const double mag = std::abs(x.values(i));
        if (mag > gamma) {
            out.c(i) = (-zeta / mag) * x.values(i);
            out.support.push_back(static_cast<int>(i));
        }
    }
    return out;
}

double rayleigh_tail_prob(double gamma, double sigma) {
    return std::exp(-gamma * gamma / (2.0 * sigma * sigma));
}

double expected_sparsity(double gamma, const OfdmConfig& cfg) {
    if (gamma < 0.0) throw std::invalid_argument("expected_sparsity: gamma < 0");
    return cfg.n_subcarriers * rayleigh_tail_prob(gamma, cfg.envelope_sigma());
}

double gamma_for_expected_sparsity(double target_sparsity, const OfdmConfig& cfg) {
    if (target_sparsity <= 0.0 || target_sparsity > cfg.n_subcarriers)
        throw std::invalid_argument("gamma_for_expected_sparsity: target out of range");
    const double sigma = cfg.envelope_sigma();
    return sigma * std::sqrt(2.0 * std::log(cfg.n_subcarriers / target_sparsity));
}

double tail_excess_moment(double gamma, double sigma, int p) {
    if (gamma < 0.0 || sigma <= 0.0 || p < 1)
        throw std::invalid_argument("tail_excess_moment: bad arguments");
    const double tail = rayleigh_tail_prob(gamma, sigma);
    if (tail <= 0.0) return 0.0;

    boost::math::quadrature::exp_sinh<double> integrator;
    const auto integrand = [&](double t) {
        // t = r - gamma over [0, inf)
        return std::pow(t, p) * rayleigh_pdf(t + gamma, sigma);
    };
    const double raw = integrator.integrate(integrand);
    if (!std::isfinite(raw))
        throw std::runtime_error("tail_excess_moment: quadrature failed");
    return raw / tail;
}

double cnr_db(const ClipOutcome& outcome, const ToneMap& tones,
              const Eigen::VectorXcd& channel_freq, double noise_var) {
    if (noise_var <= 0.0) throw std::invalid_argument("cnr_db: noise_var must be > 0");
    if (outcome.support.empty()) return -std::numeric_limits<double>::infinity();

    const Eigen::VectorXcd c_freq = fourier::dft(outcome.c);
    const Eigen::VectorXcd projected =
        tones.select_measurement(channel_freq.cwiseProduct(c_freq));
    const double m = static_cast<double>(tones.measurement_tones.size());
    return 10.0 * std::log10(projected.squaredNorm() / (m * noise_var));
}

double zeta_for_cnr_match(double gamma, const OfdmConfig& cfg) {
    if (gamma <= 0.0) throw std::invalid_argument("zeta_for_cnr_match: gamma <= 0");
    return std::sqrt(tail_excess_moment(gamma, cfg.envelope_sigma(), 2));
}

double zeta_safe_floor(double gamma, const OfdmConfig& cfg) {
    constexpr double kEulerGamma = 0.57721566490153286;
    const double expected_max =
        cfg.envelope_sigma() *
        std::sqrt(2.0 * std::log(static_cast<double>(cfg.n_subcarriers)) +
                  2.0 * kEulerGamma);
    return std::max(0.0, expected_max - gamma);
}

} // namespace clipcs
