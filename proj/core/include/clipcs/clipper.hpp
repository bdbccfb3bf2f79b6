#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "clipcs/block.hpp"
#include "clipcs/config.hpp"
#include "clipcs/tones.hpp"

namespace clipcs {

enum class ClipScheme { kPeakSuppression, kDigitalMagnitude };

/// The sparse peak-reducing signal c and its bookkeeping. Outside `support`
/// the entries of `c` are exactly zero; on it they are exactly anti-phased
/// with the corresponding data samples.
struct ClipOutcome {
    Eigen::VectorXcd c;
    std::vector<int> support;  ///< I_c, ascending
    ClipScheme scheme = ClipScheme::kPeakSuppression;
    double gamma = 0.0;              ///< threshold, amplitude units
    std::optional<double> zeta;      ///< fixed suppression magnitude (DMC only)
    bool zeta_floor_warning = false; ///< set when zeta cannot cover the peak
                                     ///< excursion implied by the max order
                                     ///< statistic (DMC diagnostic)

    int sparsity() const { return static_cast<int>(support.size()); }
};

/// Suppress every sample with |x(i)| > gamma to magnitude exactly gamma,
/// preserving its angle. The returned c satisfies max|x + c| <= gamma.
ClipOutcome clip_ps(const ComplexBlock& x, double gamma);

/// Subtract a fixed magnitude zeta along the sample's phase wherever
/// |x(i)| > gamma. Peaks may remain above gamma when zeta is small; the
/// outcome carries a warning flag when zeta is below the safe floor.
ClipOutcome clip_dmc(const ComplexBlock& x, double gamma, double zeta);

/// Mean sparsity N * exp(-gamma^2 / (2 sigma_|X|^2)) of a threshold clipper.
double expected_sparsity(double gamma, const OfdmConfig& cfg);

/// Threshold giving a target mean sparsity; inverse of expected_sparsity.
double gamma_for_expected_sparsity(double target_sparsity, const OfdmConfig& cfg);

/// Rayleigh tail probability P(|x| > gamma) for envelope parameter sigma.
double rayleigh_tail_prob(double gamma, double sigma);

/// p-th moment of the clip excess, E[(|x| - gamma)^p | |x| > gamma], for a
/// Rayleigh(sigma) envelope. Numerical quadrature over the tail.
double tail_excess_moment(double gamma, double sigma, int p);

/// Single-outcome clipper-to-noise ratio estimate in dB:
/// ||Psi c||^2 / (m sigma_z^2) with Psi = S_m^T D F. Averaging over outcomes
/// gives the Monte Carlo CNR. Returns -inf for an empty clip; throws when
/// noise_var <= 0.
double cnr_db(const ClipOutcome& outcome, const ToneMap& tones,
              const Eigen::VectorXcd& channel_freq, double noise_var);

/// The zeta for which digital-magnitude clipping matches peak suppression's
/// per-coefficient second moment E[(|x|-gamma)^2 | |x|>gamma], and therefore
/// its CNR at equal sparsity. Computed by tail quadrature.
double zeta_for_cnr_match(double gamma, const OfdmConfig& cfg);

/// Lower bound on a usable DMC zeta: the expected envelope maximum
/// sigma * sqrt(2 ln N + 2 gamma_euler) minus gamma.
double zeta_safe_floor(double gamma, const OfdmConfig& cfg);

} // namespace clipcs
