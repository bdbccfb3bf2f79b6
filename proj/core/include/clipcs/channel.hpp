#pragma once

#include <Eigen/Dense>

#include "clipcs/block.hpp"
#include "clipcs/config.hpp"
#include "clipcs/rng.hpp"
#include "clipcs/tones.hpp"

namespace clipcs {

/// One multipath draw. The circulant channel H = F^H D F is applied in the
/// frequency domain; freq_response holds diag(D) = sqrt(N) F [h; 0].
struct ChannelRealization {
    Eigen::VectorXcd taps;          ///< h, length L
    Eigen::VectorXcd freq_response; ///< h_check, length N
};

/// Reserved-tone observations y_acute = Psi c + z_acute together with the
/// materialized m x N operator Psi = S_m^T D F.
struct ProjectedMeasurements {
    Eigen::VectorXcd y_proj; ///< length m
    Eigen::MatrixXcd psi;    ///< m x N
};

/// i.i.d. CN(0, 1/L) taps, unit average channel energy.
ChannelRealization draw_channel(const OfdmConfig& cfg, Rng& rng);

/// y = H x + z: circular convolution with the taps plus per-sample
/// CN(0, noise_var) noise. noise_var = 0 disables the noise draw.
ComplexBlock apply_channel(const ChannelRealization& channel,
                           const ComplexBlock& block, double noise_var,
                           Rng& rng);

/// Restrict the demodulated receive block to the measurement tones and
/// materialize the operator those observations see. Assumes the channel is
/// known at the receiver.
ProjectedMeasurements project_measurements(const ComplexBlock& y,
                                           const ChannelRealization& channel,
                                           const ToneMap& tones);

/// Per-tone zero-forcing equalization with a Tikhonov floor against
/// spectral nulls: x_hat(k) = conj(h(k)) y(k) / (|h(k)|^2 + eps).
/// Returns the frequency-domain estimate over all N tones.
Eigen::VectorXcd equalize_zf(const ComplexBlock& y,
                             const ChannelRealization& channel,
                             double eps = 1e-12);

} // namespace clipcs
