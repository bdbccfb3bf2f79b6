#pragma once

#include <cstdint>
#include <cmath>

namespace clipcs {

/// System constants for one OFDM link: block size, reserved-tone count,
/// constellation, channel length and operating SNR. Immutable after
/// construction; all Monte Carlo state derives from `seed`.
struct OfdmConfig {
    int n_subcarriers = 256;     ///< N, block length / number of tones
    int n_measurement_tones = 51;///< m, tones withheld from data and observed at the receiver
    int qam_order = 32;          ///< M, constellation size (power of 4, or the 32-cross)
    int channel_taps = 32;       ///< L, multipath impulse-response length
    double snr_db = 30.0;        ///< received E||Hx||^2 / E||z||^2 in dB
    std::uint64_t seed = 1;      ///< master seed for all derived RNG streams

    /// Number of data tones k = N - m.
    int n_data_tones() const { return n_subcarriers - n_measurement_tones; }

    /// Rayleigh parameter of the time-domain envelope. With unit-average-power
    /// data symbols and a unitary DFT the time samples are asymptotically
    /// CN(0,1), so sigma_|X| = sqrt(1/2). Derived, not configurable.
    double envelope_sigma() const { return 0.70710678118654752440; }

    /// Per-sample complex noise variance sigma_z^2 implied by snr_db.
    /// The block carries k unit-power symbols, so E||Hx||^2 = k and
    /// E||z||^2 = N sigma_z^2.
    double noise_var() const {
        const double snr = std::pow(10.0, snr_db / 10.0);
        return static_cast<double>(n_data_tones()) /
               (static_cast<double>(n_subcarriers) * snr);
    }

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

} // namespace clipcs
