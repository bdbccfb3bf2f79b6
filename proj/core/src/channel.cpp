#include "clipcs/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "clipcs/fourier.hpp"

namespace clipcs {

ChannelRealization draw_channel(const OfdmConfig& cfg, Rng& rng) {
    cfg.validate();
    const int n = cfg.n_subcarriers;
    const int l = cfg.channel_taps;

    ChannelRealization ch;
    ch.taps.resize(l);
    const double tap_var = 1.0 / static_cast<double>(l); // uniform power profile
    for (int i = 0; i < l; ++i) ch.taps(i) = rng.cgaussian(tap_var);

    Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(n);
    padded.head(l) = ch.taps;
    ch.freq_response = std::sqrt(static_cast<double>(n)) * fourier::dft(padded);
    return ch;
}

ComplexBlock apply_channel(const ChannelRealization& channel,
                           const ComplexBlock& block, double noise_var,
                           Rng& rng) {
    if (block.basis != Basis::kTime)
        throw std::invalid_argument("apply_channel: block must be in the time basis");
    if (noise_var < 0.0)
        throw std::invalid_argument("apply_channel: negative noise variance");

    const Eigen::VectorXcd spectrum = fourier::dft(block.values);
    Eigen::VectorXcd received =
        fourier::idft(channel.freq_response.cwiseProduct(spectrum).eval());
    if (noise_var > 0.0) {
        for (Eigen::Index i = 0; i < received.size(); ++i)
            received(i) += rng.cgaussian(noise_var);
    }
    return {std::move(received), Basis::kTime};
}

ProjectedMeasurements project_measurements(const ComplexBlock& y,
                                           const ChannelRealization& channel,
                                           const ToneMap& tones) {
    if (y.basis != Basis::kTime)
        throw std::invalid_argument("project_measurements: block must be in time basis");
    const int n = static_cast<int>(y.values.size());
    const int m = static_cast<int>(tones.measurement_tones.size());

    ProjectedMeasurements out;
    out.y_proj = tones.select_measurement(fourier::dft(y.values));
    out.psi.resize(m, n);
    for (int r = 0; r < m; ++r) {
        const int k = tones.measurement_tones[r];
        out.psi.row(r) =
            channel.freq_response(k) * fourier::dft_row(n, k).transpose();
    }
    return out;
}

Eigen::VectorXcd equalize_zf(const ComplexBlock& y,
                             const ChannelRealization& channel, double eps) {
    if (y.basis != Basis::kTime)
        throw std::invalid_argument("equalize_zf: block must be in time basis");
    const Eigen::VectorXcd spectrum = fourier::dft(y.values);
    const Eigen::VectorXd denom =
        channel.freq_response.cwiseAbs2().array() + eps;
    return channel.freq_response.conjugate()
        .cwiseProduct(spectrum)
        .cwiseQuotient(denom.cast<std::complex<double>>());
}

} // namespace clipcs
