#include "clipcs/ofdm.hpp"

#include <cmath>
#include <stdexcept>

namespace clipcs {

ComplexBlock modulate(const Eigen::VectorXcd& data_symbols, const ToneMap& tones) {
    if (data_symbols.size() != static_cast<Eigen::Index>(tones.data_tones.size()))
        throw std::invalid_argument("modulate: symbol count != data tone count");
    const Eigen::VectorXcd spectrum = tones.scatter_data(data_symbols);
    return {fourier::idft(spectrum), Basis::kTime};
}

double papr_db(const ComplexBlock& block) {
    if (block.basis != Basis::kTime)
        throw std::invalid_argument("papr: block must be in the time basis");
    const Eigen::VectorXd power = block.values.cwiseAbs2();
    const double mean = power.mean();
    if (mean <= 0.0) throw std::invalid_argument("papr: all-zero block");
    return 10.0 * std::log10(power.maxCoeff() / mean);
}

} // namespace clipcs
