#pragma once

#include <Eigen/Dense>

#include "clipcs/block.hpp"
#include "clipcs/tones.hpp"

namespace clipcs {

/// Place k data symbols on the data tones and take the unitary IDFT:
/// x = F^H S_d d. Reserved tones are empty at the transmitter.
ComplexBlock modulate(const Eigen::VectorXcd& data_symbols, const ToneMap& tones);

/// Peak-to-average power ratio of a time-domain block, in dB:
/// 10 log10(max|x(i)|^2 / mean|x(i)|^2). Throws on an all-zero block.
double papr_db(const ComplexBlock& block);

} // namespace clipcs
