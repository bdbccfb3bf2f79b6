#include "clipcs/config.hpp"

#include <stdexcept>
#include <string>

namespace clipcs {

namespace {

bool is_power_of_four(int m) {
    if (m < 4) return false;
    while (m % 4 == 0) m /= 4;
    return m == 1;
}

} // namespace

void OfdmConfig::validate() const {
    if (n_subcarriers <= 0)
        throw std::invalid_argument("n_subcarriers must be positive");
    // The spec's examples and the all-tones reference system both need m = 0,
    // so zero reservation is accepted here.
    if (n_measurement_tones < 0 || n_measurement_tones >= n_subcarriers)
        throw std::invalid_argument("n_measurement_tones must satisfy 0 <= m < N");
    if (channel_taps <= 0 || channel_taps > n_subcarriers)
        throw std::invalid_argument("channel_taps must satisfy 0 < L <= N");
    if (qam_order != 32 && !is_power_of_four(qam_order))
        throw std::invalid_argument(
            "qam_order must be a power of 4 or the 32-cross, got " +
            std::to_string(qam_order));
}

} // namespace clipcs
