#pragma once

#include <vector>

#include <Eigen/Dense>

#include "clipcs/config.hpp"
#include "clipcs/rng.hpp"

namespace clipcs {

/// Partition of the N tones into data tones and reserved measurement tones.
/// Both index lists are sorted ascending and disjoint by construction; the
/// selection operators S_x, S_m are realized as gathers over these lists.
struct ToneMap {
    std::vector<int> data_tones;        ///< Omega_d, |Omega_d| = k
    std::vector<int> measurement_tones; ///< Omega_m, |Omega_m| = m

    int n_tones() const {
        return static_cast<int>(data_tones.size() + measurement_tones.size());
    }

    /// S_d^T v: gather the data-tone entries of a length-N vector.
    Eigen::VectorXcd select_data(const Eigen::VectorXcd& v) const;
    /// S_m^T v: gather the measurement-tone entries of a length-N vector.
    Eigen::VectorXcd select_measurement(const Eigen::VectorXcd& v) const;
    /// S_d d: scatter k data values into a length-N vector, zeros elsewhere.
    Eigen::VectorXcd scatter_data(const Eigen::VectorXcd& d) const;
};

/// Uniformly random m-subset of {0,...,N-1} as measurement tones.
/// Deterministic given the generator state.
ToneMap draw_tone_map(const OfdmConfig& cfg, Rng& rng);

} // namespace clipcs
