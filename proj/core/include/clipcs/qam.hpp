#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clipcs/rng.hpp"

namespace clipcs {

/// Unit-average-power QAM constellation with Gray-like labeling.
///
/// Powers of four use a square grid with independent Gray coding per axis.
/// M = 32 uses the standard cross (6x6 grid with the four corners removed)
/// labeled along a boustrophedon walk with binary-reflected Gray codes, so
/// path-adjacent points differ in one bit. Demapping is minimum Euclidean
/// distance.
class QamModem {
public:
    explicit QamModem(int order);

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    const std::vector<std::complex<double>>& constellation() const { return points_; }

    std::complex<double> map_index(int label) const { return points_[label]; }
    int demap_index(std::complex<double> received) const;

    /// bits (MSB-first groups of log2 M) -> symbols. Throws on a bit count
    /// that is not a multiple of log2 M.
    Eigen::VectorXcd map_bits(const std::vector<std::uint8_t>& bits) const;

    /// symbols -> bits by minimum-distance decisions.
    std::vector<std::uint8_t> demap_bits(const Eigen::VectorXcd& symbols) const;

    /// i.i.d. uniform constellation draw; optionally reports the labels.
    Eigen::VectorXcd draw_symbols(int count, Rng& rng,
                                  std::vector<int>* labels = nullptr) const;

private:
    int order_;
    int bits_per_symbol_;
    std::vector<std::complex<double>> points_; // indexed by label
};

} // namespace clipcs
