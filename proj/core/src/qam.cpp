#include "clipcs/qam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clipcs {

namespace {

int int_log2(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    return b;
}

unsigned gray_encode(unsigned i) { return i ^ (i >> 1); }

std::vector<std::complex<double>> square_constellation(int order, int bps) {
    const int side = 1 << (bps / 2);
    // Average energy of odd-integer levels +-1..+-(side-1) on both axes.
    const double mean_energy = 2.0 * (side * side - 1) / 3.0;
    const double scale = 1.0 / std::sqrt(mean_energy);

    // gray(i) -> level index i, applied independently per axis.
    std::vector<int> gray_to_index(side);
    for (int i = 0; i < side; ++i) gray_to_index[gray_encode(i)] = i;

    std::vector<std::complex<double>> points(order);
    const int axis_bits = bps / 2;
    for (int label = 0; label < order; ++label) {
        const int vi = label >> axis_bits;
        const int vq = label & ((1 << axis_bits) - 1);
        const int ii = gray_to_index[vi];
        const int iq = gray_to_index[vq];
        points[label] = {scale * (2 * ii - (side - 1)),
                         scale * (2 * iq - (side - 1))};
    }
    return points;
}

std::vector<std::complex<double>> cross32_constellation() {
    // 6x6 odd-integer grid minus the corners; mean energy 20.
    const double scale = 1.0 / std::sqrt(20.0);
    std::vector<std::complex<double>> walk;
    walk.reserve(32);
    const int levels[6] = {-5, -3, -1, 1, 3, 5};
    for (int col = 0; col < 6; ++col) {
        const int x = levels[col];
        std::vector<int> ys;
        for (int row = 0; row < 6; ++row) {
            const int y = levels[row];
            if (std::abs(x) == 5 && std::abs(y) == 5) continue;
            ys.push_back(y);
        }
        if (col % 2 == 1) std::reverse(ys.begin(), ys.end()); // snake
        for (int y : ys) walk.emplace_back(scale * x, scale * y);
    }

    std::vector<std::complex<double>> points(32);
    for (unsigned i = 0; i < 32; ++i) points[gray_encode(i)] = walk[i];
    return points;
}

} // namespace

QamModem::QamModem(int order) : order_(order), bits_per_symbol_(int_log2(order)) {
    if ((1 << bits_per_symbol_) != order)
        throw std::invalid_argument("qam order must be a power of two");
    if (order == 32) {
        points_ = cross32_constellation();
    } else if (bits_per_symbol_ % 2 == 0 && order >= 4) {
        points_ = square_constellation(order, bits_per_symbol_);
    } else {
        throw std::invalid_argument("qam order must be a power of 4 or 32");
    }
}

int QamModem::demap_index(std::complex<double> received) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < order_; ++i) {
        const double d = std::norm(received - points_[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Eigen::VectorXcd QamModem::map_bits(const std::vector<std::uint8_t>& bits) const {
    if (bits.size() % static_cast<std::size_t>(bits_per_symbol_) != 0)
        throw std::invalid_argument("bit count not divisible by log2(M)");
    const int n = static_cast<int>(bits.size()) / bits_per_symbol_;
    Eigen::VectorXcd symbols(n);
    for (int s = 0; s < n; ++s) {
        int label = 0;
        for (int b = 0; b < bits_per_symbol_; ++b)
            label = (label << 1) | (bits[s * bits_per_symbol_ + b] & 1);
        symbols(s) = points_[label];
    }
    return symbols;
}

std::vector<std::uint8_t> QamModem::demap_bits(const Eigen::VectorXcd& symbols) const {
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * bits_per_symbol_);
    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        const int label = demap_index(symbols(s));
        for (int b = bits_per_symbol_ - 1; b >= 0; --b)
            bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    }
    return bits;
}

Eigen::VectorXcd QamModem::draw_symbols(int count, Rng& rng,
                                        std::vector<int>* labels) const {
    Eigen::VectorXcd out(count);
    if (labels) labels->resize(count);
    for (int i = 0; i < count; ++i) {
        const int label = rng.uniform_int(order_);
        out(i) = points_[label];
        if (labels) (*labels)[i] = label;
    }
    return out;
}

} // namespace clipcs
