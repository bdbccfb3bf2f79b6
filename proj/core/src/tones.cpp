#include "clipcs/tones.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace clipcs {

Eigen::VectorXcd ToneMap::select_data(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out(data_tones.size());
    for (std::size_t i = 0; i < data_tones.size(); ++i) out(i) = v(data_tones[i]);
    return out;
}

Eigen::VectorXcd ToneMap::select_measurement(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out(measurement_tones.size());
    for (std::size_t i = 0; i < measurement_tones.size(); ++i)
        out(i) = v(measurement_tones[i]);
    return out;
}

Eigen::VectorXcd ToneMap::scatter_data(const Eigen::VectorXcd& d) const {
    if (d.size() != static_cast<Eigen::Index>(data_tones.size()))
        throw std::invalid_argument("scatter_data: length mismatch");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_tones());
    for (std::size_t i = 0; i < data_tones.size(); ++i) out(data_tones[i]) = d(i);
    return out;
}

ToneMap draw_tone_map(const OfdmConfig& cfg, Rng& rng) {
    cfg.validate();
    const int n = cfg.n_subcarriers;
    const int m = cfg.n_measurement_tones;

    // Partial Fisher-Yates: the first m entries are a uniform m-subset.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < m; ++i) {
        const int j = i + rng.uniform_int(n - i);
        std::swap(perm[i], perm[j]);
    }

    ToneMap map;
    map.measurement_tones.assign(perm.begin(), perm.begin() + m);
    map.data_tones.assign(perm.begin() + m, perm.end());
    std::sort(map.measurement_tones.begin(), map.measurement_tones.end());
    std::sort(map.data_tones.begin(), map.data_tones.end());
    return map;
}

} // namespace clipcs
