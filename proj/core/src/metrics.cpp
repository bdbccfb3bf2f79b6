#include "clipcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "clipcs/scene.hpp"

namespace clipcs {

double ser(const std::vector<int>& decoded, const std::vector<int>& truth) {
    if (decoded.size() != truth.size())
        throw std::invalid_argument("ser: length mismatch");
    if (decoded.empty()) throw std::invalid_argument("ser: empty input");
    int errors = 0;
    for (std::size_t i = 0; i < decoded.size(); ++i)
        if (decoded[i] != truth[i]) ++errors;
    return static_cast<double>(errors) / static_cast<double>(decoded.size());
}

double nmse(const Eigen::VectorXcd& c, const Eigen::VectorXcd& c_hat) {
    const double denom = c.squaredNorm();
    if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (c - c_hat).squaredNorm() / denom;
}

CcdfTable empirical_ccdf(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical_ccdf: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());

    CcdfTable table;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        table.value.push_back(samples[i]);
        table.ccdf.push_back(static_cast<double>(samples.size() - i - 1) / n);
    }
    return table;
}

CcdfTable papr_reduction_ccdf(const std::vector<TrialRecord>& trials) {
    if (trials.size() < 100)
        throw std::invalid_argument("papr_reduction_ccdf: needs >= 100 trials");
    std::vector<double> samples;
    samples.reserve(trials.size());
    for (const auto& t : trials) samples.push_back(t.papr_reduction_db);
    return empirical_ccdf(std::move(samples));
}

namespace {

double sinr_s1(const CapacitySummary& s) {
    return s.gain * s.signal_var /
           (s.gain * s.clip_var_full + s.noise_var_s1);
}

} // namespace

double capacity_c1(const CapacitySummary& s) {
    return std::log2(1.0 + sinr_s1(s));
}

double capacity_c2(const CapacitySummary& s) {
    const double sinr = s.gain * s.signal_var /
                        (s.gain * s.resid_var + s.noise_var_s2);
    const double used = static_cast<double>(s.n_tones - s.n_reserved) /
                        static_cast<double>(s.n_tones);
    return used * std::log2(1.0 + sinr);
}

bool capacity_condition(const CapacitySummary& s) {
    // C2 > C1 unwrapped: (1 + sinr2) > (1 + sinr1)^{N/(N-m)} iff the
    // residual variance is below the break-even level.
    const double exponent = static_cast<double>(s.n_tones) /
                            static_cast<double>(s.n_tones - s.n_reserved);
    const double k = std::pow(1.0 + sinr_s1(s), exponent) - 1.0;
    const double break_even = s.signal_var / k - s.noise_var_s2 / s.gain;
    return s.resid_var < break_even;
}

bool support_included(const std::vector<int>& support,
                      const Eigen::VectorXd& weights, int beta) {
    const int n = static_cast<int>(weights.size());
    if (beta >= n) return true;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return weights(a) < weights(b); });
    std::vector<char> in_pool(n, 0);
    for (int i = 0; i < beta; ++i) in_pool[order[i]] = 1;
    for (int idx : support)
        if (!in_pool[idx]) return false;
    return true;
}

double inclusion_probability(const OfdmConfig& cfg, double gamma_mult,
                             double beta_fraction, int n_trials) {
    if (beta_fraction <= 0.0 || beta_fraction > 1.0)
        throw std::invalid_argument("inclusion_probability: beta_fraction in (0,1]");
    if (n_trials < 1)
        throw std::invalid_argument("inclusion_probability: n_trials >= 1");

    const QamModem modem(cfg.qam_order);
    const int beta = static_cast<int>(
        std::lround(beta_fraction * cfg.n_subcarriers));
    int hits = 0;
    for (int t = 0; t < n_trials; ++t) {
        const TrialScene scene = make_scene(
            cfg, modem, gamma_mult, ClipScheme::kPeakSuppression,
            std::nullopt, static_cast<std::uint64_t>(t));
        const WeightVector w = ps_weights(scene.xbar_hat_time, scene.gamma_abs,
                                          scene.sigma_e);
        if (support_included(scene.clip.support, w.w, beta)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n_trials);
}

SweepCell aggregate_trials(double gamma, Method method,
                           const std::vector<TrialRecord>& records) {
    SweepCell cell;
    cell.gamma = gamma;
    cell.method = method;
    cell.trials = static_cast<int>(records.size());
    if (records.empty()) return cell;

    double ser_sum = 0.0, ser_sq = 0.0, papr_sum = 0.0, resid_sum = 0.0;
    double nmse_sum = 0.0;
    int nmse_count = 0;
    std::vector<double> wall_ms;
    wall_ms.reserve(records.size());
    for (const auto& r : records) {
        ser_sum += r.ser;
        ser_sq += r.ser * r.ser;
        papr_sum += r.papr_reduction_db;
        resid_sum += r.residual_clip_var;
        if (std::isfinite(r.nmse)) {
            nmse_sum += r.nmse;
            ++nmse_count;
        }
        wall_ms.push_back(r.wall_time * 1e3);
    }
    const double n = static_cast<double>(records.size());
    cell.ser_mean = ser_sum / n;
    const double var = std::max(0.0, ser_sq / n - cell.ser_mean * cell.ser_mean);
    cell.ser_ci95 = n > 1 ? 1.96 * std::sqrt(var / (n - 1)) : 0.0;
    cell.nmse_mean = nmse_count > 0
                         ? nmse_sum / nmse_count
                         : std::numeric_limits<double>::quiet_NaN();
    cell.papr_red_db_mean = papr_sum / n;
    cell.resid_var_mean = resid_sum / n;

    std::sort(wall_ms.begin(), wall_ms.end());
    const std::size_t mid = wall_ms.size() / 2;
    cell.wall_ms_median = wall_ms.size() % 2 == 1
                              ? wall_ms[mid]
                              : 0.5 * (wall_ms[mid - 1] + wall_ms[mid]);
    return cell;
}

} // namespace clipcs
