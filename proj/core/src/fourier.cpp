#include "clipcs/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace clipcs {
namespace fourier {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// Plan creation is not thread-safe in FFTW; executing a plan on fresh
// buffers via fftw_execute_dft is. Plans are created FFTW_UNALIGNED so the
// new-array execute interface accepts arbitrary Eigen buffers, and
// FFTW_ESTIMATE keeps plan selection deterministic run to run.
PlanPair& plans_for(int n) {
    static std::mutex mu;
    static std::unordered_map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Eigen::VectorXcd scratch_in(n), scratch_out(n);
    auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
    auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
    PlanPair p;
    p.forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.forward || !p.backward)
        throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(n, p).first->second;
}

Eigen::VectorXcd transform(const Eigen::VectorXcd& v, bool forward) {
    const int n = static_cast<int>(v.size());
    if (n == 0) throw std::invalid_argument("dft of empty vector");
    PlanPair& p = plans_for(n);
    Eigen::VectorXcd in = v;
    Eigen::VectorXcd out(n);
    fftw_execute_dft(forward ? p.forward : p.backward,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    out *= 1.0 / std::sqrt(static_cast<double>(n));
    return out;
}

} // namespace

Eigen::VectorXcd dft(const Eigen::VectorXcd& v) { return transform(v, true); }

Eigen::VectorXcd idft(const Eigen::VectorXcd& v) { return transform(v, false); }

Eigen::VectorXcd dft_row(int n, int k) {
    Eigen::VectorXcd row(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int l = 0; l < n; ++l) {
        const double phase = -2.0 * M_PI * static_cast<double>(k) *
                             static_cast<double>(l) / static_cast<double>(n);
        row(l) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return row;
}

} // namespace fourier
} // namespace clipcs
