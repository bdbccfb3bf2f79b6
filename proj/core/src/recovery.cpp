#include "clipcs/recovery.hpp"

#include "clipcs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clipcs {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename Mat>
double operator_norm_sq(const Mat& a) {
    using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
    if (a.cols() == 0 || a.rows() == 0) return 0.0;
    // Fixed pseudo-random start: structured operators (partial DFTs) can
    // annihilate simple deterministic vectors outright.
    Rng rng(0x9e3779b9u);
    Vec v(a.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if constexpr (std::is_same_v<typename Mat::Scalar, double>)
            v(i) = rng.gaussian();
        else
            v(i) = rng.cgaussian();
    }
    v /= v.norm();
    double lambda = 0.0;
    for (int it = 0; it < 60; ++it) {
        Vec w = a.adjoint() * (a * v);
        const double norm = w.norm();
        if (norm == 0.0) break;
        v = w / norm;
        if (it > 0 && std::abs(norm - lambda) <= 1e-7 * std::max(1.0, norm)) {
            lambda = norm;
            break;
        }
        lambda = norm;
    }
    // ||A||_2^2 <= ||A||_F^2 gives a safe step if the iteration degenerated.
    const double frob = a.squaredNorm();
    if (!(lambda > 1e-12 * frob)) lambda = frob;
    return lambda;
}

/// Accelerated proximal gradient with objective-based restart, so iterates
/// never increase ||b - A x||^2 + lambda sum w_i |x_i|. Deterministic fixed
/// step 1 / (2 sigma_max^2).
template <typename Mat, typename Vec, typename Prox>
Vec fista(const Mat& a, const Vec& b, double lambda,
          const Eigen::VectorXd& weights, const SolverOptions& opts,
          const Prox& prox, SolverDiagnostics& diag) {
    const double lip = 2.0 * operator_norm_sq(a);
    const double step = lip > 0.0 ? 1.0 / (1.05 * lip) : 1.0;

    const auto objective = [&](const Vec& x) {
        double l1 = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            l1 += weights(i) * std::abs(x(i));
        return (b - a * x).squaredNorm() + lambda * l1;
    };

    Vec x = Vec::Zero(a.cols());
    Vec y = x;
    double t = 1.0;
    double fx = objective(x);
    if (opts.objective_trace) opts.objective_trace->push_back(fx);

    diag.converged = false;
    for (int k = 1; k <= opts.max_iters; ++k) {
        diag.iterations = k;
        Vec grad = 2.0 * (a.adjoint() * (a * y - b)).eval();
        Vec z = prox((y - step * grad).eval(), step * lambda);
        double fz = objective(z);
        if (fz > fx) {
            // Momentum overshot: restart from x, where the plain proximal
            // step cannot increase the objective.
            grad = 2.0 * (a.adjoint() * (a * x - b)).eval();
            z = prox((x - step * grad).eval(), step * lambda);
            fz = objective(z);
            t = 1.0;
            if (fz > fx) {
                z = x;
                fz = fx;
            }
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = z + ((t - 1.0) / t_next) * (z - x);
        x = z;
        t = t_next;

        if (opts.objective_trace) opts.objective_trace->push_back(fz);
        const double rel = std::abs(fx - fz) / std::max(fx, 1e-300);
        fx = fz;
        if (rel < opts.tol) {
            diag.converged = true;
            break;
        }
    }
    diag.final_objective = fx;
    return x;
}

Eigen::VectorXcd complex_prox(const Eigen::VectorXcd& v, double base_threshold,
                              const Eigen::VectorXd& weights) {
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        const double thr = base_threshold * weights(i);
        out(i) = mag > thr ? v(i) * ((mag - thr) / mag) : std::complex<double>(0.0);
    }
    return out;
}

Eigen::VectorXd nonneg_prox(const Eigen::VectorXd& v, double base_threshold,
                            const Eigen::VectorXd& weights) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out(i) = std::max(v(i) - base_threshold * weights(i), 0.0);
    return out;
}

/// lambda <= 0 selects a penalty far below the kill level, for noiseless use.
template <typename Mat, typename Vec>
double effective_lambda(double lambda, const Mat& a, const Vec& b) {
    if (lambda > 0.0) return lambda;
    const double kill = 2.0 * (a.adjoint() * b).cwiseAbs().maxCoeff();
    return kill > 0.0 ? 1e-6 * kill : 1.0;
}

template <typename Vec>
std::vector<int> extract_support(Vec& x, double rel_threshold) {
    double max_mag = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        max_mag = std::max(max_mag, std::abs(x(i)));
    std::vector<int> support;
    if (max_mag == 0.0) return support;
    const double thr = rel_threshold * max_mag;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x(i)) > thr)
            support.push_back(static_cast<int>(i));
        else
            x(i) = typename Vec::Scalar(0);
    }
    return support;
}

Eigen::MatrixXcd gather_columns(const Eigen::MatrixXcd& psi,
                                const std::vector<int>& support) {
    Eigen::MatrixXcd phi(psi.rows(), support.size());
    for (std::size_t j = 0; j < support.size(); ++j)
        phi.col(j) = psi.col(support[j]);
    return phi;
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::kNone: return "none";
        case Method::kLasso: return "lasso";
        case Method::kWl: return "wl";
        case Method::kPalStr: return "pal-str";
        case Method::kPalRts: return "pal-rts";
        case Method::kWpal: return "wpal";
        case Method::kBetaFbmp: return "beta-fbmp";
        case Method::kOracleLs: return "oracle-ls";
        case Method::kOraclePhase: return "oracle-phase";
    }
    return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
    for (Method m : {Method::kNone, Method::kLasso, Method::kWl, Method::kPalStr,
                     Method::kPalRts, Method::kWpal, Method::kBetaFbmp,
                     Method::kOracleLs, Method::kOraclePhase}) {
        if (name == method_name(m)) return m;
    }
    return std::nullopt;
}

double default_lambda(double noise_sigma, int n, double kappa) {
    return kappa * noise_sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

RecoveryEstimate lasso(const Eigen::VectorXcd& y_proj,
                       const Eigen::MatrixXcd& psi, const SolverOptions& opts) {
    WeightVector unit{Eigen::VectorXd::Ones(psi.cols())};
    RecoveryEstimate est = weighted_lasso(y_proj, psi, opts, unit);
    est.method = Method::kLasso;
    est.weights_used.resize(0);
    return est;
}

RecoveryEstimate weighted_lasso(const Eigen::VectorXcd& y_proj,
                                const Eigen::MatrixXcd& psi,
                                const SolverOptions& opts,
                                const WeightVector& weights) {
    if (weights.w.size() != psi.cols())
        throw std::invalid_argument("weighted_lasso: weight length mismatch");
    if (!(weights.w.array() >= 0.0).all() || !weights.w.allFinite())
        throw std::invalid_argument("weighted_lasso: weights must be finite and >= 0");

    RecoveryEstimate est;
    est.method = Method::kWl;
    est.weights_used = weights.w;

    const double lambda = effective_lambda(opts.lambda, psi, y_proj);
    const auto prox = [&](const Eigen::VectorXcd& v, double thr) {
        return complex_prox(v, thr, weights.w);
    };
    est.c_hat = fista(psi, y_proj, lambda, weights.w, opts, prox, est.diagnostics);
    est.support_hat = extract_support(est.c_hat, opts.support_rel_threshold);
    return est;
}

void cap_support(RecoveryEstimate& estimate, int max_size) {
    if (max_size < 0) max_size = 0;
    if (static_cast<int>(estimate.support_hat.size()) <= max_size) return;
    std::vector<int> order = estimate.support_hat;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(estimate.c_hat(a)) > std::abs(estimate.c_hat(b));
    });
    for (std::size_t j = max_size; j < order.size(); ++j)
        estimate.c_hat(order[j]) = 0.0;
    order.resize(max_size);
    std::sort(order.begin(), order.end());
    estimate.support_hat = std::move(order);
}

RecoveryEstimate refine_ls(const RecoveryEstimate& estimate,
                           const Eigen::VectorXcd& y_proj,
                           const Eigen::MatrixXcd& psi) {
    const int s = static_cast<int>(estimate.support_hat.size());
    if (s > psi.rows())
        throw std::invalid_argument("refine_ls: support larger than measurement count");

    RecoveryEstimate out = estimate;
    out.c_hat = Eigen::VectorXcd::Zero(psi.cols());
    out.support_hat.clear();
    if (s == 0) return out;

    const Eigen::MatrixXcd phi = gather_columns(psi, estimate.support_hat);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(phi);
    if (cod.rank() < s) out.diagnostics.rank_deficient = true;
    const Eigen::VectorXcd v = cod.solve(y_proj);

    for (int j = 0; j < s; ++j) {
        if (v(j) != std::complex<double>(0.0)) {
            out.c_hat(estimate.support_hat[j]) = v(j);
            out.support_hat.push_back(estimate.support_hat[j]);
        }
    }
    return out;
}

RecoveryEstimate refine_lmmse(const RecoveryEstimate& estimate,
                              const Eigen::VectorXcd& y_proj,
                              const Eigen::MatrixXcd& psi, double prior_var,
                              std::complex<double> prior_mean,
                              double noise_var) {
    const int s = static_cast<int>(estimate.support_hat.size());
    if (s > psi.rows())
        throw std::invalid_argument("refine_lmmse: support larger than measurement count");
    if (prior_var <= 0.0)
        throw std::invalid_argument("refine_lmmse: prior_var must be positive");

    RecoveryEstimate out = estimate;
    out.c_hat = Eigen::VectorXcd::Zero(psi.cols());
    out.support_hat.clear();
    if (s == 0) return out;

    const Eigen::MatrixXcd phi = gather_columns(psi, estimate.support_hat);
    const Eigen::Index m = psi.rows();
    Eigen::MatrixXcd inner = prior_var * (phi * phi.adjoint());
    inner += noise_var * Eigen::MatrixXcd::Identity(m, m);
    const Eigen::VectorXcd centered =
        y_proj - phi * Eigen::VectorXcd::Constant(s, prior_mean);
    const Eigen::VectorXcd v =
        prior_var * (phi.adjoint() * inner.ldlt().solve(centered));

    for (int j = 0; j < s; ++j) {
        if (v(j) != std::complex<double>(0.0)) {
            out.c_hat(estimate.support_hat[j]) = v(j);
            out.support_hat.push_back(estimate.support_hat[j]);
        }
    }
    return out;
}

WeightVector ps_weights(const Eigen::VectorXcd& xbar_hat_time, double gamma,
                        double sigma_e, double sigma_x2, double clip_level,
                        double w_min) {
    if (sigma_e <= 0.0) throw std::invalid_argument("ps_weights: sigma_e must be > 0");
    if (gamma <= 0.0) throw std::invalid_argument("ps_weights: gamma must be > 0");
    if (clip_level <= 0.0) clip_level = gamma;

    const double sigma_e2 = sigma_e * sigma_e;
    const double sigma_sum = sigma_x2 + sigma_e2;
    const double eta = 1.0 - std::exp(-gamma * gamma / sigma_x2);

    WeightVector out;
    out.w.resize(xbar_hat_time.size());
    for (Eigen::Index i = 0; i < xbar_hat_time.size(); ++i) {
        const double d = std::abs(std::abs(xbar_hat_time(i)) - clip_level);
        // The no-clip density argument clip_level - d can go negative for
        // envelopes past twice the clip level; evaluate at its magnitude.
        const double u = std::abs(clip_level - d);
        const double diamond = 2.0 * eta * u / sigma_sum;
        const double club = (clip_level - d) * (clip_level - d) / sigma_sum;
        const double triangle = 2.0 * (1.0 - eta) * d / sigma_e2;
        const double spade = d * d / sigma_e2;

        double w;
        if (club <= spade) {
            w = diamond / (diamond + triangle * std::exp(club - spade));
        } else {
            const double scaled = diamond * std::exp(spade - club);
            w = scaled / (scaled + triangle);
        }
        if (!std::isfinite(w)) w = w_min;
        out.w(i) = std::min(1.0, std::max(w_min, w));
    }
    return out;
}

PhaseVector antiphase_of(const Eigen::VectorXcd& xbar_hat_time) {
    PhaseVector theta;
    theta.phases.resize(xbar_hat_time.size());
    for (Eigen::Index i = 0; i < xbar_hat_time.size(); ++i)
        theta.phases(i) = std::arg(xbar_hat_time(i)) + kPi;
    return theta;
}

Eigen::MatrixXd phase_rotate_model(const Eigen::MatrixXcd& psi,
                                   const PhaseVector& theta) {
    if (theta.phases.size() != psi.cols())
        throw std::invalid_argument("phase_rotate_model: phase length mismatch");
    Eigen::MatrixXcd rotated = psi;
    for (Eigen::Index j = 0; j < psi.cols(); ++j)
        rotated.col(j) *= std::polar(1.0, theta.phases(j));

    Eigen::MatrixXd stacked(2 * psi.rows(), psi.cols());
    stacked.topRows(psi.rows()) = rotated.real();
    stacked.bottomRows(psi.rows()) = rotated.imag();
    return stacked;
}

RecoveryEstimate recover_rts(const Eigen::VectorXcd& y_proj,
                             const Eigen::MatrixXcd& psi,
                             const PhaseVector& theta,
                             const SolverOptions& opts,
                             const WeightVector* weights, bool ls_refine) {
    const Eigen::MatrixXd stacked = phase_rotate_model(psi, theta);
    Eigen::VectorXd b(2 * psi.rows());
    b.head(psi.rows()) = y_proj.real();
    b.tail(psi.rows()) = y_proj.imag();

    const Eigen::VectorXd w =
        weights ? weights->w : Eigen::VectorXd::Ones(psi.cols());
    if (w.size() != psi.cols())
        throw std::invalid_argument("recover_rts: weight length mismatch");

    RecoveryEstimate est;
    est.method = weights ? Method::kWpal : Method::kPalRts;
    if (weights) est.weights_used = w;

    const double lambda = effective_lambda(opts.lambda, stacked, b);
    const auto prox = [&](const Eigen::VectorXd& v, double thr) {
        return nonneg_prox(v, thr, w);
    };
    Eigen::VectorXd mags = fista(stacked, b, lambda, w, opts, prox, est.diagnostics);
    std::vector<int> support = extract_support(mags, opts.support_rel_threshold);

    // The refit cannot resolve more unknowns than complex measurements.
    if (static_cast<Eigen::Index>(support.size()) > psi.rows()) {
        std::stable_sort(support.begin(), support.end(), [&](int l, int r) {
            return mags(l) > mags(r);
        });
        for (std::size_t j = psi.rows(); j < support.size(); ++j)
            mags(support[j]) = 0.0;
        support.resize(psi.rows());
        std::sort(support.begin(), support.end());
    }

    if (ls_refine && !support.empty() &&
        static_cast<Eigen::Index>(support.size()) <= stacked.rows()) {
        Eigen::MatrixXd sub(stacked.rows(), support.size());
        for (std::size_t j = 0; j < support.size(); ++j)
            sub.col(j) = stacked.col(support[j]);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
        if (cod.rank() < static_cast<Eigen::Index>(support.size()))
            est.diagnostics.rank_deficient = true;
        const Eigen::VectorXd v = cod.solve(b);
        mags.setZero();
        for (std::size_t j = 0; j < support.size(); ++j)
            mags(support[j]) = std::max(v(j), 0.0); // magnitudes stay nonnegative
        support = extract_support(mags, 0.0);
    }

    est.c_hat = Eigen::VectorXcd::Zero(psi.cols());
    for (int i : support)
        est.c_hat(i) = std::polar(mags(i), theta.phases(i));
    est.support_hat = std::move(support);
    return est;
}

RecoveryEstimate recover_str(const Eigen::VectorXcd& y_proj,
                             const Eigen::MatrixXcd& psi,
                             const PhaseVector& theta,
                             const SolverOptions& opts,
                             const WeightVector* weights, bool ls_refine) {
    if (theta.phases.size() != psi.cols())
        throw std::invalid_argument("recover_str: phase length mismatch");

    RecoveryEstimate base;
    if (weights) {
        base = weighted_lasso(y_proj, psi, opts, *weights);
    } else {
        base = lasso(y_proj, psi, opts);
    }
    if (ls_refine) {
        SolverDiagnostics solver_diag = base.diagnostics;
        cap_support(base, static_cast<int>(psi.rows()));
        base = refine_ls(base, y_proj, psi);
        solver_diag.rank_deficient = base.diagnostics.rank_deficient;
        base.diagnostics = solver_diag;
    }

    RecoveryEstimate out = base;
    out.method = Method::kPalStr;
    for (int i : out.support_hat)
        out.c_hat(i) = std::polar(std::abs(out.c_hat(i)), theta.phases(i));
    return out;
}

RecoveryEstimate force_digital_magnitudes(const RecoveryEstimate& estimate,
                                          double zeta) {
    if (zeta <= 0.0)
        throw std::invalid_argument("force_digital_magnitudes: zeta must be > 0");
    RecoveryEstimate out = estimate;
    out.support_hat.clear();
    for (Eigen::Index i = 0; i < out.c_hat.size(); ++i) {
        const double mag = std::abs(out.c_hat(i));
        if (mag == 0.0) continue;
        if (mag >= 0.5 * zeta) {
            out.c_hat(i) *= zeta / mag;
            out.support_hat.push_back(static_cast<int>(i));
        } else {
            out.c_hat(i) = 0.0;
        }
    }
    return out;
}

RecoveryEstimate oracle_ls(const Eigen::VectorXcd& y_proj,
                           const Eigen::MatrixXcd& psi,
                           const std::vector<int>& true_support) {
    RecoveryEstimate seed;
    seed.method = Method::kOracleLs;
    seed.c_hat = Eigen::VectorXcd::Zero(psi.cols());
    seed.support_hat = true_support;
    RecoveryEstimate out = refine_ls(seed, y_proj, psi);
    out.method = Method::kOracleLs;
    return out;
}

} // namespace clipcs
