#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "clipcs/clipper.hpp"
#include "clipcs/config.hpp"

namespace clipcs {

/// Receiver-side estimators of the clipping signal.
enum class Method {
    kNone,        ///< lower bound: no estimation, c_hat = 0
    kLasso,       ///< l1-penalized least squares + LS refinement
    kWl,          ///< data-weighted lasso + LS refinement
    kPalStr,      ///< lasso, then phases replaced from the data estimate
    kPalRts,      ///< phases fused into the operator, real nonnegative lasso
    kWpal,        ///< weighted + phase-augmented (weighted RtS)
    kBetaFbmp,    ///< truncated greedy Bayesian MMSE over candidate supports
    kOracleLs,    ///< upper bound: LS on the true support
    kOraclePhase, ///< RtS driven by the true clip phases
};

const char* method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct SolverDiagnostics {
    int iterations = 0;
    double final_objective = 0.0;
    bool converged = true;
    bool rank_deficient = false;
    bool truncation_warning = false;
    long evidence_evaluations = 0;
};

struct RecoveryEstimate {
    Eigen::VectorXcd c_hat;
    std::vector<int> support_hat; ///< exactly the nonzero entries of c_hat
    Method method = Method::kNone;
    SolverDiagnostics diagnostics;
    Eigen::VectorXd weights_used; ///< empty unless a weighted solver ran
};

/// Nonnegative per-coordinate l1 weights; the posterior scheme keeps
/// entries in (0, 1].
struct WeightVector {
    Eigen::VectorXd w;
};

/// Diagonal phase matrix Theta = diag(e^{j theta}), stored as angles.
struct PhaseVector {
    Eigen::VectorXd phases;
};

struct SolverOptions {
    double lambda = 0.0; ///< l1 penalty; <= 0 selects a tiny data-scaled value
    double tol = 1e-8;   ///< relative objective change for convergence
    int max_iters = 2000;
    double support_rel_threshold = 1e-3; ///< |c_i| > thr * max|c| joins the support
    std::vector<double>* objective_trace = nullptr; ///< optional instrumentation
};

/// kappa * sigma_z * sqrt(2 ln N). Returns 0 for sigma_z = 0, which the
/// solvers replace by a tiny observation-scaled penalty.
double default_lambda(double noise_sigma, int n, double kappa = 1.0);

/// argmin_c ||y - Psi c||^2 + lambda ||c||_1 over complex c by monotone
/// accelerated proximal gradient (magnitude soft-threshold preserves phase).
RecoveryEstimate lasso(const Eigen::VectorXcd& y_proj,
                       const Eigen::MatrixXcd& psi, const SolverOptions& opts);

/// argmin_c ||y - Psi c||^2 + lambda sum_i w_i |c_i|. One-shot weights;
/// unit weights reproduce lasso() bit for bit.
RecoveryEstimate weighted_lasso(const Eigen::VectorXcd& y_proj,
                                const Eigen::MatrixXcd& psi,
                                const SolverOptions& opts,
                                const WeightVector& weights);

/// Keep only the max_size largest-magnitude entries of the estimate; the
/// rest leave the support and become exact zeros.
void cap_support(RecoveryEstimate& estimate, int max_size);

/// Least-squares amplitudes on the detected support (Phi^H Phi)^-1 Phi^H y;
/// falls back to a pseudo-inverse (with a diagnostic) when Phi loses rank.
RecoveryEstimate refine_ls(const RecoveryEstimate& estimate,
                           const Eigen::VectorXcd& y_proj,
                           const Eigen::MatrixXcd& psi);

/// LMMSE amplitudes on the detected support:
/// v = prior_var Phi^H (prior_var Phi Phi^H + noise_var I)^-1 (y - Phi mean).
RecoveryEstimate refine_lmmse(const RecoveryEstimate& estimate,
                              const Eigen::VectorXcd& y_proj,
                              const Eigen::MatrixXcd& psi, double prior_var,
                              std::complex<double> prior_mean, double noise_var);

/// Posterior probability of *no* clip at each sample given the distance of
/// the equalized envelope from the clip level, evaluated in the numerically
/// stable two-branch form. sigma_e2 and sigma_x2 are complex variances of
/// the estimation error and the data samples. clip_level defaults to gamma
/// (peak suppression); digital clipping passes the expected post-clip
/// magnitude instead.
WeightVector ps_weights(const Eigen::VectorXcd& xbar_hat_time, double gamma,
                        double sigma_e, double sigma_x2 = 1.0,
                        double clip_level = 0.0, double w_min = 1e-6);

/// Anti-phase angles theta = arg(x) + pi, the phases a homogeneous clipper's
/// coefficients carry.
PhaseVector antiphase_of(const Eigen::VectorXcd& xbar_hat_time);

/// Stack Re/Im of Psi Theta into the 2m x N real operator of the
/// rotated model.
Eigen::MatrixXd phase_rotate_model(const Eigen::MatrixXcd& psi,
                                   const PhaseVector& theta);

/// Rotate then Sense: solve the stacked real model for the nonnegative
/// magnitudes, optionally weighted, then rebuild c = Theta |c|. ls_refine
/// re-fits the surviving amplitudes by real least squares.
RecoveryEstimate recover_rts(const Eigen::VectorXcd& y_proj,
                             const Eigen::MatrixXcd& psi,
                             const PhaseVector& theta,
                             const SolverOptions& opts,
                             const WeightVector* weights = nullptr,
                             bool ls_refine = true);

/// Sense then Rotate: plain (or weighted) lasso keeps its magnitudes and
/// support; the phases on the support are replaced by theta.
RecoveryEstimate recover_str(const Eigen::VectorXcd& y_proj,
                             const Eigen::MatrixXcd& psi,
                             const PhaseVector& theta,
                             const SolverOptions& opts,
                             const WeightVector* weights = nullptr,
                             bool ls_refine = true);

/// Snap nonzero magnitudes to the nearest point of {0, zeta}; snapping to 0
/// removes the index from the support.
RecoveryEstimate force_digital_magnitudes(const RecoveryEstimate& estimate,
                                          double zeta);

/// Least squares on the true support: the oracle upper-bound receiver.
RecoveryEstimate oracle_ls(const Eigen::VectorXcd& y_proj,
                           const Eigen::MatrixXcd& psi,
                           const std::vector<int>& true_support);

} // namespace clipcs
