#include "clipcs/fbmp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace clipcs {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// A surviving support hypothesis. Cached per node so that every candidate
/// extension is scored in O(1) and a child is built in O(m beta):
///   q    = Sigma_J^-1 y                          (m)
///   B    = Sigma_J^-1 Psi_pool                   (m x beta)
///   qdot = Psi_pool^H q                          (beta)
///   d    = diag(Psi_pool^H B)                    (beta, real)
/// with Sigma_J = prior_var Psi_J Psi_J^H + noise_var I.
struct Node {
    std::vector<int> support; ///< pool-relative indices, insertion order
    double log_evidence = 0.0;
    Eigen::VectorXcd q;
    Eigen::MatrixXcd b_mat;
    Eigen::VectorXcd qdot;
    Eigen::VectorXd d;
};

struct SurvivorRecord {
    std::vector<int> support; ///< pool-relative, sorted
    double log_posterior;
    Eigen::VectorXcd mean; ///< E[c | y, J] on the support, same order
};

double log_prior(int weight, int n, double p) {
    return weight * std::log(p) + (n - weight) * std::log1p(-p);
}

} // namespace

FbmpParams default_fbmp_params(const OfdmConfig& cfg, double gamma,
                               ClipScheme scheme, std::optional<double> zeta) {
    FbmpParams params;
    const double p = rayleigh_tail_prob(gamma, cfg.envelope_sigma());
    params.active_prob = p;
    params.expected_sparsity = cfg.n_subcarriers * p;
    params.beta = std::clamp(
        static_cast<int>(std::lround(0.3 * cfg.n_subcarriers)), 1,
        cfg.n_subcarriers);
    params.rho = 5;
    params.s_max = std::clamp(
        static_cast<int>(std::ceil(1.5 * params.expected_sparsity)), 1,
        std::max(1, params.beta - 1));
    params.noise_var = cfg.noise_var();
    if (scheme == ClipScheme::kDigitalMagnitude && zeta)
        params.prior_var = (*zeta) * (*zeta);
    else
        params.prior_var = tail_excess_moment(gamma, cfg.envelope_sigma(), 2);
    return params;
}

long fbmp_evaluation_count(int pool, int rho, int s_max) {
    const long p = pool, r = rho, s = s_max;
    return p * (1 + r * s) - r * s * (s + 1) / 2;
}

double fbmp_reduction_percent(int n, int beta, int rho, int s_max) {
    const double truncated =
        static_cast<double>(fbmp_evaluation_count(beta, rho, s_max));
    const double full = static_cast<double>(fbmp_evaluation_count(n, rho, s_max));
    return 100.0 * (1.0 - truncated / full);
}

RecoveryEstimate beta_fbmp(const Eigen::VectorXcd& y_proj,
                           const Eigen::MatrixXcd& psi,
                           const WeightVector& weights,
                           const FbmpParams& params) {
    const int n = static_cast<int>(psi.cols());
    const int m = static_cast<int>(psi.rows());
    if (weights.w.size() != n)
        throw std::invalid_argument("beta_fbmp: weight length mismatch");
    if (params.beta < 1 || params.beta > n)
        throw std::invalid_argument("beta_fbmp: beta must be in [1, N]");
    if (params.rho < 1 || params.s_max < 1)
        throw std::invalid_argument("beta_fbmp: rho and s_max must be >= 1");
    if (params.noise_var <= 0.0 || params.prior_var <= 0.0)
        throw std::invalid_argument("beta_fbmp: variances must be positive");
    if (params.active_prob <= 0.0 || params.active_prob >= 1.0)
        throw std::invalid_argument("beta_fbmp: active_prob must be in (0,1)");

    RecoveryEstimate est;
    est.method = Method::kBetaFbmp;
    est.weights_used = weights.w;
    est.diagnostics.truncation_warning =
        params.expected_sparsity > 0.0 && params.beta < params.expected_sparsity;

    // Candidate pool: the beta most probable clipping locations, i.e. the
    // smallest posterior no-clip weights. Stable on ties for determinism.
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
        return weights.w(a) < weights.w(b);
    });
    pool.resize(params.beta);
    const int beta = params.beta;
    const int s_max = std::min(params.s_max, beta - 1);

    Eigen::MatrixXcd psi_pool(m, beta);
    for (int j = 0; j < beta; ++j) psi_pool.col(j) = psi.col(pool[j]);

    const double sv2 = params.prior_var;
    const double sz2 = params.noise_var;

    Node root;
    root.q = y_proj / sz2;
    root.b_mat = psi_pool / sz2;
    root.qdot = psi_pool.adjoint() * root.q;
    root.d = psi_pool.colwise().squaredNorm().transpose() / sz2;
    root.log_evidence =
        -m * std::log(kPi) - m * std::log(sz2) - y_proj.squaredNorm() / sz2;

    std::vector<Node> parents;
    parents.push_back(std::move(root));

    std::vector<SurvivorRecord> survivors;
    long evaluations = 0;

    struct Candidate {
        double log_posterior;
        double log_evidence;
        int parent;
        int ext;
    };
    std::vector<Candidate> candidates;

    for (int round = 0; round <= s_max && !parents.empty(); ++round) {
        candidates.clear();
        const double prior_term =
            log_prior(round + 1, n, params.active_prob);

        for (std::size_t pi = 0; pi < parents.size(); ++pi) {
            const Node& parent = parents[pi];
            std::vector<char> member(beta, 0);
            for (int s : parent.support) member[s] = 1;
            for (int j = 0; j < beta; ++j) {
                if (member[j]) continue;
                ++evaluations;
                const double denom = 1.0 + sv2 * parent.d(j);
                const double log_evidence =
                    parent.log_evidence - std::log(denom) +
                    sv2 * std::norm(parent.qdot(j)) / denom;
                candidates.push_back({log_evidence + prior_term, log_evidence,
                                      static_cast<int>(pi), j});
            }
        }
        if (candidates.empty()) break;

        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) {
                      if (a.log_posterior != b.log_posterior)
                          return a.log_posterior > b.log_posterior;
                      if (a.ext != b.ext) return a.ext < b.ext;
                      return a.parent < b.parent;
                  });

        // Keep the rho best distinct supports. Duplicates reached through
        // different parents carry equal scores and rank adjacently.
        std::vector<Node> children;
        std::vector<std::vector<int>> kept_keys;
        for (const Candidate& cand : candidates) {
            if (static_cast<int>(children.size()) >= params.rho) break;
            const Node& parent = parents[cand.parent];
            std::vector<int> key = parent.support;
            key.push_back(cand.ext);
            std::sort(key.begin(), key.end());
            if (std::find(kept_keys.begin(), kept_keys.end(), key) !=
                kept_keys.end())
                continue;

            const Eigen::VectorXcd b = parent.b_mat.col(cand.ext);
            const double denom = 1.0 + sv2 * parent.d(cand.ext);
            const double coef = sv2 / denom;
            const std::complex<double> phi_q = parent.qdot(cand.ext);
            const Eigen::VectorXcd r = psi_pool.adjoint() * b;

            Node child;
            child.support = parent.support;
            child.support.push_back(cand.ext);
            child.log_evidence = cand.log_evidence;
            child.q = parent.q - coef * phi_q * b;
            child.b_mat = parent.b_mat - coef * (b * r.adjoint());
            child.qdot = parent.qdot - coef * phi_q * r;
            child.d = parent.d - coef * r.cwiseAbs2();

            SurvivorRecord rec;
            rec.support = key;
            rec.log_posterior = cand.log_posterior;
            rec.mean.resize(rec.support.size());
            for (std::size_t c = 0; c < rec.support.size(); ++c)
                rec.mean(c) = sv2 * psi_pool.col(rec.support[c]).dot(child.q);
            survivors.push_back(std::move(rec));

            kept_keys.push_back(std::move(key));
            children.push_back(std::move(child));
        }
        parents = std::move(children);
    }

    est.diagnostics.evidence_evaluations = evaluations;
    est.c_hat = Eigen::VectorXcd::Zero(n);
    if (survivors.empty()) return est;

    // Normalized posterior-weighted sum of the conditional means over the
    // surviving supports.
    double max_log = survivors.front().log_posterior;
    for (const auto& s : survivors) max_log = std::max(max_log, s.log_posterior);
    double total = 0.0;
    for (const auto& s : survivors) total += std::exp(s.log_posterior - max_log);

    for (const auto& s : survivors) {
        const double w = std::exp(s.log_posterior - max_log) / total;
        for (std::size_t c = 0; c < s.support.size(); ++c)
            est.c_hat(pool[s.support[c]]) += w * s.mean(c);
    }
    for (int i = 0; i < n; ++i)
        if (est.c_hat(i) != std::complex<double>(0.0))
            est.support_hat.push_back(i);
    est.diagnostics.final_objective = max_log + std::log(total);
    return est;
}

} // namespace clipcs
