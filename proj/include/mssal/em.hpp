#pragma once

#include <utility>
#include <vector>

#include "mssal/types.hpp"

namespace mssal {

// Per-observation responsibilities plus per-dimension GIG moments, one n x p
// block per component.
struct LatentExpectations {
    MatrixXd zhat;                // n x G
    std::vector<MatrixXd> e1;     // E[W_ijg | x_i, z_ig = 1]
    std::vector<MatrixXd> e2;     // E[1/W_ijg | x_i, z_ig = 1]
};

struct EStepResult {
    LatentExpectations expect;
    double loglik = 0.0;
    long clamp_count = 0;         // b_floor clamps this E-step
};

EStepResult e_step(const DataMatrix& data, const MixtureModel& model,
                   const FitConfig& cfg);

// pi_g = n_g / n with n_g = sum_i zhat_ig.
VectorXd update_pi(const LatentExpectations& expect);

// Location and skewness updates for component g. mu uses the previous beta,
// beta uses the new mu. Both solves collapse to diagonal systems in the
// D-rotated frame; near-zero diagonal entries get a 1e-10 ridge and bump
// *ridge_count when provided.
std::pair<VectorXd, VectorXd> update_mu_beta(const DataMatrix& data,
                                             const LatentExpectations& expect,
                                             const MixtureModel& model_prev,
                                             int g, long* ridge_count = nullptr);

// Inner MM trace for tests: the objective after each inner iteration,
// starting with the value at the initial D.
struct MmTrace {
    std::vector<double> objective;
};

// Majorize-minimize update of the rotation matrix for component g, seeded at
// the previous D. Two SVD half-steps per inner iteration; stops when the
// objective moves less than cfg.mm_tol or after cfg.mm_max_iter iterations.
MatrixXd mm_rotation_update(const DataMatrix& data, const LatentExpectations& expect,
                            const MixtureModel& model_prev, const VectorXd& mu_new,
                            const VectorXd& beta_new, int g, const FitConfig& cfg,
                            MmTrace* trace = nullptr);

// The objective the MM loop descends, exposed for the brute-force oracle
// tests: sum_i zhat_i [ sum_j (E2_ij/a_j) v_ij^2 + sum_j (a_j E1_ij) lam_j^2 ]
// with v_i = D'(x_i - mu) and lam = D'beta.
double rotation_objective(const DataMatrix& data, const LatentExpectations& expect,
                          const VectorXd& a_prev, const VectorXd& mu_new,
                          const VectorXd& beta_new, int g, const MatrixXd& d);

// One fixed-point sweep for the eigenvalues of component g, using the new D,
// mu, beta and the previous a on the right-hand side. Entries falling below
// 1e-12 are floored and *floored is set.
VectorXd update_a(const DataMatrix& data, const LatentExpectations& expect,
                  int g, const MatrixXd& d_new, const VectorXd& mu_new,
                  const VectorXd& beta_new, const VectorXd& a_prev,
                  bool* floored = nullptr);

// Aitken acceleration stopping rule on three consecutive log-likelihoods.
bool aitken_converged(double l_prev2, double l_prev, double l_curr, double eps);

// argmax_g of each row, 1-based, ties to the lowest index.
VectorXi map_classify(const MatrixXd& zhat);

// Best-of-n_starts EM fit. Each start initializes from uniform random labels
// (seed + start index), runs E/M sweeps until Aitken convergence or
// cfg.max_iter, and is discarded if it hits the empty-component guard, the
// degenerate-a floor, or a non-finite likelihood. Throws std::runtime_error
// when every start is discarded.
FitResult fit_em(const DataMatrix& data, int g, const FitConfig& cfg);

// Single deterministic start from explicit initial labels (1-based). Exposed
// for reproducibility tests and the fixed-iteration benchmark path.
FitResult fit_em_from_labels(const DataMatrix& data, int g,
                             const VectorXi& init_labels, const FitConfig& cfg);

// Initial model from a hard labeling: component means, beta = 0, D/A from the
// eigendecomposition of each component's sample covariance.
MixtureModel init_from_labels(const DataMatrix& data, int g, const VectorXi& labels);

// Exactly n_iter E+M sweeps, no convergence checks; used by the benchmark.
void run_fixed_iterations(const DataMatrix& data, MixtureModel& model,
                          const FitConfig& cfg, int n_iter);

}  // namespace mssal
