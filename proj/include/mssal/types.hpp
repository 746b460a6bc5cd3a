#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace mssal {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// n x p observations, one row per observation.
struct DataMatrix {
    MatrixXd values;
    std::vector<std::string> column_names;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index p() const { return values.cols(); }
};

// One MSSAL component: location mu, skewness beta (reparameterized so the
// skew direction is Omega*beta), orthogonal eigenvector matrix D, and the
// eigenvalues of A as a vector. The alpha of the underlying SAL form is never
// stored; it only exists through Omega*beta.
struct ComponentParams {
    VectorXd mu;
    VectorXd beta;
    MatrixXd d_mat;
    VectorXd a_diag;

    Eigen::Index dim() const { return mu.size(); }
};

// Throws std::invalid_argument when dimensions disagree, D'D strays from the
// identity by more than 1e-8, or any a_diag entry is nonpositive.
void validate(const ComponentParams& params);

struct MixtureModel {
    VectorXd weights;
    std::vector<ComponentParams> components;

    // fit metadata, populated by fit_em / select_model
    double loglik = std::numeric_limits<double>::quiet_NaN();
    double bic = std::numeric_limits<double>::quiet_NaN();
    int n_iter = 0;

    int g() const { return static_cast<int>(components.size()); }
    Eigen::Index dim() const { return components.empty() ? 0 : components.front().dim(); }
};

void validate(const MixtureModel& model);

// Estimation knobs. min_weight is the empty-component guard expressed as a
// minimum mixing proportion; the 0.0 default means "resolve to 1/(10n) once n
// is known".
struct FitConfig {
    int n_starts = 50;
    int max_iter = 1000;
    double aitken_eps = 1e-6;
    int mm_max_iter = 20;
    double mm_tol = 1e-8;
    double b_floor = 1e-10;
    double min_weight = 0.0;
    std::uint64_t seed = 1;
};

void validate(const FitConfig& cfg);
double resolve_min_weight(const FitConfig& cfg, Eigen::Index n);

struct FitResult {
    MixtureModel model;
    std::vector<double> loglik_trace;
    VectorXi map_labels;        // 1-based component indices
    bool converged = false;
    int n_iter = 0;
    long clamp_count = 0;       // b_floor clamps over the winning start's run
};

}  // namespace mssal
