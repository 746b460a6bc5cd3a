#include "mssal/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mssal {

void validate(const ComponentParams& params) {
    const Eigen::Index p = params.mu.size();
    if (params.beta.size() != p || params.a_diag.size() != p ||
        params.d_mat.rows() != p || params.d_mat.cols() != p) {
        throw std::invalid_argument("component parameter dimensions disagree");
    }
    double ortho = (params.d_mat.transpose() * params.d_mat -
                    MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff();
    if (!(ortho < 1e-8)) {
        throw std::invalid_argument("d_mat is not orthogonal (max deviation " +
                                    std::to_string(ortho) + ")");
    }
    for (Eigen::Index j = 0; j < p; ++j) {
        if (!(params.a_diag[j] > 0.0) || !std::isfinite(params.a_diag[j])) {
            throw std::invalid_argument("a_diag entries must be positive");
        }
    }
}

void validate(const MixtureModel& model) {
    if (model.components.empty()) {
        throw std::invalid_argument("model has no components");
    }
    if (model.weights.size() != model.g()) {
        throw std::invalid_argument("weight count does not match component count");
    }
    double sum = 0.0;
    for (Eigen::Index g = 0; g < model.weights.size(); ++g) {
        if (!(model.weights[g] > 0.0)) {
            throw std::invalid_argument("mixing weights must be positive");
        }
        sum += model.weights[g];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("mixing weights must sum to 1");
    }
    const Eigen::Index p = model.components.front().dim();
    for (const auto& comp : model.components) {
        if (comp.dim() != p) {
            throw std::invalid_argument("components have mixed dimensions");
        }
        validate(comp);
    }
}

void validate(const FitConfig& cfg) {
    if (cfg.n_starts < 1 || cfg.max_iter < 1 || cfg.mm_max_iter < 1) {
        throw std::invalid_argument("fit config counts must be >= 1");
    }
    if (!(cfg.aitken_eps > 0.0) || !(cfg.mm_tol > 0.0) || !(cfg.b_floor > 0.0)) {
        throw std::invalid_argument("fit config tolerances must be positive");
    }
    if (cfg.min_weight < 0.0) {
        throw std::invalid_argument("min_weight must be >= 0 (0 = auto)");
    }
}

double resolve_min_weight(const FitConfig& cfg, Eigen::Index n) {
    if (cfg.min_weight > 0.0) return cfg.min_weight;
    return 1.0 / (10.0 * static_cast<double>(n));
}

}  // namespace mssal
