#include "mssal/pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mssal {

DataMatrix pca_scores(const DataMatrix& data, const std::vector<int>& components) {
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    if (components.empty()) throw std::invalid_argument("no components requested");
    for (int c : components) {
        if (c < 1 || c > p) {
            throw std::invalid_argument("component index " + std::to_string(c) +
                                        " out of range 1.." + std::to_string(p));
        }
    }
    if (n < 2) throw std::invalid_argument("need at least 2 rows for a covariance");

    MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();
    MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    // Eigen sorts ascending; flip to descending
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());

    double ev_max = std::max(eig.eigenvalues().maxCoeff(), 1.0);
    DataMatrix out;
    out.values.resize(n, static_cast<Eigen::Index>(components.size()));
    for (size_t k = 0; k < components.size(); ++k) {
        int idx = order[components[k] - 1];
        double ev = eig.eigenvalues()[idx];
        if (ev <= 1e-12 * ev_max) {
            throw std::runtime_error("covariance is rank deficient at component " +
                                     std::to_string(components[k]));
        }
        VectorXd vec = eig.eigenvectors().col(idx);
        // sign convention: largest-magnitude loading positive, first index
        // winning ties, so scores are reproducible
        Eigen::Index arg = 0;
        for (Eigen::Index j = 1; j < p; ++j) {
            if (std::abs(vec[j]) > std::abs(vec[arg])) arg = j;
        }
        if (vec[arg] < 0.0) vec = -vec;
        out.values.col(static_cast<Eigen::Index>(k)) = centered * vec;
        out.column_names.push_back("PC" + std::to_string(components[k]));
    }
    return out;
}

}  // namespace mssal
