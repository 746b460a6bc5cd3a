#pragma once

#include <vector>

#include "mssal/types.hpp"

namespace mssal {

// Projects column-centered data onto the requested eigenvectors of the sample
// covariance matrix (1-based indices into the eigenvalues sorted descending).
// Eigenvector signs are fixed so each one's largest-magnitude loading is
// positive, lowest index winning ties. Throws when an index is out of range
// or the covariance is rank deficient at a requested component.
DataMatrix pca_scores(const DataMatrix& data, const std::vector<int>& components);

}  // namespace mssal
