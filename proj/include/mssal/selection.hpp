#pragma once

#include <string>
#include <vector>

#include "mssal/types.hpp"

namespace mssal {

struct GRecord {
    int g = 0;
    double loglik = 0.0;
    int rho = 0;
    double bic = 0.0;
    bool converged = false;
    std::string note;           // why a record is excluded, when it is
};

struct SelectionReport {
    std::vector<GRecord> records;
    int chosen_g = 0;
    MixtureModel chosen_model;
    VectorXi chosen_labels;
};

// Free parameters: (G-1) mixing weights plus, per component, p for mu, p for
// beta, p for diag(A) and p(p-1)/2 for the orthogonal D.
int count_free_params(int g, int p);

// 2*loglik - rho*ln(n); larger is better.
double bic(double loglik, int rho, long n);

// Fits each G in [g_min, g_max] with fit_em and picks the converged fit with
// the largest BIC. Gs whose fit fails or does not converge are recorded with
// a note and excluded; if that excludes everything, throws.
SelectionReport select_model(const DataMatrix& data, int g_min, int g_max,
                             const FitConfig& cfg);

}  // namespace mssal
