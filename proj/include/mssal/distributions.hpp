#pragma once

#include <utility>

#include "mssal/rng.hpp"
#include "mssal/types.hpp"

namespace mssal {

struct GigMoments {
    double e_w;      // E[W]
    double e_inv_w;  // E[1/W]
};

// log K_nu(x) for x > 0. Exact for half-integer nu, std::cyl_bessel_k for
// moderate arguments otherwise, and the large-argument asymptotic series once
// cyl_bessel_k would underflow.
double log_bessel_k(double nu, double x);

// R_nu(c) = K_{nu+1}(c) / K_nu(c). Throws std::domain_error for c <= 0.
double bessel_k_ratio(double nu, double c);

// Moments of GIG(d, b, nu) with density proportional to
// x^{nu-1} exp(-(d*x + b/x)/2). Throws std::domain_error for nonpositive d
// or b; callers that can hit b == 0 clamp to their b_floor first (the E-step
// does, and counts how often).
GigMoments gig_moments(double d, double b, double nu = 0.5);

// Log density of the shifted asymmetric Laplace distribution in its
// (alpha, Sigma, mu) form. delta is clamped below at b_floor so x == mu stays
// finite. Throws std::runtime_error when sigma is not positive definite.
double sal_log_density(const VectorXd& x, const VectorXd& alpha,
                       const MatrixXd& sigma, const VectorXd& mu,
                       double b_floor = 1e-10);

// Log density of one MSSAL component: a product of skewed Laplace factors
// along the columns of D.
double mssal_log_density(const VectorXd& x, const ComponentParams& params);

// log sum_g pi_g h(x | theta_g), stabilized with a max shift.
double mixture_log_density(const VectorXd& x, const MixtureModel& model);

// One draw: w_j ~ Exp(1), Omega = D A diag(w) D', x = mu + Omega beta +
// chol(Omega) z. Consumes p exponentials then p normals per row.
DataMatrix sample_mssal(const ComponentParams& params, int n, Rng& rng);

// Labels are 1-based component indices.
std::pair<DataMatrix, VectorXi> sample_mixture(const MixtureModel& model, int n, Rng& rng);

}  // namespace mssal
