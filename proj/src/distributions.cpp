#include "mssal/distributions.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace mssal {

namespace {

bool is_half_integer(double nu) {
    return std::abs(nu - std::floor(nu) - 0.5) < 1e-12;
}

// log K_{m+1/2}(x) = 0.5*log(pi/(2x)) - x + log(sum_{k=0}^{m} t_k) with the
// classic terminating series t_k = (m+k)! / (k! (m-k)! (2x)^k).
double log_bessel_k_half(int m, double x) {
    double base = 0.5 * std::log(M_PI / (2.0 * x)) - x;
    if (m == 0) return base;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= m; ++k) {
        term *= static_cast<double>((m + k) * (m - k + 1)) / (2.0 * k * x);
        sum += term;
    }
    return base + std::log(sum);
}

// Large-argument asymptotic: K_nu(x) ~ sqrt(pi/2x) e^{-x} (1 + (mu-1)/(8x)
// + (mu-1)(mu-9)/(2!(8x)^2) + ...) with mu = 4 nu^2. Three correction terms
// are plenty at x >= 500.
double log_bessel_k_asymptotic(double nu, double x) {
    double mu = 4.0 * nu * nu;
    double t1 = (mu - 1.0) / (8.0 * x);
    double t2 = t1 * (mu - 9.0) / (2.0 * 8.0 * x);
    double t3 = t2 * (mu - 25.0) / (3.0 * 8.0 * x);
    return 0.5 * std::log(M_PI / (2.0 * x)) - x + std::log1p(t1 + t2 + t3);
}

}  // namespace

double log_bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("log_bessel_k requires x > 0");
    nu = std::abs(nu);  // K is even in its order
    if (is_half_integer(nu)) {
        return log_bessel_k_half(static_cast<int>(std::llround(nu - 0.5)), x);
    }
    if (x < 500.0) {
        return std::log(std::cyl_bessel_k(nu, x));
    }
    return log_bessel_k_asymptotic(nu, x);
}

double bessel_k_ratio(double nu, double c) {
    if (!(c > 0.0)) throw std::domain_error("bessel_k_ratio requires c > 0");
    // closed forms for the half-integer orders the E-step and SAL density use
    if (is_half_integer(std::abs(nu))) {
        if (std::abs(nu - 0.5) < 1e-12) return 1.0 + 1.0 / c;
        if (std::abs(nu + 0.5) < 1e-12) return 1.0;  // K_{1/2}/K_{-1/2} = 1
        if (std::abs(nu - 1.5) < 1e-12) {
            return (1.0 + 3.0 / c + 3.0 / (c * c)) / (1.0 + 1.0 / c);
        }
        if (std::abs(nu + 1.5) < 1e-12) return c / (c + 1.0);
    }
    return std::exp(log_bessel_k(nu + 1.0, c) - log_bessel_k(nu, c));
}

GigMoments gig_moments(double d, double b, double nu) {
    if (!(d > 0.0)) throw std::domain_error("gig_moments requires d > 0");
    if (!(b > 0.0)) throw std::domain_error("gig_moments requires b > 0");
    if (std::abs(nu - 0.5) < 1e-12) {
        // R_{1/2}(sqrt(db)) = 1 + 1/sqrt(db) collapses both moments
        double s = std::sqrt(b / d);
        return {s + 1.0 / d, 1.0 / s};
    }
    double r = bessel_k_ratio(nu, std::sqrt(d * b));
    return {std::sqrt(b / d) * r, std::sqrt(d / b) * r - 2.0 * nu / b};
}

double sal_log_density(const VectorXd& x, const VectorXd& alpha,
                       const MatrixXd& sigma, const VectorXd& mu,
                       double b_floor) {
    const Eigen::Index p = x.size();
    if (alpha.size() != p || mu.size() != p || sigma.rows() != p || sigma.cols() != p) {
        throw std::invalid_argument("sal_log_density dimensions disagree");
    }
    Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("sal_log_density: sigma is not positive definite");
    }
    // log|Sigma| from the Cholesky factor
    double logdet = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        logdet += 2.0 * std::log(llt.matrixL()(j, j));
    }
    VectorXd diff = x - mu;
    VectorXd sinv_diff = llt.solve(diff);
    VectorXd sinv_alpha = llt.solve(alpha);
    double delta = std::max(diff.dot(sinv_diff), b_floor);
    double asa = alpha.dot(sinv_alpha);
    double nu = (2.0 - static_cast<double>(p)) / 2.0;
    double u = std::sqrt((2.0 + asa) * delta);
    return std::log(2.0) + diff.dot(sinv_alpha) -
           0.5 * static_cast<double>(p) * std::log(2.0 * M_PI) - 0.5 * logdet +
           0.5 * nu * std::log(delta / (2.0 + asa)) + log_bessel_k(nu, u);
}

double mssal_log_density(const VectorXd& x, const ComponentParams& params) {
    const Eigen::Index p = params.dim();
    VectorXd v = params.d_mat.transpose() * (x - params.mu);
    VectorXd lam = params.d_mat.transpose() * params.beta;
    double logden = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        double a = params.a_diag[j];
        double adb = a * lam[j];                       // [A D' beta]_j
        double gamma = std::sqrt(adb * adb + 2.0 * a);
        // |v| * sign(v) = v, so the skew term needs no explicit sign()
        logden += -std::log(gamma) - (std::abs(v[j]) * gamma - v[j] * adb) / a;
    }
    return logden;
}

double mixture_log_density(const VectorXd& x, const MixtureModel& model) {
    const int G = model.g();
    double best = -std::numeric_limits<double>::infinity();
    VectorXd terms(G);
    for (int g = 0; g < G; ++g) {
        terms[g] = std::log(model.weights[g]) +
                   mssal_log_density(x, model.components[g]);
        best = std::max(best, terms[g]);
    }
    double sum = 0.0;
    for (int g = 0; g < G; ++g) sum += std::exp(terms[g] - best);
    return best + std::log(sum);
}

namespace {

VectorXd sample_mssal_row(const ComponentParams& params, Rng& rng) {
    const Eigen::Index p = params.dim();
    VectorXd w(p), z(p);
    for (Eigen::Index j = 0; j < p; ++j) w[j] = rng.exponential();
    for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.normal();
    MatrixXd omega = params.d_mat *
                     (params.a_diag.cwiseProduct(w)).asDiagonal() *
                     params.d_mat.transpose();
    Eigen::LLT<MatrixXd> llt(omega);
    return params.mu + omega * params.beta + MatrixXd(llt.matrixL()) * z;
}

}  // namespace

DataMatrix sample_mssal(const ComponentParams& params, int n, Rng& rng) {
    const Eigen::Index p = params.dim();
    DataMatrix out;
    out.values.resize(n, p);
    out.column_names.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        out.column_names[j] = "x" + std::to_string(j + 1);
    }
    for (int i = 0; i < n; ++i) {
        out.values.row(i) = sample_mssal_row(params, rng).transpose();
    }
    return out;
}

std::pair<DataMatrix, VectorXi> sample_mixture(const MixtureModel& model, int n,
                                               Rng& rng) {
    const Eigen::Index p = model.dim();
    DataMatrix out;
    out.values.resize(n, p);
    out.column_names.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        out.column_names[j] = "x" + std::to_string(j + 1);
    }
    VectorXi labels(n);
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform01();
        int g = 0;
        double cum = model.weights[0];
        while (g + 1 < model.g() && u >= cum) {
            ++g;
            cum += model.weights[g];
        }
        labels[i] = g + 1;
        out.values.row(i) = sample_mssal_row(model.components[g], rng).transpose();
    }
    return {std::move(out), std::move(labels)};
}

}  // namespace mssal
