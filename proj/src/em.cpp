#include "mssal/em.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "mssal/distributions.hpp"
#include "mssal/rng.hpp"

namespace mssal {

namespace {

// Why a start was abandoned; fit_em tallies these across starts.
enum class FailKind { empty_component, degenerate_a, non_finite };

struct StartFailure {
    FailKind kind;
};

// E-step pieces for a single component: log h(x_i | theta_g) plus the two
// GIG moment matrices. Returns the number of b_floor clamps.
long component_estep(const MatrixXd& x, const ComponentParams& comp,
                     double b_floor, VectorXd& logh, MatrixXd& e1, MatrixXd& e2) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    VectorXd lam = comp.d_mat.transpose() * comp.beta;
    Eigen::ArrayXd a = comp.a_diag.array();
    Eigen::ArrayXd dvec = 2.0 + a * lam.array().square();   // d_jg
    Eigen::ArrayXd gamma = (a * dvec).sqrt();               // gamma_jg
    double logconst = -gamma.log().sum();

    MatrixXd v = (x.rowwise() - comp.mu.transpose()) * comp.d_mat;
    MatrixXd b = v.cwiseProduct(v) * a.inverse().matrix().asDiagonal();
    long clamps = (b.array() < b_floor).count();
    b = b.cwiseMax(b_floor);

    // nu = 1/2 closed forms: E[W] = sqrt(b/d) + 1/d, E[1/W] = sqrt(d/b)
    MatrixXd sq = (b * dvec.inverse().matrix().asDiagonal()).cwiseSqrt();
    e1 = sq.rowwise() + dvec.inverse().matrix().transpose();
    e2 = sq.cwiseInverse();

    logh = VectorXd::Constant(n, logconst) + v * lam -
           v.cwiseAbs() * (gamma / a).matrix();
    return clamps;
}

}  // namespace

EStepResult e_step(const DataMatrix& data, const MixtureModel& model,
                   const FitConfig& cfg) {
    const Eigen::Index n = data.n();
    const int G = model.g();
    EStepResult out;
    out.expect.zhat.resize(n, G);
    out.expect.e1.resize(G);
    out.expect.e2.resize(G);

    MatrixXd logterms(n, G);
    VectorXd logh(n);
    for (int g = 0; g < G; ++g) {
        out.clamp_count += component_estep(data.values, model.components[g],
                                           cfg.b_floor, logh,
                                           out.expect.e1[g], out.expect.e2[g]);
        logterms.col(g) = logh.array() + std::log(model.weights[g]);
    }
    VectorXd rowmax = logterms.rowwise().maxCoeff();
    MatrixXd shifted = (logterms.colwise() - rowmax).array().exp();
    VectorXd rowsum = shifted.rowwise().sum();
    out.expect.zhat = rowsum.cwiseInverse().asDiagonal() * shifted;
    out.loglik = (rowmax.array() + rowsum.array().log()).sum();
    return out;
}

VectorXd update_pi(const LatentExpectations& expect) {
    return expect.zhat.colwise().sum() / static_cast<double>(expect.zhat.rows());
}

std::pair<VectorXd, VectorXd> update_mu_beta(const DataMatrix& data,
                                             const LatentExpectations& expect,
                                             const MixtureModel& model_prev,
                                             int g, long* ridge_count) {
    const MatrixXd& x = data.values;
    const ComponentParams& comp = model_prev.components[g];
    const Eigen::Index p = x.cols();
    VectorXd z = expect.zhat.col(g);
    double n_g = z.sum();
    Eigen::ArrayXd ainv = comp.a_diag.array().inverse();

    // Everything reduces to diagonal systems in the D frame:
    // sum_i z Omega^-1 = D diag(s1) D' and sum_i z Omega = D diag(s2) D'.
    MatrixXd v = (x.rowwise() - comp.mu.transpose()) * comp.d_mat;
    MatrixXd c1 = expect.e2[g] * ainv.matrix().asDiagonal();
    VectorXd s1 = c1.transpose() * z;
    VectorXd t1 = c1.cwiseProduct(v).transpose() * z;

    auto ridge = [&](VectorXd& s) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (s[j] < 1e-10) {
                s[j] += 1e-10;
                if (ridge_count) ++*ridge_count;
            }
        }
    };
    ridge(s1);

    VectorXd m_old = comp.d_mat.transpose() * comp.mu;
    VectorXd lb_old = comp.d_mat.transpose() * comp.beta;
    VectorXd mu = comp.d_mat *
                  ((t1 + s1.cwiseProduct(m_old) - n_g * lb_old).cwiseQuotient(s1));

    VectorXd s2 = comp.a_diag.cwiseProduct(expect.e1[g].transpose() * z);
    ridge(s2);
    VectorXd r = x.transpose() * z - n_g * mu;
    VectorXd beta = comp.d_mat *
                    ((comp.d_mat.transpose() * r).cwiseQuotient(s2));
    return {std::move(mu), std::move(beta)};
}

double rotation_objective(const DataMatrix& data, const LatentExpectations& expect,
                          const VectorXd& a_prev, const VectorXd& mu_new,
                          const VectorXd& beta_new, int g, const MatrixXd& d) {
    const MatrixXd& x = data.values;
    VectorXd z = expect.zhat.col(g);
    Eigen::ArrayXd ainv = a_prev.array().inverse();
    MatrixXd u = x.rowwise() - mu_new.transpose();
    MatrixXd ud = u * d;
    MatrixXd c1 = expect.e2[g] * ainv.matrix().asDiagonal();
    double term1 = (c1.cwiseProduct(ud.cwiseProduct(ud)).transpose() * z).sum();
    VectorXd r2 = (expect.e1[g] * a_prev.asDiagonal()).transpose() * z;
    VectorXd db = d.transpose() * beta_new;
    return term1 + r2.dot(db.cwiseProduct(db));
}

MatrixXd mm_rotation_update(const DataMatrix& data, const LatentExpectations& expect,
                            const MixtureModel& model_prev, const VectorXd& mu_new,
                            const VectorXd& beta_new, int g, const FitConfig& cfg,
                            MmTrace* trace) {
    const MatrixXd& x = data.values;
    const Eigen::Index p = x.cols();
    const ComponentParams& comp = model_prev.components[g];
    if (p == 1) {
        if (trace) trace->objective.assign(1, rotation_objective(
                data, expect, comp.a_diag, mu_new, beta_new, g,
                MatrixXd::Identity(1, 1)));
        return MatrixXd::Identity(1, 1);
    }

    VectorXd z = expect.zhat.col(g);
    Eigen::ArrayXd ainv = comp.a_diag.array().inverse();
    MatrixXd u = x.rowwise() - mu_new.transpose();
    MatrixXd c1 = expect.e2[g] * ainv.matrix().asDiagonal();
    MatrixXd c2 = expect.e1[g] * comp.a_diag.asDiagonal();

    // D-independent pieces of the two surrogate minimizations. W_i and B_i
    // are rank one, so their largest eigenvalues are just squared norms.
    VectorXd w1 = z.cwiseProduct(u.rowwise().squaredNorm());      // omega_i1
    double bnorm2 = beta_new.squaredNorm();
    VectorXd q1 = c1.transpose() * w1;
    VectorXd r2 = c2.transpose() * z;
    VectorXd q2 = bnorm2 * r2;                                    // omega_i2 part
    VectorXd alpha1 = c1.rowwise().maxCoeff();
    VectorXd alpha2 = c2.rowwise().maxCoeff();
    VectorXd w2 = z.dot(alpha2) * VectorXd::Ones(p) - r2;
    MatrixXd zc1 = z.asDiagonal() * c1;                           // rows z_i c1_i
    MatrixXd za1c1 = z.asDiagonal() * (alpha1.replicate(1, p) - c1).eval();

    auto objective = [&](const MatrixXd& d) {
        MatrixXd ud = u * d;
        double t1 = (c1.cwiseProduct(ud.cwiseProduct(ud)).transpose() * z).sum();
        VectorXd db = d.transpose() * beta_new;
        return t1 + r2.dot(db.cwiseProduct(db));
    };
    auto procrustes = [&](const MatrixXd& f) {
        // argmax over orthogonal D of tr(D f) is V U' for f = U S V'
        Eigen::JacobiSVD<MatrixXd> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
        return MatrixXd(svd.matrixV() * svd.matrixU().transpose());
    };

    MatrixXd d = comp.d_mat;
    double f_prev = objective(d);
    if (trace) trace->objective.assign(1, f_prev);

    for (int t = 0; t < cfg.mm_max_iter; ++t) {
        // half-step 1: majorize around the current D in the data position
        MatrixXd vt = u * d;
        MatrixXd f1 = (q1 + q2).asDiagonal() * d.transpose() -
                      zc1.cwiseProduct(vt).transpose() * u -
                      (r2.cwiseProduct(d.transpose() * beta_new)) *
                          beta_new.transpose();
        MatrixXd d_half = procrustes(f1);

        // half-step 2: majorize in the diagonal position around d_half
        MatrixXd vs = u * d_half;
        MatrixXd f2 = za1c1.cwiseProduct(vs).transpose() * u +
                      (w2.cwiseProduct(d_half.transpose() * beta_new)) *
                          beta_new.transpose();
        MatrixXd d_next = procrustes(f2);

        if (!d_next.allFinite()) break;  // keep the last good rotation
        d = d_next;
        double f = objective(d);
        if (trace) trace->objective.push_back(f);
        if (std::abs(f - f_prev) < cfg.mm_tol) break;
        f_prev = f;
    }
    return d;
}

VectorXd update_a(const DataMatrix& data, const LatentExpectations& expect,
                  int g, const MatrixXd& d_new, const VectorXd& mu_new,
                  const VectorXd& beta_new, const VectorXd& a_prev,
                  bool* floored) {
    const MatrixXd& x = data.values;
    const Eigen::Index p = x.cols();
    VectorXd z = expect.zhat.col(g);
    double n_g = z.sum();
    MatrixXd v = (x.rowwise() - mu_new.transpose()) * d_new;
    VectorXd lam = d_new.transpose() * beta_new;
    VectorXd num = expect.e2[g].cwiseProduct(v.cwiseProduct(v)).transpose() * z;
    VectorXd e1sum = expect.e1[g].transpose() * z;
    VectorXd a(p);
    if (floored) *floored = false;
    for (Eigen::Index j = 0; j < p; ++j) {
        double den = n_g / a_prev[j] + e1sum[j] * lam[j] * lam[j];
        a[j] = std::sqrt(num[j] / den);
        if (!(a[j] > 1e-12)) {
            a[j] = 1e-12;
            if (floored) *floored = true;
        }
    }
    return a;
}

bool aitken_converged(double l_prev2, double l_prev, double l_curr, double eps) {
    double den = l_prev - l_prev2;
    if (den == 0.0) return std::abs(l_curr - l_prev) < eps;
    double accel = (l_curr - l_prev) / den;
    if (accel == 1.0) return false;
    double l_inf = l_prev + (l_curr - l_prev) / (1.0 - accel);
    double gap = l_inf - l_curr;
    return gap >= 0.0 && gap < eps;
}

VectorXi map_classify(const MatrixXd& zhat) {
    VectorXi labels(zhat.rows());
    for (Eigen::Index i = 0; i < zhat.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index g = 1; g < zhat.cols(); ++g) {
            if (zhat(i, g) > zhat(i, best)) best = g;  // ties keep the lowest
        }
        labels[i] = static_cast<int>(best) + 1;
    }
    return labels;
}

MixtureModel init_from_labels(const DataMatrix& data, int g, const VectorXi& labels) {
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    if (labels.size() != n) throw std::invalid_argument("label length mismatch");

    MixtureModel model;
    model.weights.resize(g);
    model.components.resize(g);
    for (int k = 0; k < g; ++k) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[i] == k + 1) idx.push_back(i);
        }
        if (idx.empty()) throw std::invalid_argument("component has no observations");
        model.weights[k] = static_cast<double>(idx.size()) / static_cast<double>(n);

        MatrixXd sub(idx.size(), p);
        for (size_t i = 0; i < idx.size(); ++i) sub.row(i) = data.values.row(idx[i]);
        VectorXd mu = sub.colwise().mean();
        MatrixXd centered = sub.rowwise() - mu.transpose();
        MatrixXd cov = idx.size() > 1
                           ? MatrixXd(centered.transpose() * centered /
                                      static_cast<double>(idx.size() - 1))
                           : MatrixXd(MatrixXd::Zero(p, p));

        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
        double ev_max = std::max(eig.eigenvalues().maxCoeff(), 1.0);
        ComponentParams comp;
        comp.mu = mu;
        comp.beta = VectorXd::Zero(p);
        comp.d_mat.resize(p, p);
        comp.a_diag.resize(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            Eigen::Index src = p - 1 - j;  // descending eigenvalues
            VectorXd vec = eig.eigenvectors().col(src);
            Eigen::Index arg = 0;
            for (Eigen::Index r = 1; r < p; ++r) {
                if (std::abs(vec[r]) > std::abs(vec[arg])) arg = r;
            }
            if (vec[arg] < 0.0) vec = -vec;
            comp.d_mat.col(j) = vec;
            comp.a_diag[j] = std::max(eig.eigenvalues()[src], 1e-8 * ev_max);
        }
        model.components[k] = std::move(comp);
    }
    return model;
}

namespace {

// Full M-step in the printed order: pi, then per component mu, beta, D, A.
void m_step(const DataMatrix& data, const EStepResult& es, MixtureModel& model,
            const FitConfig& cfg) {
    VectorXd pi_new = update_pi(es.expect);
    double minw = resolve_min_weight(cfg, data.n());
    if ((pi_new.array() < minw).any()) throw StartFailure{FailKind::empty_component};
    model.weights = pi_new;

    for (int g = 0; g < model.g(); ++g) {
        auto [mu, beta] = update_mu_beta(data, es.expect, model, g, nullptr);
        MatrixXd d = mm_rotation_update(data, es.expect, model, mu, beta, g, cfg);
        bool floored = false;
        VectorXd a = update_a(data, es.expect, g, d, mu, beta,
                              model.components[g].a_diag, &floored);
        if (floored) throw StartFailure{FailKind::degenerate_a};
        ComponentParams& comp = model.components[g];
        comp.mu = std::move(mu);
        comp.beta = std::move(beta);
        comp.d_mat = std::move(d);
        comp.a_diag = std::move(a);
    }
}

FitResult run_start(const DataMatrix& data, MixtureModel model, const FitConfig& cfg) {
    FitResult res;
    res.loglik_trace.reserve(64);
    EStepResult es;
    int m_steps = 0;
    while (true) {
        es = e_step(data, model, cfg);
        if (!std::isfinite(es.loglik)) throw StartFailure{FailKind::non_finite};
        res.clamp_count += es.clamp_count;
        res.loglik_trace.push_back(es.loglik);
        size_t k = res.loglik_trace.size();
        if (k >= 3 && aitken_converged(res.loglik_trace[k - 3],
                                       res.loglik_trace[k - 2],
                                       res.loglik_trace[k - 1], cfg.aitken_eps)) {
            res.converged = true;
            break;
        }
        if (m_steps >= cfg.max_iter) break;
        m_step(data, es, model, cfg);
        ++m_steps;
    }
    res.model = std::move(model);
    res.model.loglik = res.loglik_trace.back();
    res.model.n_iter = m_steps;
    res.n_iter = m_steps;
    res.map_labels = map_classify(es.expect.zhat);
    return res;
}

VectorXi random_labels(Eigen::Index n, int g, Rng& rng) {
    VectorXi labels(n);
    for (Eigen::Index i = 0; i < n; ++i) labels[i] = rng.uniform_int(g) + 1;
    return labels;
}

}  // namespace

FitResult fit_em_from_labels(const DataMatrix& data, int g,
                             const VectorXi& init_labels, const FitConfig& cfg) {
    validate(cfg);
    try {
        MixtureModel init;
        try {
            init = init_from_labels(data, g, init_labels);
        } catch (const std::invalid_argument&) {
            throw StartFailure{FailKind::empty_component};
        }
        return run_start(data, std::move(init), cfg);
    } catch (const StartFailure& f) {
        switch (f.kind) {
            case FailKind::empty_component:
                throw std::runtime_error("fit failed: component emptied out");
            case FailKind::degenerate_a:
                throw std::runtime_error("fit failed: degenerate eigenvalue");
            default:
                throw std::runtime_error("fit failed: non-finite likelihood");
        }
    }
}

FitResult fit_em(const DataMatrix& data, int g, const FitConfig& cfg) {
    validate(cfg);
    if (g < 1) throw std::invalid_argument("g must be >= 1");
    if (data.n() <= g) throw std::invalid_argument("need more observations than components");

    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    std::vector<FitResult> results(cfg.n_starts);
    std::vector<int> status(cfg.n_starts, -1);  // -1 pending, 0 ok, else FailKind+1

    auto run_one = [&](int s) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(s));
        VectorXi labels = random_labels(n, g, rng);
        // redraw when a component gets too few points to seed a covariance
        Eigen::Index need = std::max<Eigen::Index>(2, p + 1);
        for (int tries = 0; tries < 100; ++tries) {
            VectorXi counts = VectorXi::Zero(g);
            for (Eigen::Index i = 0; i < n; ++i) ++counts[labels[i] - 1];
            if (counts.minCoeff() >= need) break;
            labels = random_labels(n, g, rng);
        }
        try {
            MixtureModel init;
            try {
                init = init_from_labels(data, g, labels);
            } catch (const std::invalid_argument&) {
                throw StartFailure{FailKind::empty_component};
            }
            results[s] = run_start(data, std::move(init), cfg);
            status[s] = 0;
        } catch (const StartFailure& f) {
            status[s] = static_cast<int>(f.kind) + 1;
        }
    };

    unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                             static_cast<unsigned>(cfg.n_starts)));
    if (workers <= 1) {
        for (int s = 0; s < cfg.n_starts; ++s) run_one(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int s = static_cast<int>(w); s < cfg.n_starts;
                     s += static_cast<int>(workers)) {
                    run_one(s);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    int best = -1;
    long n_empty = 0, n_degen = 0, n_nonfinite = 0;
    for (int s = 0; s < cfg.n_starts; ++s) {
        if (status[s] == 0) {
            if (best < 0 || results[s].model.loglik > results[best].model.loglik) {
                best = s;
            }
        } else if (status[s] == static_cast<int>(FailKind::empty_component) + 1) {
            ++n_empty;
        } else if (status[s] == static_cast<int>(FailKind::degenerate_a) + 1) {
            ++n_degen;
        } else {
            ++n_nonfinite;
        }
    }
    if (best < 0) {
        throw std::runtime_error(
            "all " + std::to_string(cfg.n_starts) + " starts failed (" +
            std::to_string(n_empty) + " empty-component, " +
            std::to_string(n_degen) + " degenerate, " +
            std::to_string(n_nonfinite) + " non-finite)");
    }
    return results[best];
}

void run_fixed_iterations(const DataMatrix& data, MixtureModel& model,
                          const FitConfig& cfg, int n_iter) {
    for (int k = 0; k < n_iter; ++k) {
        EStepResult es = e_step(data, model, cfg);
        if (!std::isfinite(es.loglik)) {
            throw std::runtime_error("non-finite likelihood during benchmark run");
        }
        try {
            m_step(data, es, model, cfg);
        } catch (const StartFailure&) {
            throw std::runtime_error("degenerate fit during benchmark run");
        }
    }
}

}  // namespace mssal
