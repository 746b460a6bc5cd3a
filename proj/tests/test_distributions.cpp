#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mssal/distributions.hpp"
#include "mssal/rng.hpp"
#include "mssal/types.hpp"

using namespace mssal;

namespace {

MatrixXd rot2(double deg) {
    double t = deg * M_PI / 180.0;
    MatrixXd d(2, 2);
    d << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return d;
}

ComponentParams make_comp(const VectorXd& mu, const VectorXd& beta,
                          const MatrixXd& d, const VectorXd& a) {
    ComponentParams c;
    c.mu = mu;
    c.beta = beta;
    c.d_mat = d;
    c.a_diag = a;
    return c;
}

// the fixed two-component probe model shared by several oracle checks
ComponentParams probe_comp1() {
    return make_comp(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, -0.25),
                     rot2(30.0), Eigen::Vector2d(2.0, 0.5));
}
ComponentParams probe_comp2() {
    return make_comp(Eigen::Vector2d(3, 1), Eigen::Vector2d(-0.3, 0.4),
                     rot2(-45.0), Eigen::Vector2d(1.0, 1.5));
}
MixtureModel probe_mixture() {
    MixtureModel m;
    m.weights = Eigen::Vector2d(0.3, 0.7);
    m.components = {probe_comp1(), probe_comp2()};
    return m;
}

}  // namespace

TEST_CASE("gig_moments matches the quadrature oracle on the (d,b) grid") {
    // values from numerical quadrature of x^{nu-1} exp(-(d x + b/x)/2), nu = 1/2
    const double grid[16][4] = {
        {0.5, 0.5, 3.0, 1.0},
        {0.5, 1.0, 3.414213562373095, 0.70710678118654752},
        {0.5, 2.0, 4.0, 0.5},
        {0.5, 5.0, 5.1622776601683793, 0.31622776601683793},
        {1.0, 0.5, 1.7071067811865475, 1.414213562373095},
        {1.0, 1.0, 2.0, 1.0},
        {1.0, 2.0, 2.414213562373095, 0.70710678118654752},
        {1.0, 5.0, 3.2360679774997897, 0.44721359549995794},
        {2.0, 0.5, 1.0, 2.0},
        {2.0, 1.0, 1.2071067811865475, 1.414213562373095},
        {2.0, 2.0, 1.5, 1.0},
        {2.0, 5.0, 2.0811388300841897, 0.63245553203367587},
        {5.0, 0.5, 0.51622776601683793, 3.1622776601683793},
        {5.0, 1.0, 0.64721359549995794, 2.2360679774997897},
        {5.0, 2.0, 0.83245553203367587, 1.5811388300841897},
        {5.0, 5.0, 1.2, 1.0},
    };
    for (const auto& row : grid) {
        GigMoments m = gig_moments(row[0], row[1], 0.5);
        CHECK(std::abs(m.e_w - row[2]) / row[2] < 1e-6);
        CHECK(std::abs(m.e_inv_w - row[3]) / row[3] < 1e-6);
        CHECK(m.e_w * m.e_inv_w >= 1.0);
    }
}

TEST_CASE("gig_moments worked examples") {
    GigMoments a = gig_moments(2.0, 2.0, 0.5);
    CHECK(a.e_w == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(a.e_inv_w == doctest::Approx(1.0).epsilon(1e-12));
    GigMoments b = gig_moments(4.0, 1.0, 0.5);
    CHECK(b.e_w == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(b.e_inv_w == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gig_moments rejects nonpositive parameters") {
    CHECK_THROWS_AS(gig_moments(0.0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(gig_moments(-1.0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(gig_moments(1.0, 0.0, 0.5), std::domain_error);
}

TEST_CASE("bessel_k_ratio closed forms and oracle values") {
    CHECK(bessel_k_ratio(0.5, 2.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(bessel_k_ratio(0.5, 1e6) == doctest::Approx(1.000001).epsilon(1e-5));
    // K_{-1/2} = K_{1/2}, so R_{-1/2}(c) = K_{1/2}/K_{-1/2} = 1 for every c
    CHECK(bessel_k_ratio(-0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bessel_k_ratio(0.0, 1.7) ==
          doctest::Approx(1.2650582844506458).epsilon(1e-10));
    CHECK(bessel_k_ratio(1.0, 0.9) ==
          doctest::Approx(2.9015069376633772).epsilon(1e-10));
    CHECK_THROWS_AS(bessel_k_ratio(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k_ratio(0.5, -2.0), std::domain_error);
}

TEST_CASE("log_bessel_k matches oracle values and the half-integer form") {
    CHECK(log_bessel_k(0.0, 0.35) ==
          doctest::Approx(0.20921279903127414).epsilon(1e-10));
    CHECK(log_bessel_k(1.0, 2.6) ==
          doctest::Approx(-2.7290076055013596).epsilon(1e-10));
    // K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}, including far past double underflow
    for (double x : {0.8, 3.0, 600.0}) {
        double expected = 0.5 * std::log(M_PI / (2.0 * x)) - x;
        CHECK(log_bessel_k(0.5, x) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("sal_log_density quadrature probes") {
    // expectations from 30-digit quadrature of the exponential scale mixture
    VectorXd x1(1), a1(1), m1(1);
    MatrixXd s1(1, 1);
    x1 << 1.0;
    a1 << 0.0;
    s1 << 0.5;
    m1 << 0.0;
    CHECK(sal_log_density(x1, a1, s1, m1) == doctest::Approx(-2.0).epsilon(1e-9));

    x1 << 1.1;
    a1 << 0.7;
    s1 << 1.5;
    m1 << 0.2;
    CHECK(sal_log_density(x1, a1, s1, m1) ==
          doctest::Approx(-1.3258433696433322).epsilon(1e-9));

    VectorXd x2(2), a2(2), m2(2);
    MatrixXd s2(2, 2);
    a2 << 1.0, -0.5;
    s2 << 2.0, 0.5, 0.5, 1.0;
    m2 << 0.5, -0.3;
    x2 << 1.2, 0.7;
    CHECK(sal_log_density(x2, a2, s2, m2) ==
          doctest::Approx(-3.6974818999734558).epsilon(1e-9));
    x2 << -1.0, 2.0;
    CHECK(sal_log_density(x2, a2, s2, m2) ==
          doctest::Approx(-10.513947036505663).epsilon(1e-9));

    VectorXd x3(3), a3(3), m3(3);
    MatrixXd s3 = MatrixXd::Zero(3, 3);
    x3 << 0.2, -0.1, 0.4;
    a3 << 0.5, 0.0, -0.25;
    s3.diagonal() << 1.0, 2.0, 0.5;
    m3.setZero();
    CHECK(sal_log_density(x3, a3, s3, m3) ==
          doctest::Approx(-2.3650093261863264).epsilon(1e-9));

    VectorXd x4(4), a4(4), m4(4);
    MatrixXd s4 = MatrixXd::Identity(4, 4);
    x4 << 1.0, 0.0, -1.0, 0.5;
    a4.setConstant(0.3);
    m4.setZero();
    CHECK(sal_log_density(x4, a4, s4, m4) ==
          doctest::Approx(-5.1683110008581437).epsilon(1e-9));
}

TEST_CASE("sal_log_density edge behaviour") {
    VectorXd x(2), a(2), m(2);
    MatrixXd s(2, 2);
    a << 0.4, -0.2;
    s << 1.0, 0.3, 0.3, 2.0;
    m << 0.1, 0.2;
    x = m;  // exact mode relies on the delta clamp
    CHECK(std::isfinite(sal_log_density(x, a, s, m)));

    MatrixXd singular = MatrixXd::Zero(2, 2);
    singular(0, 0) = 1.0;
    x << 1.0, 1.0;
    CHECK_THROWS(sal_log_density(x, a, singular, m));

    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        x << 4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0;
        CHECK(std::isfinite(sal_log_density(x, a, s, m)));
    }
}

TEST_CASE("mssal_log_density closed-form cases") {
    ComponentParams c = probe_comp1();
    // at x = mu only the -log gamma_j terms survive
    double expect = 0.0;
    VectorXd lam = c.d_mat.transpose() * c.beta;
    for (int j = 0; j < 2; ++j) {
        double adb = c.a_diag[j] * lam[j];
        expect -= std::log(std::sqrt(adb * adb + 2.0 * c.a_diag[j]));
    }
    CHECK(mssal_log_density(c.mu, c) == doctest::Approx(expect).epsilon(1e-12));

    // beta = 0, D = I, a = (1/2, 1/2): product of double exponentials
    ComponentParams sym = make_comp(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0),
                                    MatrixXd::Identity(2, 2),
                                    Eigen::Vector2d(0.5, 0.5));
    CHECK(mssal_log_density(Eigen::Vector2d(1.0, -1.0), sym) ==
          doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("mssal_log_density high-precision probes") {
    Eigen::Vector2d x(1.0, 0.2);
    CHECK(mssal_log_density(x, probe_comp1()) ==
          doctest::Approx(-1.9969009526359318).epsilon(1e-12));
    CHECK(mssal_log_density(x, probe_comp2()) ==
          doctest::Approx(-4.2373806265664379).epsilon(1e-12));
}

TEST_CASE("mssal_log_density invariant under axis relabeling") {
    ComponentParams c = probe_comp1();
    ComponentParams perm = c;
    perm.d_mat.col(0) = c.d_mat.col(1);
    perm.d_mat.col(1) = c.d_mat.col(0);
    perm.a_diag << c.a_diag[1], c.a_diag[0];
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        Eigen::Vector2d x(6.0 * rng.uniform01() - 3.0,
                          6.0 * rng.uniform01() - 3.0);
        CHECK(mssal_log_density(x, c) ==
              doctest::Approx(mssal_log_density(x, perm)).epsilon(1e-12));
    }
}

TEST_CASE("2-D densities integrate to one") {
    Rng rng(909);
    for (int rep = 0; rep < 10; ++rep) {
        VectorXd mu(2), beta(2), a(2);
        mu << 2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0;
        beta << 2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0;
        a << 0.3 + 1.7 * rng.uniform01(), 0.3 + 1.7 * rng.uniform01();
        ComponentParams c =
            make_comp(mu, beta, rot2(360.0 * rng.uniform01()), a);

        const double lo = -40.0, hi = 40.0;
        const int cells = 1600;
        const double h = (hi - lo) / cells;
        double total = 0.0;
        VectorXd x(2);
        for (int i = 0; i <= cells; ++i) {
            double wx = (i == 0 || i == cells) ? 0.5 : 1.0;
            x[0] = lo + h * i;
            double rowsum = 0.0;
            for (int j = 0; j <= cells; ++j) {
                double wy = (j == 0 || j == cells) ? 0.5 : 1.0;
                x[1] = lo + h * j;
                rowsum += wy * std::exp(mssal_log_density(x, c));
            }
            total += wx * rowsum;
        }
        total *= h * h;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("mixture_log_density degenerate and probe cases") {
    MixtureModel single;
    single.weights = VectorXd::Ones(1);
    single.components = {probe_comp1()};
    Eigen::Vector2d x(0.7, -0.4);
    CHECK(mixture_log_density(x, single) ==
          doctest::Approx(mssal_log_density(x, probe_comp1())).epsilon(1e-14));

    MixtureModel twin;
    twin.weights = Eigen::Vector2d(0.3, 0.7);
    twin.components = {probe_comp1(), probe_comp1()};
    CHECK(mixture_log_density(x, twin) ==
          doctest::Approx(mssal_log_density(x, probe_comp1())).epsilon(1e-14));

    CHECK(mixture_log_density(Eigen::Vector2d(1.0, 0.2), probe_mixture()) ==
          doctest::Approx(-2.9791039063991796).epsilon(1e-12));
}

TEST_CASE("sample_mssal is deterministic for a fixed seed") {
    ComponentParams c = probe_comp1();
    Rng r1(555), r2(555);
    DataMatrix a = sample_mssal(c, 64, r1);
    DataMatrix b = sample_mssal(c, 64, r2);
    REQUIRE(a.values.rows() == 64);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_mssal empirical mean matches mu + D A D' beta") {
    ComponentParams c = probe_comp1();
    Rng rng(777);
    const int n = 200000;
    DataMatrix d = sample_mssal(c, n, rng);
    VectorXd expected = c.mu + c.d_mat * c.a_diag.asDiagonal() *
                                   c.d_mat.transpose() * c.beta;
    VectorXd mean = d.values.colwise().mean();
    for (int j = 0; j < 2; ++j) {
        double sd = std::sqrt(
            (d.values.col(j).array() - mean[j]).square().sum() / (n - 1));
        double se = sd / std::sqrt(double(n));
        CHECK(std::abs(mean[j] - expected[j]) < 3.0 * se);
    }
}

TEST_CASE("sample_mssal with beta = 0 is centered at mu") {
    ComponentParams c = make_comp(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0),
                                  rot2(40.0), Eigen::Vector2d(1.0, 0.6));
    Rng rng(778);
    const int n = 200000;
    DataMatrix d = sample_mssal(c, n, rng);
    VectorXd mean = d.values.colwise().mean();
    for (int j = 0; j < 2; ++j) {
        double sd = std::sqrt(
            (d.values.col(j).array() - mean[j]).square().sum() / (n - 1));
        CHECK(std::abs(mean[j]) < 3.0 * sd / std::sqrt(double(n)));
    }
}

TEST_CASE("marginals for D = I follow the univariate asymmetric Laplace law") {
    // two-sample Kolmogorov-Smirnov against direct univariate simulation,
    // alpha = 1e-3
    VectorXd mu(2), beta(2), a(2);
    mu << 0.3, -0.2;
    beta << 0.6, -0.4;
    a << 1.2, 0.7;
    ComponentParams c = make_comp(mu, beta, MatrixXd::Identity(2, 2), a);

    const int n = 20000;
    Rng rng(4242);
    DataMatrix d = sample_mssal(c, n, rng);

    Rng ref(8383);
    for (int j = 0; j < 2; ++j) {
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) xs[i] = d.values(i, j);
        for (int i = 0; i < n; ++i) {
            double w = ref.exponential();
            double z = ref.normal();
            ys[i] = mu[j] + a[j] * w * beta[j] + std::sqrt(a[j] * w) * z;
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        double dmax = 0.0;
        std::size_t ix = 0, iy = 0;
        while (ix < xs.size() && iy < ys.size()) {
            if (xs[ix] <= ys[iy])
                ++ix;
            else
                ++iy;
            double diff = std::abs(double(ix) / n - double(iy) / n);
            dmax = std::max(dmax, diff);
        }
        // c(1e-3) = sqrt(-ln(5e-4)/2), two-sample scaling sqrt(2/n)
        double crit = std::sqrt(-std::log(5e-4) / 2.0) * std::sqrt(2.0 / n);
        CHECK(dmax < crit);
    }
}

TEST_CASE("sample_mixture labels and reproducibility") {
    MixtureModel single;
    single.weights = VectorXd::Ones(1);
    single.components = {probe_comp1()};
    Rng r0(1);
    auto [d0, l0] = sample_mixture(single, 500, r0);
    CHECK((l0.array() == 1).all());

    MixtureModel m = probe_mixture();
    m.weights = Eigen::Vector2d(0.5, 0.5);
    Rng r1(99);
    auto [d1, l1] = sample_mixture(m, 100000, r1);
    double frac1 = double((l1.array() == 1).count()) / 100000.0;
    CHECK(frac1 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(frac1 - 0.5) < 0.01);

    Rng r2(99);
    auto [d2, l2] = sample_mixture(m, 100000, r2);
    CHECK((d1.values - d2.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((l1 - l2).cwiseAbs().maxCoeff() == 0);
}
