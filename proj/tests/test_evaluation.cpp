#include <cmath>

#include "bps/evaluation.hpp"
#include "bps/linalg.hpp"
#include "bps/rng.hpp"
#include "doctest.h"

using namespace bps;

namespace {

Vector vec1(double x) {
    Vector v(1);
    v << x;
    return v;
}

Matrix mat1(double x) {
    Matrix m(1, 1);
    m << x;
    return m;
}

}  // namespace

TEST_CASE("msfe arithmetic") {
    Vector e(2);
    e << 1.0, 2.0;
    CHECK(msfe(e) == doctest::Approx(2.5));
    CHECK_THROWS(msfe(Vector()));

    Matrix f(2, 2), y(2, 2);
    f << 1, 0, 3, 0;
    y << 0, 0, 1, 0;
    Vector m = msfe_by_series(f, y);
    CHECK(m(0) == doctest::Approx(2.5));
    CHECK(m(1) == doctest::Approx(0.0));

    // all-equal per-origin errors keep the cumulative MSFE constant
    Vector e2 = Vector::Constant(7, 1.3);
    for (Eigen::Index t = 1; t <= e2.size(); ++t)
        CHECK(msfe(e2.head(t)) == doctest::Approx(1.3 * 1.3));
}

TEST_CASE("lpdr arithmetic and sign convention") {
    Vector model(2), base(2);
    model << -1.0, -1.0;
    base << -0.5, -0.5;
    Vector curve = lpdr(model, base);
    CHECK(curve(0) == doctest::Approx(-0.5));
    CHECK(curve(1) == doctest::Approx(-1.0));

    // self-ratio is exactly zero everywhere
    Vector same = lpdr(base, base);
    CHECK(same.cwiseAbs().maxCoeff() == 0.0);

    // a strictly dominated model has a strictly decreasing curve
    Rng rng(5);
    Vector good(20), bad(20);
    for (int t = 0; t < 20; ++t) {
        good(t) = -std::abs(rng.normal());
        bad(t) = good(t) - 0.1 - std::abs(rng.normal());
    }
    Vector dom = lpdr(bad, good);
    for (int t = 1; t < 20; ++t) CHECK(dom(t) < dom(t - 1));
}

TEST_CASE("predictive logpdf of a sampled forecast") {
    ForecastDistribution fd;
    fd.samples = Matrix::Zero(1, 1);
    fd.means = {vec1(0.0)};
    fd.covs = {mat1(1.0)};
    CHECK(predictive_logpdf(fd, vec1(0.0)) ==
          doctest::Approx(std::log(1.0 / std::sqrt(2.0 * M_PI))));

    // two identical mixture components change nothing
    fd.means.push_back(vec1(0.0));
    fd.covs.push_back(mat1(1.0));
    CHECK(predictive_logpdf(fd, vec1(0.0)) ==
          doctest::Approx(std::log(1.0 / std::sqrt(2.0 * M_PI))));

    ForecastDistribution empty;
    CHECK_THROWS(predictive_logpdf(empty, vec1(0.0)));

    // quadrature oracle: mixture of two Gaussians vs numerical integration of
    // its own density (normalization) and pointwise mixture arithmetic
    ForecastDistribution mix;
    mix.means = {vec1(-1.0), vec1(2.0)};
    mix.covs = {mat1(0.5), mat1(1.5)};
    double y = 0.7;
    double direct = 0.5 * std::exp(mvn_logpdf(vec1(y), vec1(-1.0), mat1(0.5))) +
                    0.5 * std::exp(mvn_logpdf(vec1(y), vec1(2.0), mat1(1.5)));
    CHECK(predictive_logpdf(mix, vec1(y)) == doctest::Approx(std::log(direct)).epsilon(1e-10));
    double mass = 0.0, step = 0.005;
    for (double x = -15.0; x < 18.0; x += step)
        mass += std::exp(predictive_logpdf(mix, vec1(x))) * step;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("gaussian KL closed form") {
    CHECK(kl_gaussian(vec1(0.3), mat1(2.0), vec1(0.3), mat1(2.0)) == doctest::Approx(0.0));
    CHECK(kl_gaussian(vec1(1.0), mat1(1.0), vec1(0.0), mat1(1.0)) == doctest::Approx(0.5));

    // KL >= 0 on randomized PD pairs
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        Matrix A = rng.standard_normal_matrix(3, 3);
        Matrix B = rng.standard_normal_matrix(3, 3);
        Matrix P = A * A.transpose() + 0.1 * Matrix::Identity(3, 3);
        Matrix H = B * B.transpose() + 0.1 * Matrix::Identity(3, 3);
        Vector mp = rng.standard_normal_vector(3);
        Vector mh = rng.standard_normal_vector(3);
        CHECK(kl_gaussian(mp, P, mh, H) >= -1e-12);
    }
    CHECK_THROWS(kl_gaussian(vec1(0.0), mat1(-1.0), vec1(0.0), mat1(1.0)));
}

TEST_CASE("monte carlo KL") {
    // n = 1 returns the single log ratio
    Vector lp1(1), lh1(1);
    lp1 << -0.3;
    lh1 << -1.1;
    CHECK(kl_mc(lp1, lh1) == doctest::Approx(0.8));
    CHECK_THROWS(kl_mc(Vector(), Vector()));

    // p = h exactly: estimate shrinks toward zero
    Rng rng(23);
    const int n = 20000;
    Vector logp(n), logh(n);
    for (int i = 0; i < n; ++i) {
        Vector x = vec1(rng.normal());
        logp(i) = mvn_logpdf(x, vec1(0.0), mat1(1.0));
        logh(i) = logp(i);
    }
    CHECK(kl_mc(logp, logh) == 0.0);

    // known KL 0.5: N(1,1) against N(0,1), samples from p
    Vector lp(n), lh(n);
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        Vector x = vec1(1.0 + rng.normal());
        lp(i) = mvn_logpdf(x, vec1(1.0), mat1(1.0));
        lh(i) = mvn_logpdf(x, vec1(0.0), mat1(1.0));
        sum_sq += (lp(i) - lh(i)) * (lp(i) - lh(i));
    }
    double est = kl_mc(lp, lh);
    double se = std::sqrt((sum_sq / n - est * est) / n);
    CHECK(std::abs(est - 0.5) < 3.0 * se);
}

TEST_CASE("kl_mc converges at the monte carlo rate") {
    // errors against the exact gaussian KL shrink roughly like 1/sqrt(n)
    const double truth = kl_gaussian(vec1(1.0), mat1(1.0), vec1(0.0), mat1(1.0));
    std::vector<int> sizes = {100, 1000, 10000, 100000};
    std::vector<double> errs;
    for (int n : sizes) {
        // average |error| over replicates to tame estimator noise
        double acc = 0.0;
        const int reps = 30;
        for (int rep = 0; rep < reps; ++rep) {
            Rng rng(1000 + static_cast<std::uint64_t>(n) * 31 + rep);
            Vector lp(n), lh(n);
            for (int i = 0; i < n; ++i) {
                Vector x = vec1(1.0 + rng.normal());
                lp(i) = mvn_logpdf(x, vec1(1.0), mat1(1.0));
                lh(i) = mvn_logpdf(x, vec1(0.0), mat1(1.0));
            }
            acc += std::abs(kl_mc(lp, lh) - truth);
        }
        errs.push_back(acc / reps);
    }
    // log-log slope across the extremes should sit near -1/2
    double slope = (std::log(errs.back()) - std::log(errs.front())) /
                   (std::log(static_cast<double>(sizes.back())) -
                    std::log(static_cast<double>(sizes.front())));
    CHECK(slope < -0.35);
    CHECK(slope > -0.65);
}

TEST_CASE("gaussian-fit KL against a known divergence") {
    Rng rng(29);
    const int n = 40000;
    Matrix samples(n, 1);
    Vector logh(n);
    for (int i = 0; i < n; ++i) {
        double x = 1.0 + rng.normal();
        samples(i, 0) = x;
        logh(i) = mvn_logpdf(vec1(x), vec1(0.0), mat1(1.0));
    }
    CHECK(kl_mc_gaussian_fit(samples, logh) == doctest::Approx(0.5).epsilon(0.05));
    CHECK_THROWS(kl_mc_gaussian_fit(samples, Vector::Zero(3)));
}

TEST_CASE("bma weights") {
    // equal log likelihoods keep the weights uniform
    Matrix ll = Matrix::Constant(10, 3, -1.2);
    Matrix w = bma_weights(ll);
    for (Eigen::Index t = 0; t < 10; ++t)
        for (Eigen::Index j = 0; j < 3; ++j) CHECK(w(t, j) == doctest::Approx(1.0 / 3.0));

    // weights form a probability vector at every origin
    Rng rng(31);
    Matrix noisy = Matrix::Zero(60, 4);
    for (Eigen::Index t = 0; t < 60; ++t)
        for (Eigen::Index j = 0; j < 4; ++j) noisy(t, j) = -1.0 + 0.5 * rng.normal();
    Matrix wn = bma_weights(noisy);
    for (Eigen::Index t = 0; t < 60; ++t) {
        CHECK(std::abs(wn.row(t).sum() - 1.0) < 1e-12);
        CHECK(wn.row(t).minCoeff() >= 0.0);
    }

    // +1 nat per origin for 50 origins pushes the winner above 0.99
    Matrix dom = Matrix::Zero(51, 2);
    dom.col(0).array() = -1.0;
    dom.col(1).array() = -2.0;
    Matrix wd = bma_weights(dom);
    CHECK(wd(0, 0) == doctest::Approx(0.5));
    CHECK(wd(50, 0) > 0.99);

    // singleton model keeps weight one
    Matrix solo = Matrix::Constant(5, 1, -3.0);
    Matrix ws = bma_weights(solo);
    for (Eigen::Index t = 0; t < 5; ++t) CHECK(ws(t, 0) == doctest::Approx(1.0));

    CHECK_THROWS(bma_weights(Matrix()));
}
