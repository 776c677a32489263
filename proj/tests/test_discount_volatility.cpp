#include <doctest.h>

#include <cmath>
#include <vector>

#include "bps/discount_volatility.hpp"
#include "bps/linalg.hpp"

using namespace bps;

namespace {

Matrix scalar_mat(double v) {
    Matrix m(1, 1);
    m << v;
    return m;
}

Vector scalar_vec(double v) {
    Vector x(1);
    x << v;
    return x;
}

}  // namespace

TEST_CASE("filter step hand recursion oracle (q=1)") {
    // n0=2 (h0=2), beta=0.5, D0=1, e=2 -> h'=2, n'=2, D'=4.5
    auto prev = VolFilterStats::from_prior(2.0, scalar_mat(1.0));
    CHECK(prev.h == 2.0);
    auto s = volatility_filter_step(prev, scalar_vec(2.0), 0.5);
    CHECK(s.h == doctest::Approx(2.0));
    CHECK(s.n == doctest::Approx(2.0));
    CHECK(s.D(0, 0) == doctest::Approx(4.5));
}

TEST_CASE("zero residual discounts the sum-of-squares only") {
    auto prev = VolFilterStats::from_prior(3.0, Matrix::Identity(2, 2) * 0.4);
    auto s = volatility_filter_step(prev, Vector::Zero(2), 0.9);
    CHECK((s.D - 0.9 * prev.D).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("beta=1 accumulates dof without discounting") {
    auto s = VolFilterStats::from_prior(5.0, scalar_mat(1.0));
    const double h0 = s.h;
    for (int t = 0; t < 20; ++t) s = volatility_filter_step(s, scalar_vec(0.1), 1.0);
    CHECK(s.h == doctest::Approx(h0 + 20.0));
}

TEST_CASE("h recursion converges monotonically to 1/(1-beta)") {
    const double beta = 0.95, limit = 1.0 / (1.0 - beta);
    for (double h0 : {1.0, 40.0}) {
        auto s = VolFilterStats::from_prior(h0, scalar_mat(1.0));
        double prev_gap = std::abs(s.h - limit);
        for (int t = 0; t < 400; ++t) {
            double expect = beta * s.h + 1.0;
            s = volatility_filter_step(s, scalar_vec(0.0), beta);
            CHECK(s.h == doctest::Approx(expect));
            double gap = std::abs(s.h - limit);
            CHECK(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
        CHECK(std::abs(s.h - limit) < 1e-6);
    }
}

TEST_CASE("wishart sampler mean identities") {
    Rng rng(21);
    SUBCASE("q=1 gamma marginal") {
        const double dof = 3.7;
        double sum = 0.0;
        const int N = 100000;
        for (int i = 0; i < N; ++i) sum += sample_wishart(dof, scalar_mat(1.0), rng)(0, 0);
        CHECK(sum / N == doctest::Approx(dof).epsilon(0.01));
    }
    SUBCASE("identity scale, q=3") {
        const double dof = 5.3;
        Matrix sum = Matrix::Zero(3, 3);
        const int N = 100000;
        for (int i = 0; i < N; ++i) sum += sample_wishart(dof, Matrix::Identity(3, 3), rng);
        Matrix mean = sum / N;
        CHECK((mean - dof * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.01 * dof);
    }
    SUBCASE("concentration as dof grows with scale I/dof") {
        const double dof = 1e6;
        Matrix draw = sample_wishart(dof, Matrix::Identity(2, 2) / dof, rng);
        CHECK((draw - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.02);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS(sample_wishart(0.5, Matrix::Identity(2, 2), rng));
        CHECK_THROWS(sample_wishart(3.0, -Matrix::Identity(2, 2), rng));
    }
}

TEST_CASE("q=1 inverse wishart equals inverse gamma") {
    // IW(n, D) with q=1 is IG(n/2, D/2): mean D/(n-2)
    Rng rng(31);
    const double n = 6.0, D = 3.0;
    const int N = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < N; ++i) {
        double v = sample_inverse_wishart(n, scalar_mat(D), rng)(0, 0);
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / N;
    double se = std::sqrt((sum2 / N - mean * mean) / N);
    CHECK(std::abs(mean - D / (n - 2.0)) < 3.0 * se);
}

TEST_CASE("E[V^-1] = h D^-1 under the final posterior") {
    Rng rng(41);
    const double n = 5.0;
    Matrix D(2, 2);
    D << 2.0, 0.5, 0.5, 1.5;
    const double h = n + 1.0;  // q=2
    Matrix sum = Matrix::Zero(2, 2);
    const int N = 100000;
    for (int i = 0; i < N; ++i)
        sum += sample_inverse_wishart(n, D, rng).inverse();
    Matrix mean = sum / N;
    Matrix expect = h * D.inverse();
    CHECK((mean - expect).cwiseAbs().maxCoeff() < 0.01 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("beta=1 backward path is constant") {
    Rng rng(51);
    std::vector<VolFilterStats> stats;
    auto s = VolFilterStats::from_prior(4.0, Matrix::Identity(2, 2));
    for (int t = 0; t < 5; ++t) {
        s = volatility_filter_step(s, Vector::Constant(2, 0.3), 1.0);
        stats.push_back(s);
    }
    auto prior = VolFilterStats::from_prior(4.0, Matrix::Identity(2, 2));
    auto path = backward_sample_volatility(stats, prior, 1.0, rng);
    REQUIRE(path.size() == 6);
    for (const auto& V : path) CHECK((V - path[5]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampled volatility paths stay symmetric PD") {
    Rng rng(61);
    std::vector<VolFilterStats> stats;
    auto prior = VolFilterStats::from_prior(7.0, Matrix::Identity(3, 3) * 0.07);
    auto s = prior;
    for (int t = 0; t < 30; ++t) {
        s = volatility_filter_step(s, rng.standard_normal_vector(3) * 0.3, 0.95);
        stats.push_back(s);
    }
    auto path = backward_sample_volatility(stats, prior, 0.95, rng);
    for (const auto& V : path) {
        CHECK((V - V.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(V);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}
