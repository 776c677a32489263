#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bps/agent_state_sampler.hpp"
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

AgentForecastDensity normal_agent(const Vector& mean, const Matrix& cov) {
    return AgentForecastDensity(NormalDensity{mean, cov});
}

// theta for q=1, J=1: (intercept, weight)
Vector theta_1x1(double intercept, double weight) {
    Vector th(2);
    th << intercept, weight;
    return th;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

}  // namespace

TEST_CASE("scalar conjugate-normal oracle") {
    // q=1, J=1, intercept 0, weight 1, V=1, prior x~N(0,1), y=2 -> x|y ~ N(1, 0.5)
    Rng rng(101);
    std::vector<AgentForecastDensity> priors = {normal_agent(scalar_vec(0.0), scalar_mat(1.0))};
    const int N = 40000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < N; ++i) {
        Matrix x = sample_states_normal(theta_1x1(0.0, 1.0), scalar_mat(1.0), scalar_vec(2.0),
                                        priors, rng);
        sum += x(0, 0);
        sum2 += x(0, 0) * x(0, 0);
    }
    double mean = sum / N, var = sum2 / N - mean * mean;
    double se = std::sqrt(var / N);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
    CHECK(var == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("zero coupling returns draws from the agent priors") {
    Rng rng(103);
    Vector mu(2);
    mu << 1.0, -2.0;
    Matrix cov(2, 2);
    cov << 1.0, 0.3, 0.3, 0.5;
    std::vector<AgentForecastDensity> priors = {normal_agent(mu, cov)};
    Vector theta = Vector::Zero(4);  // q=2, J=1, all intercepts/weights zero
    theta(0) = 5.0;                  // intercepts don't couple x to y
    const int N = 30000;
    Vector sum = Vector::Zero(2);
    Matrix sum2 = Matrix::Zero(2, 2);
    for (int i = 0; i < N; ++i) {
        Matrix x = sample_states_normal(theta, Matrix::Identity(2, 2), Vector::Zero(2), priors, rng);
        Vector v = x.row(0).transpose();
        sum += v;
        sum2 += v * v.transpose();
    }
    Vector mean = sum / N;
    Matrix second = sum2 / N - mean * mean.transpose();
    CHECK((mean - mu).cwiseAbs().maxCoeff() < 0.03);
    CHECK((second - cov).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("uninformative likelihood limit recovers the prior") {
    Rng rng(105);
    std::vector<AgentForecastDensity> priors = {normal_agent(scalar_vec(0.5), scalar_mat(2.0))};
    const int N = 30000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < N; ++i) {
        Matrix x = sample_states_normal(theta_1x1(0.0, 1.0), scalar_mat(1e6), scalar_vec(50.0),
                                        priors, rng);
        sum += x(0, 0);
        sum2 += x(0, 0) * x(0, 0);
    }
    double mean = sum / N, var = sum2 / N - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.05));
    CHECK(var == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("unit scale factors reduce the T sampler to the normal one") {
    Rng rng_t(107), rng_n(107);
    std::vector<AgentForecastDensity> t_priors = {
        AgentForecastDensity(StudentTDensity{8.0, scalar_vec(0.3), scalar_mat(1.2)})};
    std::vector<AgentForecastDensity> n_priors = {normal_agent(scalar_vec(0.3), scalar_mat(1.2))};
    Vector phi = Vector::Ones(1);
    for (int i = 0; i < 50; ++i) {
        Matrix xt = sample_states_t(theta_1x1(0.1, 0.8), scalar_mat(0.9), scalar_vec(1.0),
                                    t_priors, phi, rng_t);
        Matrix xn = sample_states_normal(theta_1x1(0.1, 0.8), scalar_mat(0.9), scalar_vec(1.0),
                                         n_priors, rng_n);
        CHECK(xt(0, 0) == doctest::Approx(xn(0, 0)));
    }
}

TEST_CASE("large dof: full T augmentation converges to the normal sampler") {
    Rng rng(109);
    const int N = 10000;
    std::vector<AgentForecastDensity> t_priors = {
        AgentForecastDensity(StudentTDensity{5e4, scalar_vec(0.0), scalar_mat(1.0)})};
    std::vector<AgentForecastDensity> n_priors = {normal_agent(scalar_vec(0.0), scalar_mat(1.0))};
    std::vector<double> t_draws, n_draws;
    Vector theta = theta_1x1(0.0, 1.0);
    for (int i = 0; i < N; ++i) {
        // run the two-step augmentation to equilibrium-ish: phi | x then x | phi
        Matrix x0 = sample_states_normal(theta, scalar_mat(1.0), scalar_vec(1.0), n_priors, rng);
        Vector phi = sample_phi(x0, t_priors, rng);
        Matrix xt = sample_states_t(theta, scalar_mat(1.0), scalar_vec(1.0), t_priors, phi, rng);
        t_draws.push_back(xt(0, 0));
        Matrix xn = sample_states_normal(theta, scalar_mat(1.0), scalar_vec(1.0), n_priors, rng);
        n_draws.push_back(xn(0, 0));
    }
    CHECK(ks_two_sample(t_draws, n_draws) < 0.02);
}

TEST_CASE("sample_phi quadrature oracles") {
    SUBCASE("at the prior mode the conditional is Gamma((n+q)/2, n/2)") {
        Rng rng(111);
        std::vector<AgentForecastDensity> priors = {
            AgentForecastDensity(StudentTDensity{4.0, scalar_vec(1.0), scalar_mat(2.0)})};
        Matrix x(1, 1);
        x << 1.0;  // x = h
        // quadrature of the unnormalized density phi^{(n+q)/2-1} e^{-phi n/2}
        const double n = 4.0, q = 1.0;
        double num = 0.0, den = 0.0;
        const int G = 20000;
        const double hi = 40.0, step = hi / G;
        for (int g = 1; g <= G; ++g) {
            double p = g * step;
            double f = std::pow(p, 0.5 * (n + q) - 1.0) * std::exp(-0.5 * n * p);
            num += p * f;
            den += f;
        }
        double quad_mean = num / den;
        CHECK(quad_mean == doctest::Approx((n + q) / n).epsilon(1e-3));
        const int N = 100000;
        double sum = 0.0;
        for (int i = 0; i < N; ++i) sum += sample_phi(x, priors, rng)(0);
        CHECK(sum / N == doctest::Approx(quad_mean).epsilon(0.02));
    }
    SUBCASE("q=1, n=2, H=1, |x-h|=2") {
        Rng rng(113);
        std::vector<AgentForecastDensity> priors = {
            AgentForecastDensity(StudentTDensity{2.0, scalar_vec(0.0), scalar_mat(1.0)})};
        Matrix x(1, 1);
        x << 2.0;
        // unnormalized target: phi^{q/2} e^{-phi quad/2} * phi^{n/2-1} e^{-phi n/2}
        const double n = 2.0, quad = 4.0;
        double num = 0.0, den = 0.0;
        const int G = 40000;
        const double hi = 20.0, step = hi / G;
        for (int g = 1; g <= G; ++g) {
            double p = g * step;
            double f = std::sqrt(p) * std::exp(-0.5 * quad * p) * std::exp(-0.5 * n * p);
            num += p * f;
            den += f;
        }
        double quad_mean = num / den;
        const int N = 100000;
        double sum = 0.0;
        for (int i = 0; i < N; ++i) sum += sample_phi(x, priors, rng)(0);
        CHECK(sum / N == doctest::Approx(quad_mean).epsilon(0.02));
    }
    SUBCASE("huge dof pins phi at 1") {
        Rng rng(115);
        std::vector<AgentForecastDensity> priors = {
            AgentForecastDensity(StudentTDensity{1e8, scalar_vec(0.0), scalar_mat(1.0)})};
        Matrix x(1, 1);
        x << 3.0;
        for (int i = 0; i < 20; ++i)
            CHECK(sample_phi(x, priors, rng)(0) == doctest::Approx(1.0).epsilon(0.002));
    }
}

TEST_CASE("empirical resampling") {
    SUBCASE("singleton always returned") {
        Rng rng(117);
        Matrix draws(1, 1);
        draws << 3.14;
        std::vector<AgentForecastDensity> priors = {
            AgentForecastDensity(EmpiricalDensity{draws})};
        Matrix cur(1, 1);
        cur << 0.0;
        Matrix x = sample_states_empirical(theta_1x1(0.0, 1.0), scalar_mat(1.0), scalar_vec(0.0),
                                           priors, cur, rng);
        CHECK(x(0, 0) == 3.14);
    }
    SUBCASE("9:1 likelihood ratio selection frequencies") {
        Rng rng(119);
        Matrix a(1, 1), b(1, 1);
        a << 0.0;
        b << 1.0;
        // choose y and V so N(y|x_a,V)/N(y|x_b,V) = 9
        const double v = 1.0;
        const double y = 0.5 - v * std::log(9.0);  // midpoint shifted
        std::vector<Matrix> candidates = {a, b};
        Vector w = joint_candidate_weights(theta_1x1(0.0, 1.0), scalar_mat(v), scalar_vec(y),
                                           candidates);
        CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w(0) / w(1) == doctest::Approx(9.0).epsilon(1e-9));
        const int N = 10000;
        int count_a = 0;
        for (int i = 0; i < N; ++i) {
            Matrix x = resample_joint_candidates(theta_1x1(0.0, 1.0), scalar_mat(v),
                                                 scalar_vec(y), candidates, rng);
            if (x(0, 0) == 0.0) ++count_a;
        }
        double p = static_cast<double>(count_a) / N;
        double se = std::sqrt(0.9 * 0.1 / N);
        CHECK(std::abs(p - 0.9) < 3.0 * se);
    }
    SUBCASE("flat likelihood selects uniformly") {
        Rng rng(121);
        Matrix draws(2, 1);
        draws << -5.0, 5.0;
        std::vector<AgentForecastDensity> priors = {
            AgentForecastDensity(EmpiricalDensity{draws})};
        Matrix cur(1, 1);
        cur << 0.0;
        int first = 0;
        const int N = 10000;
        for (int i = 0; i < N; ++i) {
            Matrix x = sample_states_empirical(theta_1x1(0.0, 0.0), scalar_mat(1.0),
                                               scalar_vec(0.0), priors, cur, rng);
            if (x(0, 0) == -5.0) ++first;
        }
        double p = static_cast<double>(first) / N;
        CHECK(std::abs(p - 0.5) < 3.0 * std::sqrt(0.25 / N));
    }
}
