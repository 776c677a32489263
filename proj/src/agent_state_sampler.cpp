#include "bps/agent_state_sampler.hpp"

#include <cmath>
#include <iostream>

#include "bps/dlm_ffbs.hpp"
#include "bps/linalg.hpp"

namespace bps {

namespace {

struct Coupling {
    Matrix B;  // q x Jq, B(r, j*q + r) = theta_{t,r,j}
    Vector c;  // intercepts
};

Coupling build_coupling(const Vector& theta, Eigen::Index n_agents, Eigen::Index q) {
    const Eigen::Index block = n_agents + 1;
    if (theta.size() != block * q)
        throw std::invalid_argument("agent state sampler: theta dimension mismatch");
    Coupling cp;
    cp.B = Matrix::Zero(q, n_agents * q);
    cp.c = Vector(q);
    for (Eigen::Index r = 0; r < q; ++r) {
        cp.c(r) = theta(r * block);
        for (Eigen::Index j = 0; j < n_agents; ++j)
            cp.B(r, j * q + r) = theta(r * block + 1 + j);
    }
    return cp;
}

// Exact draw of vec(X) from the Gaussian conditional given per-agent normal
// moments (mean_j, cov_j).
Matrix draw_gaussian_states(const Vector& theta, const Matrix& V, const Vector& y,
                            const std::vector<Vector>& means, const std::vector<Matrix>& covs,
                            Rng& rng) {
    const auto J = static_cast<Eigen::Index>(means.size());
    const Eigen::Index q = y.size();
    Coupling cp = build_coupling(theta, J, q);

    Matrix prior_prec = Matrix::Zero(J * q, J * q);
    Vector prior_prec_mean = Vector::Zero(J * q);
    Matrix eye = Matrix::Identity(q, q);
    for (Eigen::Index j = 0; j < J; ++j) {
        Matrix prec_j = chol_solve(robust_cholesky(covs[static_cast<std::size_t>(j)]), eye);
        prior_prec.block(j * q, j * q, q, q) = prec_j;
        prior_prec_mean.segment(j * q, q) = prec_j * means[static_cast<std::size_t>(j)];
    }

    Matrix Vinv_B = chol_solve(robust_cholesky(V), cp.B);
    Matrix K = symmetrize(prior_prec + cp.B.transpose() * Vinv_B);
    Vector rhs = prior_prec_mean + Vinv_B.transpose() * (y - cp.c);

    Matrix L = robust_cholesky(K);
    Vector mean = chol_solve(L, rhs);
    // z = mean + L^{-T} eps gives covariance K^{-1}
    Vector eps = rng.standard_normal_vector(J * q);
    Vector z = mean + L.transpose().triangularView<Eigen::Upper>().solve(eps);

    Matrix states(J, q);
    for (Eigen::Index j = 0; j < J; ++j) states.row(j) = z.segment(j * q, q).transpose();
    return states;
}

}  // namespace

Matrix sample_states_normal(const Vector& theta, const Matrix& V, const Vector& y,
                            const std::vector<AgentForecastDensity>& priors, Rng& rng) {
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    means.reserve(priors.size());
    covs.reserve(priors.size());
    for (const auto& p : priors) {
        if (!p.is_normal())
            throw std::invalid_argument("sample_states_normal: all agents must be normal");
        means.push_back(p.normal().mean);
        covs.push_back(p.normal().cov);
    }
    return draw_gaussian_states(theta, V, y, means, covs, rng);
}

Matrix sample_states_t(const Vector& theta, const Matrix& V, const Vector& y,
                       const std::vector<AgentForecastDensity>& priors, const Vector& phi,
                       Rng& rng) {
    if (phi.size() != static_cast<Eigen::Index>(priors.size()))
        throw std::invalid_argument("sample_states_t: phi length mismatch");
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    for (std::size_t j = 0; j < priors.size(); ++j) {
        const auto& p = priors[j];
        if (p.is_student_t()) {
            if (!(phi(static_cast<Eigen::Index>(j)) > 0.0))
                throw std::invalid_argument("sample_states_t: phi must be positive");
            means.push_back(p.student_t().loc);
            covs.push_back(p.student_t().scale / phi(static_cast<Eigen::Index>(j)));
        } else if (p.is_normal()) {
            means.push_back(p.normal().mean);
            covs.push_back(p.normal().cov);
        } else {
            throw std::invalid_argument("sample_states_t: empirical agent not supported here");
        }
    }
    return draw_gaussian_states(theta, V, y, means, covs, rng);
}

Vector sample_phi(const Matrix& states, const std::vector<AgentForecastDensity>& priors,
                  Rng& rng) {
    const auto J = static_cast<Eigen::Index>(priors.size());
    const Eigen::Index q = states.cols();
    if (states.rows() != J) throw std::invalid_argument("sample_phi: state shape mismatch");
    Vector phi = Vector::Ones(J);
    for (Eigen::Index j = 0; j < J; ++j) {
        const auto& p = priors[static_cast<std::size_t>(j)];
        if (!p.is_student_t()) continue;
        const auto& t = p.student_t();
        Vector d = states.row(j).transpose() - t.loc;
        Matrix L = robust_cholesky(t.scale);
        double quad = L.triangularView<Eigen::Lower>().solve(d).squaredNorm();
        // G(n/2, n/2) prior x N(h, H/phi) likelihood
        double shape = 0.5 * (t.dof + static_cast<double>(q));
        double rate = 0.5 * (t.dof + quad);
        phi(j) = rng.gamma(shape, rate);
    }
    return phi;
}

Vector joint_candidate_weights(const Vector& theta, const Matrix& V, const Vector& y,
                               const std::vector<Matrix>& candidates) {
    const auto I = static_cast<Eigen::Index>(candidates.size());
    if (I < 1) throw std::invalid_argument("joint_candidate_weights: no candidates");
    Matrix Lv = robust_cholesky(V);
    Vector logw(I);
    for (Eigen::Index i = 0; i < I; ++i) {
        DesignMatrix F = DesignMatrix::from_states(candidates[static_cast<std::size_t>(i)]);
        logw(i) = mvn_logpdf_chol(y, F.entries * theta, Lv);
    }
    double lse = log_sum_exp(logw);
    if (!std::isfinite(lse)) {
        std::cerr << "[bps] warning: all candidate weights underflowed; "
                     "falling back to uniform resampling\n";
        return Vector::Constant(I, 1.0 / static_cast<double>(I));
    }
    return (logw.array() - lse).exp();
}

Matrix resample_joint_candidates(const Vector& theta, const Matrix& V, const Vector& y,
                                 const std::vector<Matrix>& candidates, Rng& rng) {
    Vector w = joint_candidate_weights(theta, V, y, candidates);
    double u = rng.uniform();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        acc += w(i);
        if (u <= acc) return candidates[static_cast<std::size_t>(i)];
    }
    return candidates.back();
}

Matrix sample_states_empirical(const Vector& theta, const Matrix& V, const Vector& y,
                               const std::vector<AgentForecastDensity>& priors,
                               const Matrix& current, Rng& rng) {
    const auto J = static_cast<Eigen::Index>(priors.size());
    Matrix states = current;
    for (Eigen::Index j = 0; j < J; ++j) {
        const auto& p = priors[static_cast<std::size_t>(j)];
        if (!p.is_empirical())
            throw std::invalid_argument("sample_states_empirical: all agents must be empirical");
        const Matrix& draws = p.empirical().draws;
        std::vector<Matrix> candidates;
        candidates.reserve(static_cast<std::size_t>(draws.rows()));
        for (Eigen::Index i = 0; i < draws.rows(); ++i) {
            Matrix cand = states;
            cand.row(j) = draws.row(i);
            candidates.push_back(std::move(cand));
        }
        states = resample_joint_candidates(theta, V, y, candidates, rng);
    }
    return states;
}

}  // namespace bps
