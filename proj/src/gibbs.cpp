#include "bps/gibbs.hpp"

#include <cmath>

#include "bps/linalg.hpp"

namespace bps {

void BpsPrior::validate(Eigen::Index n_agents, Eigen::Index q) const {
    const Eigen::Index dim = (n_agents + 1) * q;
    if (m0.size() != dim || C0.rows() != dim || C0.cols() != dim)
        throw ConfigError("BpsPrior: coefficient prior dimension mismatch");
    if (D0.rows() != q || D0.cols() != q)
        throw ConfigError("BpsPrior: volatility prior dimension mismatch");
    if (!(n0 > 0.0)) throw ConfigError("BpsPrior: n0 must be positive");
    DiscountConfig{delta, beta}.validate();
    robust_cholesky(C0);
    robust_cholesky(D0);
}

BpsPrior BpsPrior::standard(Eigen::Index n_agents, Eigen::Index q, double intercept_var,
                            const std::vector<double>& coef_var_per_series) {
    const Eigen::Index block = n_agents + 1;
    BpsPrior p;
    p.m0 = Vector::Zero(block * q);
    Vector diag = Vector::Ones(block * q);
    for (Eigen::Index r = 0; r < q; ++r) {
        diag(r * block) = intercept_var;
        double coef_var = 1.0;
        if (static_cast<std::size_t>(r) < coef_var_per_series.size() &&
            coef_var_per_series[static_cast<std::size_t>(r)] > 0.0)
            coef_var = coef_var_per_series[static_cast<std::size_t>(r)];
        for (Eigen::Index j = 0; j < n_agents; ++j) {
            p.m0(r * block + 1 + j) = 1.0 / static_cast<double>(n_agents);
            diag(r * block + 1 + j) = coef_var;
        }
    }
    p.C0 = diag.asDiagonal();
    p.n0 = 7.0;
    p.D0 = 7.0 * 0.01 * Matrix::Identity(q, q);
    return p;
}

void McmcConfig::validate() const {
    if (burn_in < 0 || n_saved < 1 || thin < 1)
        throw ConfigError("McmcConfig: need burn_in >= 0, n_saved >= 1, thin >= 1");
}

void SynthesisData::validate() const {
    if (y.empty()) throw DataError("SynthesisData: empty dataset");
    if (agents.size() != y.size())
        throw DataError("SynthesisData: outcome/forecast length mismatch");
    const Eigen::Index qq = y.front().size();
    const std::size_t J = agents.front().size();
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (y[t].size() != qq) throw DataError("SynthesisData: ragged outcomes");
        if (agents[t].size() != J) throw DataError("SynthesisData: ragged agent sets");
        for (const auto& a : agents[t])
            if (a.dim() != qq) throw DataError("SynthesisData: agent density dimension mismatch");
    }
}

std::vector<Matrix> initialize_states(const SynthesisData& data, Rng& rng, StateInit mode) {
    const auto T = data.y.size();
    const Eigen::Index J = data.n_agents();
    const Eigen::Index q = data.q();
    std::vector<Matrix> X(T);
    for (std::size_t t = 0; t < T; ++t) {
        X[t] = Matrix(J, q);
        for (Eigen::Index j = 0; j < J; ++j) {
            if (mode == StateInit::observed)
                X[t].row(j) = data.y[t].transpose();
            else
                X[t].row(j) = data.agents[t][static_cast<std::size_t>(j)].sample(rng).transpose();
        }
    }
    return X;
}

namespace {

void sample_theta_block(GibbsChainState& state, const SynthesisData& data, const BpsPrior& prior,
                        Rng& rng) {
    const auto T = data.y.size();
    std::vector<ThetaFilterStats> stats;
    stats.reserve(T);
    Vector m = prior.m0;
    Matrix C = prior.C0;
    for (std::size_t t = 0; t < T; ++t) {
        DesignMatrix F = DesignMatrix::from_states(state.X[t]);
        auto s = forward_filter_step(m, C, F, data.y[t], state.V[t + 1], prior.delta);
        m = s.m;
        C = s.C;
        stats.push_back(std::move(s));
    }
    state.C_last = stats.back().C;
    state.theta = backward_sample_theta(stats, prior.m0, prior.C0, prior.delta, rng);
}

void sample_volatility_block(GibbsChainState& state, const SynthesisData& data,
                             const BpsPrior& prior, Rng& rng) {
    const auto T = data.y.size();
    auto vstats0 = VolFilterStats::from_prior(prior.n0, prior.D0);
    std::vector<VolFilterStats> vstats;
    vstats.reserve(T);
    auto s = vstats0;
    for (std::size_t t = 0; t < T; ++t) {
        DesignMatrix F = DesignMatrix::from_states(state.X[t]);
        Vector resid = data.y[t] - F.entries * state.theta[t + 1];
        s = volatility_filter_step(s, resid, prior.beta);
        vstats.push_back(s);
    }
    state.h_last = vstats.back().h;
    state.D_last = vstats.back().D;
    state.V = backward_sample_volatility(vstats, vstats0, prior.beta, rng);
}

void sample_states_block(GibbsChainState& state, const SynthesisData& data, Rng& rng) {
    const auto T = data.y.size();
    for (std::size_t t = 0; t < T; ++t) {
        const auto& agents = data.agents[t];
        const Vector& theta = state.theta[t + 1];
        const Matrix& V = state.V[t + 1];
        bool any_empirical = false, any_t = false;
        for (const auto& a : agents) {
            any_empirical |= a.is_empirical();
            any_t |= a.is_student_t();
        }
        if (any_empirical) {
            state.X[t] = sample_states_empirical(theta, V, data.y[t], agents, state.X[t], rng);
        } else if (any_t) {
            state.phi[t] = sample_phi(state.X[t], agents, rng);
            state.X[t] = sample_states_t(theta, V, data.y[t], agents, state.phi[t], rng);
        } else {
            state.X[t] = sample_states_normal(theta, V, data.y[t], agents, rng);
        }
    }
}

double chain_loglik(const GibbsChainState& state, const SynthesisData& data) {
    double ll = 0.0;
    for (std::size_t t = 0; t < data.y.size(); ++t) {
        DesignMatrix F = DesignMatrix::from_states(state.X[t]);
        ll += mvn_logpdf(data.y[t], F.entries * state.theta[t + 1], state.V[t + 1]);
    }
    return ll;
}

}  // namespace

void gibbs_sweep(GibbsChainState& state, const SynthesisData& data, const BpsPrior& prior,
                 Rng& rng, BlockOrder order) {
    if (order == BlockOrder::theta_vol_states) {
        sample_theta_block(state, data, prior, rng);
        sample_volatility_block(state, data, prior, rng);
        sample_states_block(state, data, rng);
    } else {
        sample_states_block(state, data, rng);
        sample_theta_block(state, data, prior, rng);
        sample_volatility_block(state, data, prior, rng);
    }
}

PosteriorDraws run_mcmc(const SynthesisData& data, const BpsPrior& prior, const McmcConfig& cfg,
                        BlockOrder order, StateInit init) {
    data.validate();
    cfg.validate();
    const Eigen::Index J = data.n_agents();
    const Eigen::Index q = data.q();
    prior.validate(J, q);
    const auto T = data.y.size();

    Rng rng(cfg.seed);
    GibbsChainState state;
    state.X = initialize_states(data, rng, init);
    state.phi.assign(T, Vector::Ones(J));
    // harmonic-mean prior estimate of V for the first theta draw
    const double h0 = prior.n0 + static_cast<double>(q) - 1.0;
    state.V.assign(T + 1, prior.D0 / h0);
    state.theta.assign(T + 1, prior.m0);

    PosteriorDraws out;
    out.theta.reserve(static_cast<std::size_t>(cfg.n_saved));
    out.loglik = Vector(cfg.n_saved);

    for (int it = 0; it < cfg.burn_in; ++it) gibbs_sweep(state, data, prior, rng, order);
    for (int s = 0; s < cfg.n_saved; ++s) {
        for (int k = 0; k < cfg.thin; ++k) gibbs_sweep(state, data, prior, rng, order);
        out.theta.push_back(state.theta);
        out.V.push_back(state.V);
        out.X.push_back(state.X);
        out.C_last.push_back(state.C_last);
        out.h_last.push_back(state.h_last);
        out.D_last.push_back(state.D_last);
        double ll = chain_loglik(state, data);
        if (!std::isfinite(ll)) throw NumericError("run_mcmc: non-finite log-likelihood");
        out.loglik(s) = ll;
    }
    return out;
}

ForecastDistribution forecast_one_step(const PosteriorDraws& draws,
                                       const std::vector<AgentForecastDensity>& next_agents,
                                       const BpsPrior& prior, Rng& rng) {
    const int n = draws.n_saved();
    if (n < 1) throw std::invalid_argument("forecast_one_step: no posterior draws");
    const Eigen::Index q = draws.D_last.front().rows();
    const Eigen::Index J = static_cast<Eigen::Index>(next_agents.size());

    ForecastDistribution fd;
    fd.samples = Matrix(n, q);
    fd.means.reserve(static_cast<std::size_t>(n));
    fd.covs.reserve(static_cast<std::size_t>(n));
    Matrix eye = Matrix::Identity(q, q);

    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const Vector& theta_t = draws.theta[idx].back();
        const Matrix& V_t = draws.V[idx].back();

        Matrix V_next;
        if (prior.beta >= 1.0) {
            V_next = V_t;
        } else {
            Matrix prec = chol_solve(robust_cholesky(V_t), eye) * prior.beta;
            Matrix Dinv = chol_solve(robust_cholesky(draws.D_last[idx]), eye);
            // same discount Wishart evolution as the backward sampler
            double dof = (1.0 - prior.beta) * draws.h_last[idx];
            Matrix L = robust_cholesky(symmetrize(Dinv));
            const auto k = static_cast<Eigen::Index>(std::floor(dof));
            const double frac = dof - static_cast<double>(k);
            for (Eigen::Index r = 0; r < k; ++r) {
                Vector z = L * rng.standard_normal_vector(q);
                prec += z * z.transpose();
            }
            if (frac > 0.0) {
                Vector z = L * rng.standard_normal_vector(q);
                prec += frac * (z * z.transpose());
            }
            V_next = symmetrize(chol_solve(robust_cholesky(symmetrize(prec)), eye));
        }

        Vector theta_next = theta_t;
        if (prior.delta < 1.0) {
            Matrix W = symmetrize(draws.C_last[idx] * (1.0 - prior.delta) / prior.delta);
            if (W.cwiseAbs().maxCoeff() > 0.0)
                theta_next += robust_cholesky(W) * rng.standard_normal_vector(theta_t.size());
        }

        Matrix X_next(J, q);
        for (Eigen::Index j = 0; j < J; ++j)
            X_next.row(j) = next_agents[static_cast<std::size_t>(j)].sample(rng).transpose();

        DesignMatrix F = DesignMatrix::from_states(X_next);
        Vector mu = F.entries * theta_next;
        Matrix Lv = robust_cholesky(V_next);
        fd.samples.row(i) = (mu + Lv * rng.standard_normal_vector(q)).transpose();
        fd.means.push_back(std::move(mu));
        fd.covs.push_back(std::move(V_next));
    }
    return fd;
}

}  // namespace bps
