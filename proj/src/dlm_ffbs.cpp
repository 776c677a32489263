#include "bps/dlm_ffbs.hpp"

#include <cmath>

#include "bps/linalg.hpp"

namespace bps {

DesignMatrix DesignMatrix::from_states(const Matrix& states) {
    DesignMatrix F;
    F.n_agents = states.rows();
    F.q = states.cols();
    const Eigen::Index block = F.n_agents + 1;
    F.entries = Matrix::Zero(F.q, block * F.q);
    for (Eigen::Index r = 0; r < F.q; ++r) {
        F.entries(r, r * block) = 1.0;
        for (Eigen::Index j = 0; j < F.n_agents; ++j)
            F.entries(r, r * block + 1 + j) = states(j, r);
    }
    return F;
}

void DiscountConfig::validate() const {
    if (!(delta > 0.0 && delta <= 1.0) || !(beta > 0.0 && beta <= 1.0))
        throw ConfigError("discount factors must lie in (0, 1]");
}

ThetaFilterStats forward_filter_step(const Vector& prev_m, const Matrix& prev_C,
                                     const DesignMatrix& F, const Vector& y,
                                     const Matrix& V, double delta) {
    const Eigen::Index p = F.dim();
    const Eigen::Index q = F.q;
    if (prev_m.size() != p || prev_C.rows() != p || prev_C.cols() != p)
        throw std::invalid_argument("forward_filter_step: state dimension mismatch");
    if (y.size() != q || V.rows() != q || V.cols() != q)
        throw std::invalid_argument("forward_filter_step: observation dimension mismatch");

    ThetaFilterStats s;
    s.R = symmetrize(prev_C / delta);
    s.f = F.entries * prev_m;
    Matrix RFt = s.R * F.entries.transpose();
    s.Q = symmetrize(F.entries * RFt + V);

    Matrix Lq;
    try {
        Lq = robust_cholesky(s.Q);
    } catch (const NumericError&) {
        throw NumericError("forward_filter_step: predictive covariance singular "
                           "(degenerate agent states)");
    }
    s.e = y - s.f;
    s.A = chol_solve(Lq, RFt.transpose()).transpose();  // R F' Q^{-1}
    s.m = prev_m + s.A * s.e;
    s.C = symmetrize(s.R - s.A * s.Q * s.A.transpose());
    robust_cholesky(s.C);  // enforce the PD invariant now, not at first use
    return s;
}

namespace {

Vector draw_smoothing(const Vector& mean, const Matrix& var, Rng& rng) {
    if (var.cwiseAbs().maxCoeff() == 0.0) return mean;
    return rng.mvn_chol(mean, robust_cholesky(var));
}

}  // namespace

std::vector<Vector> backward_sample_theta(const std::vector<ThetaFilterStats>& stats,
                                          const Vector& m0, const Matrix& C0,
                                          double delta, Rng& rng) {
    const auto T = stats.size();
    std::vector<Vector> path(T + 1);
    path[T] = draw_smoothing(stats[T - 1].m, stats[T - 1].C, rng);
    for (std::size_t t = T; t-- > 0;) {
        const Vector& m = (t == 0) ? m0 : stats[t - 1].m;
        const Matrix& C = (t == 0) ? C0 : stats[t - 1].C;
        Vector mean = m + delta * (path[t + 1] - m);
        path[t] = draw_smoothing(mean, (1.0 - delta) * C, rng);
    }
    return path;
}

}  // namespace bps
