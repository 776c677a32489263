#include "bps/discount_volatility.hpp"

#include <cmath>

#include "bps/linalg.hpp"

namespace bps {

VolFilterStats VolFilterStats::from_prior(double n0, const Matrix& D0) {
    VolFilterStats s;
    const auto q = static_cast<double>(D0.rows());
    s.n = n0;
    s.h = n0 + q - 1.0;
    s.D = D0;
    if (s.n <= 0.0) throw ConfigError("volatility prior needs n0 > 0");
    return s;
}

VolFilterStats volatility_filter_step(const VolFilterStats& prev, const Vector& residual,
                                      double beta) {
    if (residual.size() != prev.D.rows())
        throw std::invalid_argument("volatility_filter_step: residual dimension mismatch");
    VolFilterStats s;
    const auto q = static_cast<double>(prev.D.rows());
    s.h = beta * prev.h + 1.0;
    s.n = s.h - q + 1.0;
    s.D = beta * prev.D + residual * residual.transpose();
    if (s.n <= 0.0)
        throw NumericError("volatility_filter_step: degrees of freedom fell to zero "
                           "(mis-specified prior dof)");
    return s;
}

Matrix sample_wishart(double dof, const Matrix& scale, Rng& rng) {
    const Eigen::Index q = scale.rows();
    if (!(dof > static_cast<double>(q) - 1.0))
        throw std::invalid_argument("sample_wishart: dof must exceed q-1");
    Matrix L = robust_cholesky(scale);
    // Bartlett: A lower triangular, A_ii^2 ~ chi^2_{dof-i}, A_ij ~ N(0,1).
    Matrix A = Matrix::Zero(q, q);
    for (Eigen::Index i = 0; i < q; ++i) {
        A(i, i) = std::sqrt(rng.chi_square(dof - static_cast<double>(i)));
        for (Eigen::Index j = 0; j < i; ++j) A(i, j) = rng.normal();
    }
    Matrix LA = L * A;
    return symmetrize(LA * LA.transpose());
}

Matrix sample_inverse_wishart(double n, const Matrix& D, Rng& rng) {
    const auto q = static_cast<double>(D.rows());
    Matrix Dinv = chol_solve(robust_cholesky(D), Matrix::Identity(D.rows(), D.cols()));
    Matrix P = sample_wishart(n + q - 1.0, symmetrize(Dinv), rng);
    return symmetrize(chol_solve(robust_cholesky(P), Matrix::Identity(D.rows(), D.cols())));
}

namespace {

// Wishart increment for the retrospective recursion. (1-beta)h_t drops below
// q-1 for q > 2, where the increment is a singular Wishart; build it as a sum
// of floor(dof) rank-one terms plus a fractionally weighted one, which keeps
// the exact mean dof*scale.
Matrix sample_wishart_increment(double dof, const Matrix& scale, Rng& rng) {
    const Eigen::Index q = scale.rows();
    if (dof > static_cast<double>(q) - 1.0) return sample_wishart(dof, scale, rng);
    Matrix L = robust_cholesky(scale);
    const auto k = static_cast<Eigen::Index>(std::floor(dof));
    const double frac = dof - static_cast<double>(k);
    Matrix out = Matrix::Zero(q, q);
    for (Eigen::Index i = 0; i < k; ++i) {
        Vector z = L * rng.standard_normal_vector(q);
        out += z * z.transpose();
    }
    if (frac > 0.0) {
        Vector z = L * rng.standard_normal_vector(q);
        out += frac * (z * z.transpose());
    }
    return symmetrize(out);
}

}  // namespace

std::vector<Matrix> backward_sample_volatility(const std::vector<VolFilterStats>& stats,
                                               const VolFilterStats& prior, double beta,
                                               Rng& rng) {
    const auto T = stats.size();
    const Eigen::Index q = prior.D.rows();
    std::vector<Matrix> V(T + 1);
    V[T] = sample_inverse_wishart(stats[T - 1].n, stats[T - 1].D, rng);
    Matrix eye = Matrix::Identity(q, q);
    for (std::size_t t = T; t-- > 0;) {
        const VolFilterStats& s = (t == 0) ? prior : stats[t - 1];
        Matrix prec_next = chol_solve(robust_cholesky(V[t + 1]), eye);
        if (beta >= 1.0) {
            // degenerate Wishart increment: the path is constant
            V[t] = V[t + 1];
            continue;
        }
        Matrix Dinv = chol_solve(robust_cholesky(s.D), eye);
        Matrix upsilon = sample_wishart_increment((1.0 - beta) * s.h, symmetrize(Dinv), rng);
        Matrix prec = symmetrize(beta * prec_next + upsilon);
        V[t] = symmetrize(chol_solve(robust_cholesky(prec), eye));
    }
    return V;
}

}  // namespace bps
