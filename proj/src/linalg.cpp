#include "bps/linalg.hpp"

#include <cmath>

namespace bps {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix robust_cholesky(const Matrix& m) {
    Matrix s = symmetrize(m);
    const auto dim = static_cast<double>(s.rows());
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    const double base = std::abs(s.trace()) / dim;
    for (double eps = 1e-10; eps <= 1e-6 * 1.0001; eps *= 10.0) {
        Matrix jittered = s + eps * std::max(base, 1e-300) * Matrix::Identity(s.rows(), s.cols());
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw NumericError("robust_cholesky: matrix not positive definite after jitter escalation");
}

Matrix chol_solve(const Matrix& chol_lower, const Matrix& b) {
    Matrix y = chol_lower.triangularView<Eigen::Lower>().solve(b);
    return chol_lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

double chol_logdet(const Matrix& chol_lower) {
    return 2.0 * chol_lower.diagonal().array().log().sum();
}

double mvn_logpdf_chol(const Vector& x, const Vector& mean, const Matrix& chol_lower) {
    const auto q = static_cast<double>(x.size());
    Vector z = chol_lower.triangularView<Eigen::Lower>().solve(x - mean);
    return -0.5 * (q * std::log(2.0 * M_PI) + chol_logdet(chol_lower) + z.squaredNorm());
}

double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
    return mvn_logpdf_chol(x, mean, robust_cholesky(cov));
}

double mvt_logpdf(const Vector& x, double dof, const Vector& loc, const Matrix& scale) {
    const auto q = static_cast<double>(x.size());
    Matrix l = robust_cholesky(scale);
    Vector z = l.triangularView<Eigen::Lower>().solve(x - loc);
    double quad = z.squaredNorm();
    return std::lgamma(0.5 * (dof + q)) - std::lgamma(0.5 * dof)
        - 0.5 * q * std::log(dof * M_PI) - 0.5 * chol_logdet(l)
        - 0.5 * (dof + q) * std::log1p(quad / dof);
}

double log_sum_exp(const Vector& logs) {
    const double m = logs.maxCoeff();
    if (!std::isfinite(m)) return m;
    return m + std::log((logs.array() - m).exp().sum());
}

}  // namespace bps
