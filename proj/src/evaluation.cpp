#include "bps/evaluation.hpp"

#include <cmath>

#include "bps/linalg.hpp"

namespace bps {

double msfe(const Vector& errors) {
    if (errors.size() == 0) throw std::invalid_argument("msfe: empty error sequence");
    return errors.squaredNorm() / static_cast<double>(errors.size());
}

Vector msfe_by_series(const Matrix& forecasts, const Matrix& outcomes) {
    if (forecasts.rows() != outcomes.rows() || forecasts.cols() != outcomes.cols())
        throw std::invalid_argument("msfe_by_series: shape mismatch");
    if (forecasts.rows() == 0) throw std::invalid_argument("msfe_by_series: no rows");
    return (forecasts - outcomes).array().square().colwise().mean().transpose();
}

Vector lpdr(const Vector& model_logpdf, const Vector& baseline_logpdf) {
    if (model_logpdf.size() != baseline_logpdf.size())
        throw std::invalid_argument("lpdr: length mismatch");
    Vector out(model_logpdf.size());
    double acc = 0.0;
    for (Eigen::Index t = 0; t < model_logpdf.size(); ++t) {
        acc += model_logpdf(t) - baseline_logpdf(t);
        out(t) = acc;
    }
    return out;
}

double predictive_logpdf(const ForecastDistribution& fd, const Vector& y) {
    const auto n = fd.means.size();
    if (n == 0) throw std::invalid_argument("predictive_logpdf: empty distribution");
    Vector terms(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        terms(static_cast<Eigen::Index>(i)) = mvn_logpdf(y, fd.means[i], fd.covs[i]);
    return log_sum_exp(terms) - std::log(static_cast<double>(n));
}

double kl_gaussian(const Vector& mean_p, const Matrix& cov_p, const Vector& mean_h,
                   const Matrix& cov_h) {
    const Eigen::Index d = mean_p.size();
    if (mean_h.size() != d || cov_p.rows() != d || cov_h.rows() != d)
        throw std::invalid_argument("kl_gaussian: dimension mismatch");
    Matrix Lp = robust_cholesky(cov_p);
    Matrix Lh = robust_cholesky(cov_h);
    Matrix Hinv = chol_solve(Lh, Matrix::Identity(d, d));
    Vector dm = mean_h - mean_p;
    double tr = (Hinv * cov_p).trace();
    double quad = dm.dot(Hinv * dm);
    double logdet = chol_logdet(Lh) - chol_logdet(Lp);
    return 0.5 * (tr + quad - static_cast<double>(d) + logdet);
}

double kl_mc(const Vector& logp, const Vector& logh) {
    if (logp.size() != logh.size() || logp.size() == 0)
        throw std::invalid_argument("kl_mc: need matching nonempty log densities");
    return (logp - logh).mean();
}

NormalDensity fit_gaussian(const Matrix& samples) {
    const Eigen::Index n = samples.rows();
    if (n < 2) throw std::invalid_argument("fit_gaussian: need at least two samples");
    NormalDensity out;
    out.mean = samples.colwise().mean().transpose();
    Matrix centered = samples.rowwise() - out.mean.transpose();
    out.cov = symmetrize(centered.transpose() * centered / static_cast<double>(n - 1));
    return out;
}

double kl_mc_gaussian_fit(const Matrix& samples, const Vector& logh) {
    if (samples.rows() != logh.size())
        throw std::invalid_argument("kl_mc_gaussian_fit: sample/density count mismatch");
    NormalDensity fit = fit_gaussian(samples);
    Matrix L = robust_cholesky(fit.cov);
    Vector logp(samples.rows());
    for (Eigen::Index i = 0; i < samples.rows(); ++i)
        logp(i) = mvn_logpdf_chol(samples.row(i).transpose(), fit.mean, L);
    return kl_mc(logp, logh);
}

Matrix bma_weights(const Matrix& loglik) {
    const Eigen::Index T = loglik.rows();
    const Eigen::Index J = loglik.cols();
    if (T == 0 || J == 0) throw std::invalid_argument("bma_weights: empty log likelihoods");
    Matrix w(T, J);
    Vector cum = Vector::Zero(J);
    for (Eigen::Index t = 0; t < T; ++t) {
        Vector shifted = cum.array() - cum.maxCoeff();
        Vector expv = shifted.array().exp();
        w.row(t) = (expv / expv.sum()).transpose();
        cum += loglik.row(t).transpose();
    }
    return w;
}

}  // namespace bps
