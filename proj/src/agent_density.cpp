#include "bps/agent_density.hpp"

#include <cmath>

#include "bps/linalg.hpp"

namespace bps {

AgentForecastDensity::AgentForecastDensity(Form form) : form_(std::move(form)) {
    if (const auto* n = std::get_if<NormalDensity>(&form_)) {
        if (n->cov.rows() != n->mean.size() || n->cov.cols() != n->mean.size())
            throw std::invalid_argument("normal density: covariance shape mismatch");
        robust_cholesky(n->cov);
    } else if (const auto* t = std::get_if<StudentTDensity>(&form_)) {
        if (!(t->dof > 0.0)) throw std::invalid_argument("student-t density: dof must be > 0");
        if (t->scale.rows() != t->loc.size() || t->scale.cols() != t->loc.size())
            throw std::invalid_argument("student-t density: scale shape mismatch");
        robust_cholesky(t->scale);
    } else if (const auto* e = std::get_if<EmpiricalDensity>(&form_)) {
        if (e->draws.rows() < 1) throw std::invalid_argument("empirical density: needs >= 1 draw");
        if (!e->draws.allFinite())
            throw std::invalid_argument("empirical density: non-finite draws");
    }
}

Eigen::Index AgentForecastDensity::dim() const {
    if (is_normal()) return normal().mean.size();
    if (is_student_t()) return student_t().loc.size();
    return empirical().draws.cols();
}

Vector AgentForecastDensity::mean() const {
    if (is_normal()) return normal().mean;
    if (is_student_t()) return student_t().loc;
    return empirical().draws.colwise().mean();
}

Matrix AgentForecastDensity::cov() const {
    if (is_normal()) return normal().cov;
    if (is_student_t()) {
        const auto& t = student_t();
        double factor = (t.dof > 2.0) ? t.dof / (t.dof - 2.0) : 1.0;
        return factor * t.scale;
    }
    const Matrix& d = empirical().draws;
    const auto n = d.rows();
    if (n == 1) return Matrix::Zero(d.cols(), d.cols());
    Matrix centered = d.rowwise() - d.colwise().mean();
    return symmetrize(centered.transpose() * centered / static_cast<double>(n - 1));
}

Vector AgentForecastDensity::sample(Rng& rng) const {
    if (is_normal()) {
        const auto& n = normal();
        return rng.mvn_chol(n.mean, robust_cholesky(n.cov));
    }
    if (is_student_t()) {
        const auto& t = student_t();
        double w = rng.gamma(0.5 * t.dof, 0.5 * t.dof);
        Matrix L = robust_cholesky(t.scale);
        return t.loc + (L * rng.standard_normal_vector(t.loc.size())) / std::sqrt(w);
    }
    const Matrix& d = empirical().draws;
    return d.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(d.rows()))));
}

double AgentForecastDensity::logpdf(const Vector& x) const {
    if (is_normal()) return mvn_logpdf(x, normal().mean, normal().cov);
    if (is_student_t()) {
        const auto& t = student_t();
        return mvt_logpdf(x, t.dof, t.loc, t.scale);
    }
    Matrix c = cov();
    if (c.cwiseAbs().maxCoeff() == 0.0)
        throw NumericError("empirical density: cannot score a degenerate draw set");
    return mvn_logpdf(x, mean(), c);
}

AgentForecastDensity AgentForecastDensity::moment_fit_student_t(double dof) const {
    if (!(dof > 2.0)) throw std::invalid_argument("moment_fit_student_t: dof must exceed 2");
    StudentTDensity t;
    t.dof = dof;
    t.loc = mean();
    t.scale = symmetrize(cov() * (dof - 2.0) / dof);
    return AgentForecastDensity(t);
}

}  // namespace bps
