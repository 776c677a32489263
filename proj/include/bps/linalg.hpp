#pragma once

#include "bps/types.hpp"

namespace bps {

// (M + M') / 2
Matrix symmetrize(const Matrix& m);

// Cholesky factor of a symmetric matrix under the jitter policy: symmetrize,
// then if the factorization fails add eps*trace/dim to the diagonal with
// eps escalating 1e-10 -> 1e-6 by factors of 10. Throws NumericError when
// even the largest jitter fails.
Matrix robust_cholesky(const Matrix& m);

// Solve A x = b with A symmetric PD via its Cholesky factor.
Matrix chol_solve(const Matrix& chol_lower, const Matrix& b);

double chol_logdet(const Matrix& chol_lower);

// log N(x | mean, cov) with cov passed as its lower Cholesky factor.
double mvn_logpdf_chol(const Vector& x, const Vector& mean, const Matrix& chol_lower);
double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov);

// log T_dof(x | loc, scale) for the multivariate Student-T.
double mvt_logpdf(const Vector& x, double dof, const Vector& loc, const Matrix& scale);

double log_sum_exp(const Vector& logs);

}  // namespace bps
