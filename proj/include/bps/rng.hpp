#pragma once

#include <cstdint>
#include <random>

#include "bps/types.hpp"

namespace bps {

// Seeded random source. A master Rng derives independent child streams via
// derive(), so parallel per-origin work stays reproducible regardless of
// scheduling order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    // Child stream keyed by (master seed, stream id); does not touch this
    // engine's state.
    Rng derive(std::uint64_t stream) const;
    std::uint64_t derive_seed(std::uint64_t stream) const;

    double uniform() { return unif_(engine_); }
    double normal() { return normal_(engine_); }
    // shape/rate parametrization
    double gamma(double shape, double rate);
    double chi_square(double dof) { return gamma(0.5 * dof, 0.5); }
    std::size_t uniform_index(std::size_t n);

    Vector standard_normal_vector(Eigen::Index n);
    Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols);

    // N(mean, L L') given the lower Cholesky factor L.
    Vector mvn_chol(const Vector& mean, const Matrix& chol_lower);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bps
