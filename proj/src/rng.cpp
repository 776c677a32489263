#include "bps/rng.hpp"

namespace bps {

namespace {

// splitmix64 finalizer, used to mix (seed, stream) into a child seed.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng Rng::derive(std::uint64_t stream) const { return Rng(derive_seed(stream)); }

std::uint64_t Rng::derive_seed(std::uint64_t stream) const {
    return mix(seed_ ^ mix(stream + 1));
}

double Rng::gamma(double shape, double rate) {
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(engine_);
}

std::size_t Rng::uniform_index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

Vector Rng::standard_normal_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
}

Matrix Rng::standard_normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
}

Vector Rng::mvn_chol(const Vector& mean, const Matrix& chol_lower) {
    return mean + chol_lower * standard_normal_vector(mean.size());
}

}  // namespace bps
