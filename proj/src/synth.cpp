#include "bps/synth.hpp"

#include <cmath>

#include "bps/rng.hpp"

namespace bps {

void SynthSpec::validate() const {
    if (q < 1) throw ConfigError("synth: need q >= 1");
    if (T < 2) throw ConfigError("synth: need T >= 2");
    if (noise_sd < 0.0 || coef_drift_sd < 0.0)
        throw ConfigError("synth: standard deviations must be nonnegative");
    if (noise_dof != 0.0 && noise_dof <= 2.0)
        throw ConfigError("synth: noise_dof must exceed 2 (or 0 for Gaussian)");
    if (sv_sd < 0.0 || std::abs(sv_phi) >= 1.0)
        throw ConfigError("synth: need sv_sd >= 0 and |sv_phi| < 1");
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != q)
        throw ConfigError("synth: series name count mismatch");
    Matrix A = Matrix::Constant(q, q, cross);
    A.diagonal().setConstant(ar);
    double rho = A.eigenvalues().cwiseAbs().maxCoeff();
    if (rho >= 1.0)
        throw ConfigError("synth: explosive DGP, spectral radius " + std::to_string(rho) +
                          " >= 1");
}

TimeSeriesPanel synth_generate(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    const Eigen::Index q = spec.q;
    Rng rng(seed);

    Matrix A = Matrix::Constant(q, q, spec.cross);
    A.diagonal().setConstant(spec.ar);

    TimeSeriesPanel panel;
    panel.names = spec.names;
    if (panel.names.empty())
        for (Eigen::Index r = 0; r < q; ++r) panel.names.push_back("s" + std::to_string(r + 1));
    panel.roles.assign(static_cast<std::size_t>(q), SeriesRole::change);
    panel.months.resize(static_cast<std::size_t>(spec.T));
    for (int t = 0; t < spec.T; ++t) panel.months[static_cast<std::size_t>(t)] = spec.start_month + t;

    panel.values = Matrix(spec.T, q);
    Vector y = Vector::Zero(q);
    double logvol = 0.0;
    for (int t = 0; t < spec.T; ++t) {
        Vector next = Vector::Constant(q, spec.intercept) + A * y;
        if (spec.noise_sd > 0.0) {
            Vector eps = rng.standard_normal_vector(q);
            if (spec.noise_dof > 2.0) {
                // unit-variance Student-T scale mixture
                double w = std::sqrt((spec.noise_dof - 2.0) / rng.chi_square(spec.noise_dof));
                eps *= w;
            }
            if (spec.sv_sd > 0.0) {
                logvol = spec.sv_phi * logvol + spec.sv_sd * rng.normal();
                eps *= std::exp(logvol);
            }
            next += spec.noise_sd * eps;
        }
        if (!next.allFinite() || next.cwiseAbs().maxCoeff() > 1e9)
            throw NumericError("synth: simulated path exploded at step " + std::to_string(t));
        panel.values.row(t) = next.transpose();
        y = next;
        if (spec.coef_drift_sd > 0.0)
            A += spec.coef_drift_sd * rng.standard_normal_matrix(q, q);
    }
    panel.validate();
    return panel;
}

}  // namespace bps
