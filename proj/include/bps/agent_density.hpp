#pragma once

#include <variant>
#include <vector>

#include "bps/rng.hpp"
#include "bps/types.hpp"

namespace bps {

struct NormalDensity {
    Vector mean;
    Matrix cov;
};

struct StudentTDensity {
    double dof = 0.0;
    Vector loc;
    Matrix scale;
};

struct EmpiricalDensity {
    Matrix draws;  // I x q, one candidate per row
};

// One agent's forecast density for one origin/horizon.
class AgentForecastDensity {
public:
    using Form = std::variant<NormalDensity, StudentTDensity, EmpiricalDensity>;

    AgentForecastDensity() = default;
    explicit AgentForecastDensity(Form form);

    const Form& form() const { return form_; }
    bool is_normal() const { return std::holds_alternative<NormalDensity>(form_); }
    bool is_student_t() const { return std::holds_alternative<StudentTDensity>(form_); }
    bool is_empirical() const { return std::holds_alternative<EmpiricalDensity>(form_); }

    const NormalDensity& normal() const { return std::get<NormalDensity>(form_); }
    const StudentTDensity& student_t() const { return std::get<StudentTDensity>(form_); }
    const EmpiricalDensity& empirical() const { return std::get<EmpiricalDensity>(form_); }

    Eigen::Index dim() const;
    Vector mean() const;
    Matrix cov() const;

    Vector sample(Rng& rng) const;

    // Normal/Student-T: exact. Empirical: Gaussian moment fit to the stored
    // draws (used for scoring only, flagged as an approximation upstream).
    double logpdf(const Vector& x) const;

    // Moment-fit Student-T (given dof) or Normal view of an empirical density.
    AgentForecastDensity moment_fit_student_t(double dof) const;

private:
    Form form_;
};

}  // namespace bps
