#include "bps/tvp_var.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bps/discount_volatility.hpp"
#include "bps/dlm_ffbs.hpp"
#include "bps/linalg.hpp"

namespace bps {

LagSpec parse_lag_spec(const std::string& text) {
    LagSpec spec;
    spec.text = text;
    auto parse_int = [&](const std::string& s) {
        int v = 0;
        auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || v <= 0)
            throw ConfigError("bad lag spec '" + text + "'");
        return v;
    };
    auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        int p = parse_int(text);
        for (int l = 1; l <= p; ++l) spec.lags.push_back(l);
        return spec;
    }
    auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("bad lag spec '" + text + "'");
    int a = parse_int(text.substr(0, c1));
    int s = parse_int(text.substr(c1 + 1, c2 - c1 - 1));
    int b = parse_int(text.substr(c2 + 1));
    if (b % s != 0)
        throw ConfigError("bad lag spec '" + text + "': upper bound not a multiple of the step");
    std::set<int> lags{a};
    for (int l = s; l <= b; l += s) lags.insert(l);
    spec.lags.assign(lags.begin(), lags.end());
    return spec;
}

Vector TvpVarState::regressors() const {
    const Eigen::Index qq = q();
    Vector F(p());
    F(0) = 1.0;
    for (std::size_t li = 0; li < lags.lags.size(); ++li) {
        int l = lags.lags[li];
        F.segment(1 + static_cast<Eigen::Index>(li) * qq, qq) =
            recent.row(l - 1).transpose();
    }
    return F;
}

double TvpVarState::coef_sd(Eigen::Index i, Eigen::Index r) const {
    return std::sqrt(C(i, i) * D(r, r) / h);
}

namespace {

Vector build_regressors(const TimeSeriesPanel& data, const LagSpec& spec, Eigen::Index t) {
    const Eigen::Index q = data.cols();
    Vector F(spec.regressor_dim(q));
    F(0) = 1.0;
    for (std::size_t li = 0; li < spec.lags.size(); ++li) {
        int l = spec.lags[li];
        F.segment(1 + static_cast<Eigen::Index>(li) * q, q) =
            data.values.row(t - l).transpose();
    }
    return F;
}

}  // namespace

std::vector<TvpVarState> fit_tvpvar_filter(const TimeSeriesPanel& data, const LagSpec& spec,
                                           const TvpVarPrior& prior) {
    data.validate();
    const Eigen::Index T = data.rows();
    const Eigen::Index q = data.cols();
    const int max_lag = spec.max_lag();
    if (T <= max_lag)
        throw DataError("fit_tvpvar_filter: panel shorter than the maximum lag");
    DiscountConfig{prior.delta, prior.beta}.validate();

    const Eigen::Index p = spec.regressor_dim(q);
    Matrix M = Matrix::Zero(p, q);
    Matrix C = prior.coef_var * Matrix::Identity(p, p);
    double h = prior.n0 + static_cast<double>(q) - 1.0;
    Matrix D = prior.n0 * prior.d0_scale * Matrix::Identity(q, q);

    std::vector<TvpVarState> states;
    states.reserve(static_cast<std::size_t>(T - max_lag));
    for (Eigen::Index t = max_lag; t < T; ++t) {
        Vector F = build_regressors(data, spec, t);
        Vector y = data.values.row(t).transpose();

        Matrix R = symmetrize(C / prior.delta);
        Vector f = M.transpose() * F;
        Vector RF = R * F;
        double qscale = F.dot(RF) + 1.0;
        Vector e = y - f;
        Vector A = RF / qscale;
        M += A * e.transpose();
        C = symmetrize(R - qscale * (A * A.transpose()));
        h = prior.beta * h + 1.0;
        D = symmetrize(prior.beta * D + (e * e.transpose()) / qscale);

        TvpVarState s;
        s.lags = spec;
        s.M = M;
        s.C = C;
        s.h = h;
        s.n = h - static_cast<double>(q) + 1.0;
        s.D = D;
        s.delta = prior.delta;
        s.beta = prior.beta;
        s.month = data.months[static_cast<std::size_t>(t)];
        s.recent = Matrix(max_lag, q);
        for (int l = 0; l < max_lag; ++l) s.recent.row(l) = data.values.row(t - l);
        states.push_back(std::move(s));
    }
    return states;
}

Vector transform_target(const Matrix& path, int k, const std::vector<SeriesRole>& roles) {
    const Eigen::Index q = path.cols();
    if (path.rows() != k + 1)
        throw std::invalid_argument("transform_target: path must hold k+1 rows");
    if (static_cast<Eigen::Index>(roles.size()) != q)
        throw std::invalid_argument("transform_target: role count mismatch");
    if (k == 1) return path.row(k).transpose();
    Vector out(q);
    for (Eigen::Index r = 0; r < q; ++r) {
        switch (roles[static_cast<std::size_t>(r)]) {
            case SeriesRole::change: out(r) = path(k, r) - path(0, r); break;
            case SeriesRole::cumulative: out(r) = path.col(r).tail(k).sum(); break;
            case SeriesRole::level: out(r) = path(k, r); break;
        }
    }
    return out;
}

AgentForecastDensity agent_forecast(const TvpVarState& state, int k,
                                    const std::vector<SeriesRole>& roles, int n_draws, Rng& rng) {
    if (k < 1) throw std::invalid_argument("agent_forecast: horizon must be >= 1");
    const Eigen::Index q = state.q();
    if (k == 1) {
        Vector F = state.regressors();
        Matrix R = state.C / state.delta;
        double qscale = F.dot(R * F) + 1.0;
        Matrix S = state.D / state.h;
        StudentTDensity t;
        t.dof = state.n;
        t.loc = state.M.transpose() * F;
        t.scale = symmetrize(qscale * S);
        return AgentForecastDensity(t);
    }
    if (n_draws < 1) throw std::invalid_argument("agent_forecast: need n_draws >= 1");

    Matrix Lc = robust_cholesky(state.C);
    Matrix Dinv = chol_solve(robust_cholesky(state.D), Matrix::Identity(q, q));
    Matrix Ld_inv = robust_cholesky(symmetrize(Dinv));
    const double w_scale = (state.delta < 1.0) ? std::sqrt((1.0 - state.delta) / state.delta) : 0.0;
    const double upsilon_dof = (1.0 - state.beta) * state.h;

    Matrix draws(n_draws, q);
    for (int d = 0; d < n_draws; ++d) {
        Matrix V = sample_inverse_wishart(state.n, state.D, rng);
        Matrix Lv = robust_cholesky(V);
        Matrix theta = state.M + Lc * rng.standard_normal_matrix(state.p(), q) * Lv.transpose();

        Matrix path(k + 1, q);
        path.row(0) = state.recent.row(0);

        for (int s = 1; s <= k; ++s) {
            if (state.beta < 1.0) {
                Matrix prec = state.beta * chol_solve(Lv, Matrix::Identity(q, q));
                const auto ki = static_cast<Eigen::Index>(std::floor(upsilon_dof));
                const double frac = upsilon_dof - static_cast<double>(ki);
                for (Eigen::Index r = 0; r < ki; ++r) {
                    Vector z = Ld_inv * rng.standard_normal_vector(q);
                    prec += z * z.transpose();
                }
                if (frac > 0.0) {
                    Vector z = Ld_inv * rng.standard_normal_vector(q);
                    prec += frac * (z * z.transpose());
                }
                V = symmetrize(chol_solve(robust_cholesky(symmetrize(prec)),
                                          Matrix::Identity(q, q)));
                Lv = robust_cholesky(V);
            }
            if (w_scale > 0.0)
                theta += w_scale * (Lc * rng.standard_normal_matrix(state.p(), q) * Lv.transpose());

            Vector F(state.p());
            F(0) = 1.0;
            for (std::size_t li = 0; li < state.lags.lags.size(); ++li) {
                int l = state.lags.lags[li];
                // value at month + s - l: observed if l >= s, simulated otherwise
                Vector lagged = (l >= s) ? Vector(state.recent.row(l - s).transpose())
                                         : Vector(path.row(s - l).transpose());
                F.segment(1 + static_cast<Eigen::Index>(li) * q, q) = lagged;
            }
            Vector y = theta.transpose() * F + Lv * rng.standard_normal_vector(q);
            path.row(s) = y.transpose();
        }
        draws.row(d) = transform_target(path, k, roles).transpose();
    }
    return AgentForecastDensity(EmpiricalDensity{std::move(draws)});
}

void ForecastArchive::put(int origin, int horizon, int agent, AgentForecastDensity density) {
    Key key{origin, horizon, agent};
    if (entries_.count(key))
        throw DataError("forecast archive: duplicate forecast for origin " +
                        format_month(origin) + " horizon " + std::to_string(horizon) +
                        " agent " + std::to_string(agent));
    entries_.emplace(key, std::move(density));
}

const AgentForecastDensity* ForecastArchive::find(int origin, int horizon, int agent) const {
    auto it = entries_.find(Key{origin, horizon, agent});
    return it == entries_.end() ? nullptr : &it->second;
}

int ForecastArchive::n_agents() const {
    int n = 0;
    for (const auto& [key, d] : entries_) n = std::max(n, std::get<2>(key));
    return n;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (...) {
        throw DataError("archive: bad numeric value '" + s + "'");
    }
}

}  // namespace

void ForecastArchive::save(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    // collect (agent, horizon) groups
    std::set<std::pair<int, int>> groups;
    for (const auto& [key, d] : entries_)
        groups.insert({std::get<2>(key), std::get<1>(key)});
    for (auto [agent, horizon] : groups) {
        std::ofstream out(fs::path(dir) /
                          ("agent" + std::to_string(agent) + "_k" + std::to_string(horizon) + ".csv"));
        out << "origin_date,target_date,series,type,param_name,value\n";
        for (const auto& [key, d] : entries_) {
            if (std::get<2>(key) != agent || std::get<1>(key) != horizon) continue;
            const int origin = std::get<0>(key);
            std::string prefix = format_month(origin) + "," + format_month(origin + horizon) + ",";
            auto row = [&](const std::string& series, const std::string& type,
                           const std::string& param, double value) {
                out << prefix << series << ',' << type << ',' << param << ',' << fmt(value) << '\n';
            };
            if (d.is_normal()) {
                const auto& nd = d.normal();
                for (Eigen::Index r = 0; r < nd.mean.size(); ++r)
                    row(series_names_[static_cast<std::size_t>(r)], "normal", "mean", nd.mean(r));
                for (Eigen::Index r = 0; r < nd.mean.size(); ++r)
                    for (Eigen::Index c = 0; c < nd.mean.size(); ++c)
                        row(series_names_[static_cast<std::size_t>(r)], "normal",
                            "cov:" + series_names_[static_cast<std::size_t>(c)], nd.cov(r, c));
            } else if (d.is_student_t()) {
                const auto& td = d.student_t();
                row(".", "student_t", "dof", td.dof);
                for (Eigen::Index r = 0; r < td.loc.size(); ++r)
                    row(series_names_[static_cast<std::size_t>(r)], "student_t", "loc", td.loc(r));
                for (Eigen::Index r = 0; r < td.loc.size(); ++r)
                    for (Eigen::Index c = 0; c < td.loc.size(); ++c)
                        row(series_names_[static_cast<std::size_t>(r)], "student_t",
                            "scale:" + series_names_[static_cast<std::size_t>(c)], td.scale(r, c));
            } else {
                const auto& ed = d.empirical();
                for (Eigen::Index i = 0; i < ed.draws.rows(); ++i)
                    for (Eigen::Index r = 0; r < ed.draws.cols(); ++r)
                        row(series_names_[static_cast<std::size_t>(r)], "empirical",
                            "draw:" + std::to_string(i), ed.draws(i, r));
            }
        }
    }
    // series name manifest, needed to reload
    std::ofstream names(fs::path(dir) / "series.txt");
    for (const auto& n : series_names_) names << n << '\n';
}

ForecastArchive ForecastArchive::load(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> names;
    {
        std::ifstream in(fs::path(dir) / "series.txt");
        if (!in) throw DataError("archive: missing series manifest in '" + dir + "'");
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) names.push_back(line);
    }
    ForecastArchive archive(names);
    const auto q = static_cast<Eigen::Index>(names.size());
    auto series_index = [&](const std::string& s) -> Eigen::Index {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == s) return static_cast<Eigen::Index>(i);
        throw DataError("archive: unknown series '" + s + "'");
    };

    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string fname = entry.path().filename().string();
        if (fname.rfind("agent", 0) != 0 || entry.path().extension() != ".csv") continue;
        auto kpos = fname.find("_k");
        int agent = std::stoi(fname.substr(5, kpos - 5));
        int horizon = std::stoi(fname.substr(kpos + 2, fname.size() - kpos - 6));

        std::ifstream in(entry.path());
        std::string line;
        std::getline(in, line);  // header

        struct Accum {
            std::string type;
            double dof = 0.0;
            Vector mean;
            Matrix cov;
            std::map<int, Vector> draws;
        };
        std::map<int, Accum> per_origin;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string origin_s, target_s, series, type, param, value_s;
            std::getline(ss, origin_s, ',');
            std::getline(ss, target_s, ',');
            std::getline(ss, series, ',');
            std::getline(ss, type, ',');
            std::getline(ss, param, ',');
            std::getline(ss, value_s, ',');
            int origin = parse_month(origin_s);
            auto& acc = per_origin[origin];
            if (acc.type.empty()) {
                acc.type = type;
                acc.mean = Vector::Zero(q);
                acc.cov = Matrix::Zero(q, q);
            }
            double value = parse_double(value_s);
            if (param == "dof") {
                acc.dof = value;
            } else if (param == "mean" || param == "loc") {
                acc.mean(series_index(series)) = value;
            } else if (param.rfind("cov:", 0) == 0 || param.rfind("scale:", 0) == 0) {
                auto colname = param.substr(param.find(':') + 1);
                acc.cov(series_index(series), series_index(colname)) = value;
            } else if (param.rfind("draw:", 0) == 0) {
                int i = std::stoi(param.substr(5));
                auto& d = acc.draws[i];
                if (d.size() == 0) d = Vector::Zero(q);
                d(series_index(series)) = value;
            } else {
                throw DataError("archive: unknown param '" + param + "'");
            }
        }
        for (auto& [origin, acc] : per_origin) {
            if (acc.type == "normal") {
                archive.put(origin, horizon, agent,
                            AgentForecastDensity(NormalDensity{acc.mean, acc.cov}));
            } else if (acc.type == "student_t") {
                archive.put(origin, horizon, agent,
                            AgentForecastDensity(StudentTDensity{acc.dof, acc.mean, acc.cov}));
            } else if (acc.type == "empirical") {
                Matrix draws(static_cast<Eigen::Index>(acc.draws.size()), q);
                Eigen::Index i = 0;
                for (const auto& [idx, v] : acc.draws) draws.row(i++) = v.transpose();
                archive.put(origin, horizon, agent,
                            AgentForecastDensity(EmpiricalDensity{std::move(draws)}));
            } else {
                throw DataError("archive: unknown density type '" + acc.type + "'");
            }
        }
    }
    return archive;
}

}  // namespace bps
