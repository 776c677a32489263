#include "bps/panel.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bps {

int parse_month(const std::string& text) {
    if (text.size() != 7 || text[4] != '-')
        throw DataError("bad month '" + text + "', expected YYYY-MM");
    int year = 0, month = 0;
    auto r1 = std::from_chars(text.data(), text.data() + 4, year);
    auto r2 = std::from_chars(text.data() + 5, text.data() + 7, month);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || month < 1 || month > 12)
        throw DataError("bad month '" + text + "', expected YYYY-MM");
    return year * 12 + (month - 1);
}

std::string format_month(int encoded) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04d-%02d", encoded / 12, encoded % 12 + 1);
    return buf;
}

SeriesRole parse_series_role(const std::string& text) {
    if (text == "change") return SeriesRole::change;
    if (text == "cumulative") return SeriesRole::cumulative;
    if (text == "level") return SeriesRole::level;
    throw ConfigError("unknown series role '" + text + "'");
}

std::string series_role_name(SeriesRole role) {
    switch (role) {
        case SeriesRole::change: return "change";
        case SeriesRole::cumulative: return "cumulative";
        case SeriesRole::level: return "level";
    }
    return "change";
}

Eigen::Index TimeSeriesPanel::index_of(int month) const {
    if (months.empty() || month < months.front() || month > months.back()) return -1;
    return static_cast<Eigen::Index>(month - months.front());
}

void TimeSeriesPanel::validate() const {
    if (names.empty()) throw DataError("panel: no series");
    if (values.cols() != static_cast<Eigen::Index>(names.size()))
        throw DataError("panel: name/value column mismatch");
    if (values.rows() != static_cast<Eigen::Index>(months.size()))
        throw DataError("panel: date/value row mismatch");
    if (!roles.empty() && roles.size() != names.size())
        throw DataError("panel: role/series mismatch");
    for (std::size_t t = 1; t < months.size(); ++t) {
        if (months[t] == months[t - 1])
            throw DataError("panel: duplicate date " + format_month(months[t]));
        if (months[t] != months[t - 1] + 1)
            throw DataError("panel: gap in dates after " + format_month(months[t - 1]) +
                            " (missing " + format_month(months[t - 1] + 1) + ")");
    }
    if (!values.allFinite()) throw DataError("panel: non-finite value");
}

TimeSeriesPanel TimeSeriesPanel::slice(Eigen::Index first, Eigen::Index count) const {
    if (first < 0 || count < 1 || first + count > rows())
        throw DataError("panel: slice out of range");
    TimeSeriesPanel out;
    out.names = names;
    out.roles = roles;
    out.months.assign(months.begin() + first, months.begin() + first + count);
    out.values = values.middleRows(first, count);
    return out;
}

TimeSeriesPanel load_panel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open panel file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("panel file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    TimeSeriesPanel panel;
    {
        std::stringstream header(line);
        std::string cell;
        if (!std::getline(header, cell, ',') || cell != "date")
            throw DataError("panel header must start with 'date'");
        while (std::getline(header, cell, ',')) panel.names.push_back(cell);
    }
    if (panel.names.empty()) throw DataError("panel has no series columns");

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        panel.months.push_back(parse_month(cell));
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                throw DataError("panel line " + std::to_string(lineno) + ": non-numeric cell '" +
                                cell + "'");
            row.push_back(v);
        }
        if (row.size() != panel.names.size())
            throw DataError("panel line " + std::to_string(lineno) + ": wrong column count");
        rows.push_back(std::move(row));
    }
    panel.values = Matrix(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(panel.names.size()));
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t r = 0; r < rows[t].size(); ++r)
            panel.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(r)) = rows[t][r];
    panel.roles.assign(panel.names.size(), SeriesRole::change);
    panel.validate();
    return panel;
}

void save_panel(const TimeSeriesPanel& panel, const std::string& path) {
    panel.validate();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write panel file '" + path + "'");
    out << "date";
    for (const auto& n : panel.names) out << ',' << n;
    out << '\n';
    char buf[40];
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out << format_month(panel.months[static_cast<std::size_t>(t)]);
        for (Eigen::Index r = 0; r < panel.cols(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", panel.values(t, r));
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace bps
