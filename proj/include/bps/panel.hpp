#pragma once

#include <string>
#include <vector>

#include "bps/types.hpp"

namespace bps {

// Months are encoded as year*12 + (month-1) so that consecutive months are
// consecutive integers.
int parse_month(const std::string& text);          // "YYYY-MM"
std::string format_month(int encoded);

enum class SeriesRole { change, cumulative, level };

SeriesRole parse_series_role(const std::string& text);
std::string series_role_name(SeriesRole role);

struct TimeSeriesPanel {
    std::vector<std::string> names;   // q series names
    std::vector<int> months;          // T encoded months, strictly consecutive
    Matrix values;                    // T x q
    std::vector<SeriesRole> roles;    // q, defaults to change

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    // index of an encoded month, or -1
    Eigen::Index index_of(int month) const;

    void validate() const;
    TimeSeriesPanel slice(Eigen::Index first, Eigen::Index count) const;
};

TimeSeriesPanel load_panel(const std::string& path);
void save_panel(const TimeSeriesPanel& panel, const std::string& path);

}  // namespace bps
