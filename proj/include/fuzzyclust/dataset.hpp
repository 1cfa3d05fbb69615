#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "fuzzyclust/errors.hpp"

namespace fuzzyclust {

inline constexpr double kScoreMin = 0.0;
inline constexpr double kScoreMax = 100.0;

/// One table row: a 1-based object number, the numeric score fields and
/// every remaining column kept verbatim as a string.
struct Record {
    int index = 0;
    std::map<std::string, double> scores;
    std::map<std::string, std::string> categorical;
};

struct Dataset {
    std::vector<Record> records;
    std::vector<std::string> score_columns;        // in declaration order
    std::vector<std::string> categorical_columns;  // in file order

    int q() const { return static_cast<int>(records.size()); }
    int d() const { return static_cast<int>(score_columns.size()); }
};

enum class ScaledAxis { none, x, y };

/// What scale_features did (or did not) do to a feature pair.
struct ScalingReport {
    bool applied = false;
    ScaledAxis axis = ScaledAxis::none;
    double factor = 1.0;
    double original_range_x = 0.0;  // max - min before any scaling
    double original_range_y = 0.0;
};

/// The selected (x, y) feature pair the clustering runs on.
struct FeatureView {
    std::vector<double> x;
    std::vector<double> y;
    std::string x_name;
    std::string y_name;
    ScalingReport scaling;

    int q() const { return static_cast<int>(x.size()); }
};

namespace detail {

// One CSV line split into fields. Comma separated, optional double quotes,
// "" inside a quoted field is a literal quote. No embedded newlines.
inline std::vector<std::string> split_csv_line(const std::string& line, int row_number) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) {
        throw ParseError("row " + std::to_string(row_number) + ": unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return fields;
}

inline double parse_score_cell(const std::string& cell, const std::string& column, int row_number) {
    const auto fail = [&](const char* why) -> ParseError {
        return ParseError("row " + std::to_string(row_number) + ": " + why + " in column \"" +
                          column + "\" (value \"" + cell + "\")");
    };
    std::size_t begin = cell.find_first_not_of(" \t");
    if (begin == std::string::npos) throw fail("missing score value");
    std::size_t end = cell.find_last_not_of(" \t") + 1;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data() + begin, cell.data() + end, value);
    if (ec != std::errc() || ptr != cell.data() + end) throw fail("unparseable numeric value");
    if (!std::isfinite(value)) throw fail("non-finite score");
    if (value < kScoreMin || value > kScoreMax) throw fail("score outside [0, 100]");
    return value;
}

inline double column_range(const std::vector<double>& values) {
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

}  // namespace detail

/// Reads a headered CSV file. Columns named in score_columns are parsed as
/// numbers in [0, 100]; every other column is stored as a categorical string.
inline Dataset load_csv(const std::string& path, const std::vector<std::string>& score_columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyInputError("empty input file: " + path);
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = detail::split_csv_line(line, 1);
    std::vector<int> score_pos(score_columns.size(), -1);
    for (std::size_t s = 0; s < score_columns.size(); ++s) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == score_columns[s]) {
                score_pos[s] = static_cast<int>(c);
                break;
            }
        }
        if (score_pos[s] < 0) throw SchemaError("missing column \"" + score_columns[s] + "\" in " + path);
    }

    Dataset d;
    d.score_columns = score_columns;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (std::find(score_pos.begin(), score_pos.end(), static_cast<int>(c)) == score_pos.end()) {
            d.categorical_columns.push_back(header[c]);
        }
    }

    int row_number = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = detail::split_csv_line(line, row_number);
        if (fields.size() != header.size()) {
            throw ParseError("row " + std::to_string(row_number) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        Record r;
        r.index = d.q() + 1;
        for (std::size_t s = 0; s < score_columns.size(); ++s) {
            r.scores[score_columns[s]] =
                detail::parse_score_cell(fields[score_pos[s]], score_columns[s], row_number);
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (std::find(score_pos.begin(), score_pos.end(), static_cast<int>(c)) == score_pos.end()) {
                r.categorical[header[c]] = fields[c];
            }
        }
        d.records.push_back(std::move(r));
    }
    if (d.records.empty()) throw EmptyInputError("no data rows in " + path);
    return d;
}

/// Copies two score columns out of the dataset as the clustering plane.
inline FeatureView select_features(const Dataset& d, const std::string& x_name,
                                   const std::string& y_name) {
    if (x_name == y_name) throw ArgumentError("x and y must name different columns: \"" + x_name + "\"");
    for (const auto* name : {&x_name, &y_name}) {
        if (std::find(d.score_columns.begin(), d.score_columns.end(), *name) == d.score_columns.end()) {
            throw SchemaError("unknown score column \"" + *name + "\"");
        }
    }
    FeatureView v;
    v.x_name = x_name;
    v.y_name = y_name;
    v.x.reserve(d.records.size());
    v.y.reserve(d.records.size());
    for (const Record& r : d.records) {
        v.x.push_back(r.scores.at(x_name));
        v.y.push_back(r.scores.at(y_name));
    }
    v.scaling.original_range_x = detail::column_range(v.x);
    v.scaling.original_range_y = detail::column_range(v.y);
    return v;
}

/// Equalizes the two value ranges when they differ by more than an order of
/// magnitude, multiplying the smaller-range axis by the range ratio. A
/// constant column counts as range 1 for the ratio test; if the smaller axis
/// is constant the view is returned unchanged (no factor can widen it).
inline FeatureView scale_features(const FeatureView& v) {
    if (v.x.empty()) throw ArgumentError("cannot scale an empty feature view");
    const double range_x = detail::column_range(v.x);
    const double range_y = detail::column_range(v.y);
    const double eff_x = range_x == 0.0 ? 1.0 : range_x;
    const double eff_y = range_y == 0.0 ? 1.0 : range_y;
    const double ratio = std::max(eff_x, eff_y) / std::min(eff_x, eff_y);
    if (ratio <= 10.0) return v;

    const bool scale_x = eff_x < eff_y;
    if ((scale_x ? range_x : range_y) == 0.0) return v;

    FeatureView out = v;
    const double factor = ratio;
    auto& axis = scale_x ? out.x : out.y;
    for (double& value : axis) value *= factor;
    out.scaling.applied = true;
    out.scaling.axis = scale_x ? ScaledAxis::x : ScaledAxis::y;
    out.scaling.factor = factor;
    out.scaling.original_range_x = range_x;
    out.scaling.original_range_y = range_y;
    return out;
}

}  // namespace fuzzyclust
