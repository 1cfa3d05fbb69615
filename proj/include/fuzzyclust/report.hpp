#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fuzzyclust/dataset.hpp"
#include "fuzzyclust/errors.hpp"
#include "fuzzyclust/fuzzy.hpp"
#include "fuzzyclust/kmeans.hpp"

namespace fuzzyclust {

namespace detail {

// All exported floats go through this: 6 significant digits, "-0" collapsed,
// so identical inputs serialize byte-identically everywhere.
inline std::string fmt6(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline double round6(double v) { return std::strtod(fmt6(v).c_str(), nullptr); }

}  // namespace detail

/// User-facing description of one cluster. Centroids are in original data
/// units (scaling undone); radii stay in the clustering space where the
/// membership functions live.
struct ClusterSummary {
    int cluster_number = 0;  // 1-based
    std::string label;
    Point centroid;
    int count = 0;
    ClusterRadiiEntry radii;
};

struct DifficultyRecommendation {
    int object_number = 0;
    int primary_level = 0;                  // 1-based cluster number of max mu_xy
    std::vector<int> supplementary_levels;  // mu_xy >= theta, by mu_xy descending
    double theta = 0.5;
};

/// Semantic cluster labels in canonical centroid order. The four-cluster case
/// uses the score-band names; any other count falls back to neutral names.
inline std::vector<std::string> label_clusters(const ClusterModel& m) {
    const int k = m.cluster_count();
    if (k == 4) return {"low", "below average", "average", "high"};
    std::vector<std::string> labels;
    labels.reserve(k);
    for (int i = 1; i <= k; ++i) labels.push_back("level " + std::to_string(i));
    return labels;
}

/// Task difficulty from a membership profile: the best-matching cluster is
/// the primary level, every other cluster at or above theta is supplementary.
inline DifficultyRecommendation recommend_difficulty(const MembershipProfile& p,
                                                     double theta = 0.5) {
    if (p.clusters.empty()) throw ArgumentError("membership profile is empty");
    if (theta < 0.0 || theta > 1.0) throw ArgumentError("theta must lie in [0, 1]");
    DifficultyRecommendation rec;
    rec.object_number = p.object_number;
    rec.theta = theta;
    int primary = 0;
    for (int k = 1; k < p.cluster_count(); ++k) {
        if (p.clusters[k].mu_xy > p.clusters[primary].mu_xy) primary = k;
    }
    rec.primary_level = primary + 1;
    std::vector<int> supplementary;
    for (int k = 0; k < p.cluster_count(); ++k) {
        if (k != primary && p.clusters[k].mu_xy >= theta) supplementary.push_back(k);
    }
    std::stable_sort(supplementary.begin(), supplementary.end(), [&](int a, int b) {
        return p.clusters[a].mu_xy > p.clusters[b].mu_xy;
    });
    for (int k : supplementary) rec.supplementary_levels.push_back(k + 1);
    return rec;
}

/// One CSV row: every object with its assignment, combined memberships and
/// recommendation.
struct ObjectRow {
    int object_number = 0;
    double x = 0.0;  // original units
    double y = 0.0;
    int assigned_cluster = 0;  // 0-based
    std::vector<double> mu_xy;
    int recommended_level = 0;
    std::vector<int> supplementary_levels;
};

struct RunReport {
    // config echo
    std::string input_path;
    std::string x_column;
    std::string y_column;
    int k = 0;
    std::optional<SweepResult> sweep;
    double k_r = 1.5;
    double theta = 0.5;
    std::uint64_t seed = 0;
    ScalingReport scaling;
    // results
    std::vector<ClusterSummary> clusters;
    QualityMetrics quality;
    std::vector<MembershipProfile> profiles;  // queried objects only
    std::vector<DifficultyRecommendation> recommendations;
    std::vector<ObjectRow> rows;  // every object
};

/// Assembles the full report. original_view holds the unscaled feature pair;
/// view is the (possibly scaled) space the model was fitted in.
inline RunReport build_run_report(const FeatureView& original_view, const FeatureView& view,
                                  const ClusterModel& model, const ClusterRadii& radii,
                                  const FuzzyConfig& fuzzy_cfg, double theta,
                                  const std::vector<int>& queried_objects) {
    RunReport r;
    r.x_column = view.x_name;
    r.y_column = view.y_name;
    r.k = model.cluster_count();
    r.k_r = fuzzy_cfg.k_r;
    r.theta = theta;
    r.scaling = view.scaling;
    r.quality = model.quality;

    const std::vector<std::string> labels = label_clusters(model);
    r.clusters.resize(model.cluster_count());
    for (int k = 0; k < model.cluster_count(); ++k) {
        ClusterSummary& s = r.clusters[k];
        s.cluster_number = k + 1;
        s.label = labels[k];
        s.count = model.counts[k];
        s.radii = radii.clusters[k];
    }
    // centroids in original units: means of the unscaled coordinates
    for (int i = 0; i < original_view.q(); ++i) {
        ClusterSummary& s = r.clusters[model.assignments[i]];
        s.centroid.x += original_view.x[i];
        s.centroid.y += original_view.y[i];
    }
    for (ClusterSummary& s : r.clusters) {
        s.centroid.x /= s.count;
        s.centroid.y /= s.count;
    }

    for (int i = 1; i <= view.q(); ++i) {
        const MembershipProfile p = evaluate_membership(i, view, model, radii, fuzzy_cfg);
        const DifficultyRecommendation rec = recommend_difficulty(p, theta);
        ObjectRow row;
        row.object_number = i;
        row.x = original_view.x[i - 1];
        row.y = original_view.y[i - 1];
        row.assigned_cluster = p.assigned_cluster;
        for (const auto& e : p.clusters) row.mu_xy.push_back(e.mu_xy);
        row.recommended_level = rec.primary_level;
        row.supplementary_levels = rec.supplementary_levels;
        r.rows.push_back(std::move(row));
    }
    for (int q : queried_objects) {
        const MembershipProfile p = evaluate_membership(q, view, model, radii, fuzzy_cfg);
        r.recommendations.push_back(recommend_difficulty(p, theta));
        r.profiles.push_back(p);
    }
    return r;
}

namespace detail {

inline nlohmann::ordered_json quality_json(const QualityMetrics& q) {
    nlohmann::ordered_json j;
    j["f0"] = round6(q.intra_f0);
    if (q.inter_f1) j["f1"] = round6(*q.inter_f1); else j["f1"] = nullptr;
    if (q.ratio) j["ratio"] = round6(*q.ratio); else j["ratio"] = nullptr;
    return j;
}

}  // namespace detail

inline std::string report_to_json(const RunReport& r) {
    using json = nlohmann::ordered_json;
    json root;

    json config;
    config["input"] = r.input_path;
    config["x_column"] = r.x_column;
    config["y_column"] = r.y_column;
    config["k"] = r.k;
    if (r.sweep) {
        json sweep;
        sweep["from"] = r.sweep->entries.front().k;
        sweep["to"] = r.sweep->entries.back().k;
        sweep["selected"] = r.sweep->selected_k;
        json entries = json::array();
        for (const SweepEntry& e : r.sweep->entries) {
            json entry;
            entry["k"] = e.k;
            entry["quality"] = detail::quality_json(e.quality);
            entries.push_back(entry);
        }
        sweep["entries"] = entries;
        config["sweep"] = sweep;
    } else {
        config["sweep"] = nullptr;
    }
    config["k_r"] = detail::round6(r.k_r);
    config["theta"] = detail::round6(r.theta);
    config["seed"] = r.seed;
    json scaling;
    scaling["applied"] = r.scaling.applied;
    scaling["axis"] = r.scaling.axis == ScaledAxis::none ? "none"
                      : r.scaling.axis == ScaledAxis::x ? "x"
                                                        : "y";
    scaling["factor"] = detail::round6(r.scaling.factor);
    scaling["original_range_x"] = detail::round6(r.scaling.original_range_x);
    scaling["original_range_y"] = detail::round6(r.scaling.original_range_y);
    config["scaling"] = scaling;
    root["config"] = config;

    root["quality"] = detail::quality_json(r.quality);

    json clusters = json::array();
    for (const ClusterSummary& s : r.clusters) {
        json c;
        c["cluster"] = s.cluster_number;
        c["label"] = s.label;
        c["centroid"]["x"] = detail::round6(s.centroid.x);
        c["centroid"]["y"] = detail::round6(s.centroid.y);
        c["count"] = s.count;
        c["radii"]["r_c"] = detail::round6(s.radii.r_c);
        c["radii"]["r_x_left"] = detail::round6(s.radii.r_x_left);
        c["radii"]["r_x_right"] = detail::round6(s.radii.r_x_right);
        c["radii"]["r_y_down"] = detail::round6(s.radii.r_y_down);
        c["radii"]["r_y_up"] = detail::round6(s.radii.r_y_up);
        clusters.push_back(c);
    }
    root["clusters"] = clusters;

    json profiles = json::array();
    for (const MembershipProfile& p : r.profiles) {
        json entry;
        entry["object"] = p.object_number;
        entry["x"] = detail::round6(r.rows[p.object_number - 1].x);
        entry["y"] = detail::round6(r.rows[p.object_number - 1].y);
        entry["assigned_cluster"] = p.assigned_cluster + 1;
        json memberships = json::array();
        for (int k = 0; k < p.cluster_count(); ++k) {
            json m;
            m["cluster"] = k + 1;
            m["mu_rho"] = detail::round6(p.clusters[k].mu_rho);
            m["mu_x"] = detail::round6(p.clusters[k].mu_x);
            m["mu_y"] = detail::round6(p.clusters[k].mu_y);
            m["mu_xy"] = detail::round6(p.clusters[k].mu_xy);
            memberships.push_back(m);
        }
        entry["memberships"] = memberships;
        profiles.push_back(entry);
    }
    root["profiles"] = profiles;

    json recommendations = json::array();
    for (const DifficultyRecommendation& rec : r.recommendations) {
        json entry;
        entry["object"] = rec.object_number;
        entry["primary_level"] = rec.primary_level;
        entry["supplementary_levels"] = rec.supplementary_levels;
        entry["theta"] = detail::round6(rec.theta);
        recommendations.push_back(entry);
    }
    root["recommendations"] = recommendations;

    json provenance;
    provenance["tool"] = "fuzzyclust";
    provenance["seed"] = r.seed;
    root["provenance"] = provenance;

    return root.dump(2) + "\n";
}

inline std::string report_to_csv(const RunReport& r) {
    std::ostringstream out;
    out << "index,x,y,cluster";
    for (int k = 1; k <= r.k; ++k) out << ",mu_xy_" << k;
    out << ",recommended_level,supplementary_levels\n";
    for (const ObjectRow& row : r.rows) {
        out << row.object_number << ',' << detail::fmt6(row.x) << ',' << detail::fmt6(row.y)
            << ',' << row.assigned_cluster + 1;
        for (double mu : row.mu_xy) out << ',' << detail::fmt6(mu);
        out << ',' << row.recommended_level << ',';
        for (std::size_t i = 0; i < row.supplementary_levels.size(); ++i) {
            if (i) out << ';';
            out << row.supplementary_levels[i];
        }
        out << '\n';
    }
    return out.str();
}

enum class ReportFormat { json, csv };

inline void export_report(const RunReport& r, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << (format == ReportFormat::json ? report_to_json(r) : report_to_csv(r));
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// SVG rendering

struct ScatterOptions {
    bool draw_quadrant_arcs = false;
    double radius_scale = 1.0;  // usually k_R, widening arcs to the support
};

namespace detail {

inline const char* cluster_color(int k) {
    static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[k % 8];
}

struct SvgMapper {
    double x_lo, x_span, y_lo, y_span;
    double left, top, width, height;

    double sx(double x) const { return left + (x - x_lo) / x_span * width; }
    double sy(double y) const { return top + (1.0 - (y - y_lo) / y_span) * height; }
    double rx(double r) const { return r / x_span * width; }
    double ry(double r) const { return r / y_span * height; }
};

inline void expand(double& lo, double& hi, double value) {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
}

}  // namespace detail

/// One circle per object colored by cluster, a cross per centroid and,
/// when requested, four quarter-ellipse arcs per cluster bounded by the
/// quadrant radii (times radius_scale). Output is byte-deterministic.
inline std::string render_scatter_svg(const FeatureView& v, const ClusterModel& m,
                                      const ClusterRadii& radii, const ScatterOptions& options = {}) {
    if (static_cast<int>(m.assignments.size()) != v.q()) {
        throw ArgumentError("model does not cover the feature view");
    }
    const double canvas_w = 800, canvas_h = 600, margin = 60;

    double x_lo = v.x[0], x_hi = v.x[0], y_lo = v.y[0], y_hi = v.y[0];
    for (int i = 0; i < v.q(); ++i) {
        detail::expand(x_lo, x_hi, v.x[i]);
        detail::expand(y_lo, y_hi, v.y[i]);
    }
    if (options.draw_quadrant_arcs) {
        for (int k = 0; k < m.cluster_count(); ++k) {
            const Point c = m.centroids[k];
            const ClusterRadiiEntry& e = radii.clusters[k];
            detail::expand(x_lo, x_hi, c.x - e.r_x_left * options.radius_scale);
            detail::expand(x_lo, x_hi, c.x + e.r_x_right * options.radius_scale);
            detail::expand(y_lo, y_hi, c.y - e.r_y_down * options.radius_scale);
            detail::expand(y_lo, y_hi, c.y + e.r_y_up * options.radius_scale);
        }
    }
    double x_span = x_hi - x_lo, y_span = y_hi - y_lo;
    if (x_span == 0.0) { x_lo -= 0.5; x_span = 1.0; }
    if (y_span == 0.0) { y_lo -= 0.5; y_span = 1.0; }
    x_lo -= 0.05 * x_span; x_span *= 1.1;
    y_lo -= 0.05 * y_span; y_span *= 1.1;
    const detail::SvgMapper map{x_lo, x_span, y_lo, y_span,
                                margin, margin, canvas_w - 2 * margin, canvas_h - 2 * margin};
    using detail::fmt6;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "  <line class=\"axis\" x1=\"" << fmt6(margin) << "\" y1=\"" << fmt6(canvas_h - margin)
        << "\" x2=\"" << fmt6(canvas_w - margin) << "\" y2=\"" << fmt6(canvas_h - margin)
        << "\" stroke=\"black\"/>\n";
    svg << "  <line class=\"axis\" x1=\"" << fmt6(margin) << "\" y1=\"" << fmt6(margin)
        << "\" x2=\"" << fmt6(margin) << "\" y2=\"" << fmt6(canvas_h - margin)
        << "\" stroke=\"black\"/>\n";
    svg << "  <text class=\"axis-label\" x=\"" << fmt6(canvas_w / 2) << "\" y=\""
        << fmt6(canvas_h - margin / 4) << "\" text-anchor=\"middle\">" << v.x_name << "</text>\n";
    svg << "  <text class=\"axis-label\" x=\"" << fmt6(margin / 4) << "\" y=\""
        << fmt6(canvas_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
        << fmt6(margin / 4) << " " << fmt6(canvas_h / 2) << ")\">" << v.y_name << "</text>\n";

    if (options.draw_quadrant_arcs) {
        for (int k = 0; k < m.cluster_count(); ++k) {
            const Point c = m.centroids[k];
            const ClusterRadiiEntry& e = radii.clusters[k];
            const double s = options.radius_scale;
            const double right = e.r_x_right * s, left = e.r_x_left * s;
            const double up = e.r_y_up * s, down = e.r_y_down * s;
            // four quarter ellipses, counterclockwise from the +x axis
            const struct { double rx, ry, x0, y0, x1, y1; } arcs[4] = {
                {right, up, c.x + right, c.y, c.x, c.y + up},
                {left, up, c.x, c.y + up, c.x - left, c.y},
                {left, down, c.x - left, c.y, c.x, c.y - down},
                {right, down, c.x, c.y - down, c.x + right, c.y},
            };
            for (const auto& a : arcs) {
                svg << "  <path class=\"arc\" fill=\"none\" stroke=\"" << detail::cluster_color(k)
                    << "\" stroke-dasharray=\"4 3\" d=\"M " << fmt6(map.sx(a.x0)) << " "
                    << fmt6(map.sy(a.y0)) << " A " << fmt6(map.rx(a.rx)) << " " << fmt6(map.ry(a.ry))
                    << " 0 0 0 " << fmt6(map.sx(a.x1)) << " " << fmt6(map.sy(a.y1)) << "\"/>\n";
            }
        }
    }
    for (int i = 0; i < v.q(); ++i) {
        svg << "  <circle class=\"point\" cx=\"" << fmt6(map.sx(v.x[i])) << "\" cy=\""
            << fmt6(map.sy(v.y[i])) << "\" r=\"3\" fill=\"" << detail::cluster_color(m.assignments[i])
            << "\"/>\n";
    }
    for (int k = 0; k < m.cluster_count(); ++k) {
        const double cx = map.sx(m.centroids[k].x), cy = map.sy(m.centroids[k].y);
        svg << "  <path class=\"centroid\" stroke=\"black\" stroke-width=\"2\" d=\"M "
            << fmt6(cx - 5) << " " << fmt6(cy - 5) << " L " << fmt6(cx + 5) << " " << fmt6(cy + 5)
            << " M " << fmt6(cx - 5) << " " << fmt6(cy + 5) << " L " << fmt6(cx + 5) << " "
            << fmt6(cy - 5) << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

enum class MembershipAxis { x, y, rho };

/// Vertices of the piecewise-linear membership curve in (distance, mu)
/// coordinates. The x and y families span their signed support; mu_rho spans
/// [0, k_R * R_c].
inline std::vector<std::pair<double, double>> membership_curve(const ClusterRadii& radii,
                                                               const FuzzyConfig& cfg,
                                                               int cluster_number,
                                                               MembershipAxis axis) {
    if (cluster_number < 1 || cluster_number > radii.cluster_count()) {
        throw ArgumentError("cluster number " + std::to_string(cluster_number) +
                            " out of range 1.." + std::to_string(radii.cluster_count()));
    }
    if (cfg.k_r <= 0.0) throw ArgumentError("k_r must be positive");
    const ClusterRadiiEntry& e = radii.clusters[cluster_number - 1];
    switch (axis) {
        case MembershipAxis::rho:
            return {{0.0, 1.0}, {e.r_c * cfg.k_r, 0.0}};
        case MembershipAxis::x:
            return {{-e.r_x_left * cfg.k_r, 0.0}, {0.0, 1.0}, {e.r_x_right * cfg.k_r, 0.0}};
        case MembershipAxis::y:
            return {{-e.r_y_down * cfg.k_r, 0.0}, {0.0, 1.0}, {e.r_y_up * cfg.k_r, 0.0}};
    }
    throw ArgumentError("unknown membership axis");
}

/// Membership value at a signed curve position (negative = left/down side).
inline double membership_curve_value(const ClusterRadii& radii, const FuzzyConfig& cfg,
                                     int cluster_number, MembershipAxis axis, double position) {
    if (cluster_number < 1 || cluster_number > radii.cluster_count()) {
        throw ArgumentError("cluster number " + std::to_string(cluster_number) +
                            " out of range 1.." + std::to_string(radii.cluster_count()));
    }
    const std::size_t k = static_cast<std::size_t>(cluster_number - 1);
    switch (axis) {
        case MembershipAxis::rho:
            return mu_rho(k, position, radii, cfg);
        case MembershipAxis::x:
            return mu_x(k, std::abs(position), position < 0 ? XSide::left : XSide::right, radii, cfg);
        case MembershipAxis::y:
            return mu_y(k, std::abs(position), position < 0 ? YSide::down : YSide::up, radii, cfg);
    }
    throw ArgumentError("unknown membership axis");
}

/// Plot of one membership family for one cluster, optionally with a vertical
/// marker at a queried object's distance touching the curve.
inline std::string plot_membership_functions(const ClusterRadii& radii, const FuzzyConfig& cfg,
                                             int cluster_number, MembershipAxis axis,
                                             std::optional<double> marker_position = std::nullopt) {
    const auto curve = membership_curve(radii, cfg, cluster_number, axis);
    const double canvas_w = 640, canvas_h = 400, margin = 50;
    double d_lo = curve.front().first, d_hi = curve.back().first;
    if (marker_position) {
        d_lo = std::min(d_lo, *marker_position);
        d_hi = std::max(d_hi, *marker_position);
    }
    double span = d_hi - d_lo;
    if (span == 0.0) { d_lo -= 0.5; span = 1.0; }
    const detail::SvgMapper map{d_lo, span, 0.0, 1.0,
                                margin, margin, canvas_w - 2 * margin, canvas_h - 2 * margin};
    using detail::fmt6;
    const char* family = axis == MembershipAxis::rho ? "mu_rho" : axis == MembershipAxis::x ? "mu_x" : "mu_y";
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    svg << "  <line class=\"axis\" x1=\"" << fmt6(margin) << "\" y1=\"" << fmt6(canvas_h - margin)
        << "\" x2=\"" << fmt6(canvas_w - margin) << "\" y2=\"" << fmt6(canvas_h - margin)
        << "\" stroke=\"black\"/>\n";
    svg << "  <line class=\"axis\" x1=\"" << fmt6(margin) << "\" y1=\"" << fmt6(margin)
        << "\" x2=\"" << fmt6(margin) << "\" y2=\"" << fmt6(canvas_h - margin)
        << "\" stroke=\"black\"/>\n";
    svg << "  <text class=\"axis-label\" x=\"" << fmt6(canvas_w / 2) << "\" y=\""
        << fmt6(canvas_h - margin / 4) << "\" text-anchor=\"middle\">" << family << "(cluster "
        << cluster_number << ")</text>\n";
    svg << "  <polyline class=\"curve\" fill=\"none\" stroke=\""
        << detail::cluster_color(cluster_number - 1) << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (i) svg << ' ';
        svg << fmt6(map.sx(curve[i].first)) << ',' << fmt6(map.sy(curve[i].second));
    }
    svg << "\"/>\n";
    if (marker_position) {
        const double mu = membership_curve_value(radii, cfg, cluster_number, axis, *marker_position);
        svg << "  <line class=\"query-marker\" stroke=\"black\" stroke-dasharray=\"5 4\" x1=\""
            << fmt6(map.sx(*marker_position)) << "\" y1=\"" << fmt6(map.sy(0.0)) << "\" x2=\""
            << fmt6(map.sx(*marker_position)) << "\" y2=\"" << fmt6(map.sy(mu)) << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace fuzzyclust
