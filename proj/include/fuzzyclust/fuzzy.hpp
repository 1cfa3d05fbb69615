#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fuzzyclust/errors.hpp"
#include "fuzzyclust/kmeans.hpp"

namespace fuzzyclust {

struct FuzzyConfig {
    double k_r = 1.5;  // radius change factor; larger means more cluster overlap
};

/// Maximal member extents of one cluster: the Euclidean radius plus the four
/// per-quadrant radii describing its asymmetry.
struct ClusterRadiiEntry {
    double r_c = 0.0;
    double r_x_left = 0.0;
    double r_x_right = 0.0;
    double r_y_down = 0.0;
    double r_y_up = 0.0;
};

struct ClusterRadii {
    std::vector<ClusterRadiiEntry> clusters;

    int cluster_count() const { return static_cast<int>(clusters.size()); }
};

enum class XSide { left, right };
enum class YSide { down, up };

/// Distances from one object to every centroid, with the side of each axis
/// offset. rho^2 = dx^2 + dy^2 per cluster.
struct MembershipQuery {
    struct PerCluster {
        double dx = 0.0;
        XSide x_side = XSide::left;
        double dy = 0.0;
        YSide y_side = YSide::down;
        double rho = 0.0;
    };
    int object_number = 0;  // 1-based i_v
    Point object;
    std::vector<PerCluster> clusters;
};

/// The four membership families of one object against every cluster.
struct MembershipProfile {
    struct Entry {
        double mu_rho = 0.0;
        double mu_x = 0.0;
        double mu_y = 0.0;
        double mu_xy = 0.0;
    };
    int object_number = 0;
    int assigned_cluster = 0;  // 0-based, from the model
    std::vector<Entry> clusters;

    int cluster_count() const { return static_cast<int>(clusters.size()); }
};

/// Maximal member distances per cluster, measured against the model's
/// centroids as given (they are not recomputed here).
inline ClusterRadii compute_radii(const FeatureView& v, const ClusterModel& m) {
    if (static_cast<int>(m.assignments.size()) != v.q()) {
        throw ArgumentError("model does not cover the feature view");
    }
    ClusterRadii radii;
    radii.clusters.resize(m.centroids.size());
    for (int i = 0; i < v.q(); ++i) {
        const Point c = m.centroids[m.assignments[i]];
        ClusterRadiiEntry& e = radii.clusters[m.assignments[i]];
        e.r_c = std::max(e.r_c, euclidean_distance({v.x[i], v.y[i]}, c));
        if (v.x[i] < c.x) e.r_x_left = std::max(e.r_x_left, c.x - v.x[i]);
        if (v.x[i] > c.x) e.r_x_right = std::max(e.r_x_right, v.x[i] - c.x);
        if (v.y[i] < c.y) e.r_y_down = std::max(e.r_y_down, c.y - v.y[i]);
        if (v.y[i] > c.y) e.r_y_up = std::max(e.r_y_up, v.y[i] - c.y);
    }
    return radii;
}

namespace detail {

// Linear decay from 1 at the centroid to 0 at radius * k_r. A zero radius is
// the singleton limit: full membership at distance 0, none elsewhere.
inline double triangular_membership(double distance, double radius, double k_r) {
    if (distance < 0.0) throw ArgumentError("membership distance must be non-negative");
    if (k_r <= 0.0) throw ArgumentError("k_r must be positive");
    if (distance == 0.0) return 1.0;
    if (radius <= 0.0) return 0.0;
    return std::max(0.0, 1.0 - distance / (radius * k_r));
}

inline const ClusterRadiiEntry& radii_entry(const ClusterRadii& radii, std::size_t cluster) {
    if (cluster >= radii.clusters.size()) {
        throw ArgumentError("cluster index " + std::to_string(cluster) + " out of range");
    }
    return radii.clusters[cluster];
}

}  // namespace detail

inline double mu_rho(std::size_t cluster, double rho, const ClusterRadii& radii,
                     const FuzzyConfig& cfg) {
    return detail::triangular_membership(rho, detail::radii_entry(radii, cluster).r_c, cfg.k_r);
}

inline double mu_x(std::size_t cluster, double dx, XSide side, const ClusterRadii& radii,
                   const FuzzyConfig& cfg) {
    const ClusterRadiiEntry& e = detail::radii_entry(radii, cluster);
    const double r = side == XSide::left ? e.r_x_left : e.r_x_right;
    return detail::triangular_membership(dx, r, cfg.k_r);
}

inline double mu_y(std::size_t cluster, double dy, YSide side, const ClusterRadii& radii,
                   const FuzzyConfig& cfg) {
    const ClusterRadiiEntry& e = detail::radii_entry(radii, cluster);
    const double r = side == YSide::down ? e.r_y_down : e.r_y_up;
    return detail::triangular_membership(dy, r, cfg.k_r);
}

/// Combined degree of belonging by both coordinates (root mean square).
inline double mu_xy(double mu_x_value, double mu_y_value) {
    return std::sqrt((mu_x_value * mu_x_value + mu_y_value * mu_y_value) / 2.0);
}

/// Distances and sides of object i_v (1-based) against every centroid.
inline MembershipQuery make_membership_query(int object_number, const FeatureView& v,
                                             const ClusterModel& m) {
    if (object_number < 1 || object_number > v.q()) {
        throw ArgumentError("object number " + std::to_string(object_number) +
                            " out of range 1.." + std::to_string(v.q()));
    }
    const Point p{v.x[object_number - 1], v.y[object_number - 1]};
    MembershipQuery query;
    query.object_number = object_number;
    query.object = p;
    query.clusters.resize(m.centroids.size());
    for (std::size_t k = 0; k < m.centroids.size(); ++k) {
        const Point c = m.centroids[k];
        auto& q = query.clusters[k];
        q.dx = std::abs(p.x - c.x);
        q.x_side = p.x < c.x ? XSide::left : XSide::right;
        q.dy = std::abs(p.y - c.y);
        q.y_side = p.y < c.y ? YSide::down : YSide::up;
        q.rho = euclidean_distance(p, c);
    }
    return query;
}

/// All four membership families of object i_v (1-based) against every cluster.
inline MembershipProfile evaluate_membership(int object_number, const FeatureView& v,
                                             const ClusterModel& m, const ClusterRadii& radii,
                                             const FuzzyConfig& cfg) {
    const MembershipQuery query = make_membership_query(object_number, v, m);
    MembershipProfile profile;
    profile.object_number = object_number;
    profile.assigned_cluster = m.assignments[object_number - 1];
    profile.clusters.resize(query.clusters.size());
    for (std::size_t k = 0; k < query.clusters.size(); ++k) {
        const auto& q = query.clusters[k];
        auto& e = profile.clusters[k];
        e.mu_rho = mu_rho(k, q.rho, radii, cfg);
        e.mu_x = mu_x(k, q.dx, q.x_side, radii, cfg);
        e.mu_y = mu_y(k, q.dy, q.y_side, radii, cfg);
        e.mu_xy = mu_xy(e.mu_x, e.mu_y);
    }
    return profile;
}

}  // namespace fuzzyclust
