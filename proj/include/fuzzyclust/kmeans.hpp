#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "fuzzyclust/dataset.hpp"
#include "fuzzyclust/errors.hpp"

namespace fuzzyclust {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Euclidean distance between two points of the feature plane.
inline double euclidean_distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct KMeansConfig {
    int clusters = 1;          // Q_k, set by the user
    std::uint64_t seed = 0;
    int n_restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;         // centroid shift threshold
};

/// Clustering quality functionals. inter_f1 is absent for a single cluster,
/// ratio additionally requires inter_f1 > 0.
struct QualityMetrics {
    double intra_f0 = 0.0;
    std::optional<double> inter_f1;
    std::optional<double> ratio;
};

/// A fitted model. Cluster ids are 0-based and canonically ordered by
/// centroid (x + y) ascending; no cluster is empty.
struct ClusterModel {
    std::vector<Point> centroids;
    std::vector<int> assignments;         // per object, 0-based cluster id
    std::vector<int> counts;
    QualityMetrics quality;
    bool converged = false;
    int iterations = 0;
    double wcss = 0.0;                    // within-cluster sum of squares
    std::vector<double> wcss_history;     // per iteration of the winning run

    int cluster_count() const { return static_cast<int>(centroids.size()); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform draws built directly from mt19937_64 output so results do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t index(std::size_t n) {
        const auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

inline double squared_distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline std::vector<Point> as_points(const FeatureView& v) {
    std::vector<Point> pts(v.x.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {v.x[i], v.y[i]};
    return pts;
}

inline std::vector<Point> kmeanspp_init(const std::vector<Point>& pts, int k, Rng& rng) {
    std::vector<Point> centroids;
    centroids.reserve(k);
    centroids.push_back(pts[rng.index(pts.size())]);
    std::vector<double> d2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = squared_distance(pts[i], centroids[0]);
    while (static_cast<int>(centroids.size()) < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            double u = rng.uniform01() * total;
            pick = pts.size() - 1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                u -= d2[i];
                if (u <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            // all remaining mass is zero (duplicate-heavy input): first point
            // not already used as a centroid, else the first point
            for (std::size_t i = 0; i < pts.size(); ++i) {
                bool used = false;
                for (const Point& c : centroids) used = used || c == pts[i];
                if (!used) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(pts[pick]);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d2[i] = std::min(d2[i], squared_distance(pts[i], centroids.back()));
        }
    }
    return centroids;
}

inline void assign_nearest(const std::vector<Point>& pts, const std::vector<Point>& centroids,
                           std::vector<int>& assignments) {
    assignments.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        int best = 0;
        double best_d = squared_distance(pts[i], centroids[0]);
        for (std::size_t k = 1; k < centroids.size(); ++k) {
            const double d = squared_distance(pts[i], centroids[k]);
            if (d < best_d) {  // ties keep the lowest cluster index
                best_d = d;
                best = static_cast<int>(k);
            }
        }
        assignments[i] = best;
    }
}

// Re-seeds every empty cluster with the point farthest from that cluster's
// current centroid, stolen from a cluster that keeps at least one member.
inline bool fix_empty_clusters(const std::vector<Point>& pts, const std::vector<Point>& centroids,
                               std::vector<int>& assignments, std::vector<int>& counts) {
    counts.assign(centroids.size(), 0);
    for (int a : assignments) ++counts[a];
    bool stole = false;
    for (std::size_t k = 0; k < centroids.size(); ++k) {
        if (counts[k] != 0) continue;
        int pick = -1;
        double pick_d = -1.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (counts[assignments[i]] <= 1) continue;
            const double d = squared_distance(pts[i], centroids[k]);
            if (d > pick_d) {
                pick_d = d;
                pick = static_cast<int>(i);
            }
        }
        // Q >= k guarantees a donor with two or more members exists
        --counts[assignments[pick]];
        assignments[pick] = static_cast<int>(k);
        counts[k] = 1;
        stole = true;
    }
    return stole;
}

inline std::vector<Point> centroid_means(const std::vector<Point>& pts,
                                         const std::vector<int>& assignments,
                                         const std::vector<int>& counts) {
    std::vector<Point> means(counts.size(), Point{});
    for (std::size_t i = 0; i < pts.size(); ++i) {
        means[assignments[i]].x += pts[i].x;
        means[assignments[i]].y += pts[i].y;
    }
    for (std::size_t k = 0; k < means.size(); ++k) {
        means[k].x /= counts[k];
        means[k].y /= counts[k];
    }
    return means;
}

inline double wcss_of(const std::vector<Point>& pts, const std::vector<Point>& centroids,
                      const std::vector<int>& assignments) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        total += squared_distance(pts[i], centroids[assignments[i]]);
    }
    return total;
}

struct LloydRun {
    std::vector<Point> centroids;
    std::vector<int> assignments;
    std::vector<int> counts;
    bool converged = false;
    int iterations = 0;
    double wcss = 0.0;
    std::vector<double> wcss_history;
};

inline LloydRun lloyd_run(const std::vector<Point>& pts, int k, int max_iter, double tol, Rng& rng) {
    LloydRun run;
    run.centroids = kmeanspp_init(pts, k, rng);
    std::vector<int> assignments;
    std::vector<int> counts;
    std::vector<int> previous;
    for (int it = 1; it <= max_iter; ++it) {
        run.iterations = it;
        assign_nearest(pts, run.centroids, assignments);
        fix_empty_clusters(pts, run.centroids, assignments, counts);
        const std::vector<Point> means = centroid_means(pts, assignments, counts);
        run.wcss_history.push_back(wcss_of(pts, means, assignments));
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            shift = std::max(shift, euclidean_distance(run.centroids[c], means[c]));
        }
        // the full update (assign, re-seed empties, means) reproduced the
        // previous state: a fixed point, nothing can change from here
        const bool stable = assignments == previous;
        previous = assignments;
        run.centroids = means;
        if (stable) {
            run.converged = true;
            break;
        }
        if (shift < tol) {
            // confirm the assignment is a fixed point of the new centroids,
            // so the returned model is exactly self-consistent
            std::vector<int> check;
            assign_nearest(pts, run.centroids, check);
            if (check == assignments) {
                run.converged = true;
                break;
            }
        }
    }
    run.assignments = std::move(previous);
    counts.assign(k, 0);
    for (int a : run.assignments) ++counts[a];
    run.counts = std::move(counts);
    run.wcss = wcss_of(pts, run.centroids, run.assignments);
    return run;
}

inline void canonicalize(LloydRun& run) {
    const int k = static_cast<int>(run.centroids.size());
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Point& pa = run.centroids[a];
        const Point& pb = run.centroids[b];
        const double sa = pa.x + pa.y;
        const double sb = pb.x + pb.y;
        if (sa != sb) return sa < sb;
        if (pa.x != pb.x) return pa.x < pb.x;
        if (pa.y != pb.y) return pa.y < pb.y;
        return a < b;
    });
    std::vector<int> relabel(k);
    std::vector<Point> centroids(k);
    std::vector<int> counts(k);
    for (int pos = 0; pos < k; ++pos) {
        relabel[order[pos]] = pos;
        centroids[pos] = run.centroids[order[pos]];
        counts[pos] = run.counts[order[pos]];
    }
    run.centroids = std::move(centroids);
    run.counts = std::move(counts);
    for (int& a : run.assignments) a = relabel[a];
}

}  // namespace detail

/// Mean pairwise distance over unordered same-cluster pairs; 0 when no such
/// pair exists (singleton-only partitions).
inline double intra_cluster_f0(const FeatureView& v, const ClusterModel& m) {
    if (static_cast<int>(m.assignments.size()) != v.q()) {
        throw ArgumentError("model does not cover the feature view");
    }
    double sum = 0.0;
    long pairs = 0;
    for (int i = 0; i < v.q(); ++i) {
        for (int j = i + 1; j < v.q(); ++j) {
            if (m.assignments[i] != m.assignments[j]) continue;
            sum += euclidean_distance({v.x[i], v.y[i]}, {v.x[j], v.y[j]});
            ++pairs;
        }
    }
    return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

/// Mean pairwise distance over unordered cross-cluster pairs.
inline double inter_cluster_f1(const FeatureView& v, const ClusterModel& m) {
    if (static_cast<int>(m.assignments.size()) != v.q()) {
        throw ArgumentError("model does not cover the feature view");
    }
    if (m.cluster_count() < 2) {
        throw UndefinedMetricError("inter-cluster distance needs at least two clusters");
    }
    double sum = 0.0;
    long pairs = 0;
    for (int i = 0; i < v.q(); ++i) {
        for (int j = i + 1; j < v.q(); ++j) {
            if (m.assignments[i] == m.assignments[j]) continue;
            sum += euclidean_distance({v.x[i], v.y[i]}, {v.x[j], v.y[j]});
            ++pairs;
        }
    }
    return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

inline double quality_ratio(double f0, double f1) {
    if (f1 <= 0.0) throw UndefinedMetricError("F0/F1 is undefined for F1 = 0");
    return f0 / f1;
}

namespace detail {

inline QualityMetrics model_quality(const FeatureView& v, const ClusterModel& m) {
    QualityMetrics q;
    q.intra_f0 = intra_cluster_f0(v, m);
    if (m.cluster_count() >= 2) {
        q.inter_f1 = inter_cluster_f1(v, m);
        if (*q.inter_f1 > 0.0) q.ratio = q.intra_f0 / *q.inter_f1;
    }
    return q;
}

}  // namespace detail

/// Per-restart iteration traces, for convergence inspection.
struct KMeansDiagnostics {
    std::vector<std::vector<double>> restart_wcss_histories;
};

/// Lloyd's algorithm with k-means++ seeding. Runs cfg.n_restarts independent
/// restarts (RNG stream r is seeded from splitmix64(seed, r)) and keeps the
/// lowest-WCSS run, ties to the earliest restart.
inline ClusterModel kmeans_fit(const FeatureView& v, const KMeansConfig& cfg,
                               KMeansDiagnostics* diagnostics = nullptr) {
    const int q = v.q();
    if (cfg.clusters < 1) throw ArgumentError("cluster count must be at least 1");
    if (cfg.clusters > q) {
        throw ArgumentError("cluster count " + std::to_string(cfg.clusters) + " exceeds " +
                            std::to_string(q) + " objects");
    }
    if (cfg.n_restarts < 1) throw ArgumentError("n_restarts must be positive");
    if (cfg.max_iter < 1) throw ArgumentError("max_iter must be positive");
    if (cfg.tol < 0.0) throw ArgumentError("tol must be non-negative");

    const std::vector<Point> pts = detail::as_points(v);
    detail::LloydRun best;
    bool have_best = false;
    for (int r = 0; r < cfg.n_restarts; ++r) {
        detail::Rng rng(detail::splitmix64(cfg.seed + 0x100000001ULL * static_cast<std::uint64_t>(r)));
        detail::LloydRun run = detail::lloyd_run(pts, cfg.clusters, cfg.max_iter, cfg.tol, rng);
        if (diagnostics) diagnostics->restart_wcss_histories.push_back(run.wcss_history);
        if (!have_best || run.wcss < best.wcss) {
            best = std::move(run);
            have_best = true;
        }
    }
    detail::canonicalize(best);

    ClusterModel m;
    m.centroids = std::move(best.centroids);
    m.assignments = std::move(best.assignments);
    m.counts = std::move(best.counts);
    m.converged = best.converged;
    m.iterations = best.iterations;
    m.wcss = best.wcss;
    m.wcss_history = std::move(best.wcss_history);
    m.quality = detail::model_quality(v, m);
    return m;
}

struct SweepEntry {
    int k = 0;
    QualityMetrics quality;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    int selected_k = 0;
};

/// Fits every k in [k_from, k_to] and selects the k with the minimal F0/F1
/// ratio, ties toward the smaller k.
inline SweepResult sweep_k(const FeatureView& v, int k_from, int k_to, const KMeansConfig& cfg) {
    if (k_from < 2 || k_from > k_to || k_to > v.q()) {
        throw ArgumentError("sweep range must satisfy 2 <= from <= to <= Q");
    }
    SweepResult result;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int k = k_from; k <= k_to; ++k) {
        KMeansConfig c = cfg;
        c.clusters = k;
        const ClusterModel m = kmeans_fit(v, c);
        if (!m.quality.ratio) throw UndefinedMetricError("F0/F1 is undefined for F1 = 0");
        result.entries.push_back({k, m.quality});
        if (*m.quality.ratio < best_ratio) {
            best_ratio = *m.quality.ratio;
            result.selected_k = k;
        }
    }
    return result;
}

}  // namespace fuzzyclust
