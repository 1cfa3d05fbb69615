// Minimal library walkthrough: cluster a small score table, then ask how much
// one record belongs to every cluster.

#include <iostream>

#include "fuzzyclust/fuzzyclust.hpp"

int main() {
    using namespace fuzzyclust;

    FeatureView view;
    view.x_name = "math score";
    view.y_name = "reading score";
    view.x = {20, 25, 22, 60, 65, 62, 90, 95};
    view.y = {30, 28, 35, 55, 60, 58, 88, 92};

    KMeansConfig cfg;
    cfg.clusters = 3;
    const ClusterModel model = kmeans_fit(view, cfg);
    const ClusterRadii radii = compute_radii(view, model);
    const FuzzyConfig fuzzy{1.5};

    std::cout << "k=" << model.cluster_count() << " clusters, wcss=" << model.wcss << "\n";
    for (int k = 0; k < model.cluster_count(); ++k) {
        std::cout << "cluster " << k + 1 << ": centroid (" << model.centroids[k].x << ", "
                  << model.centroids[k].y << "), " << model.counts[k] << " members\n";
    }

    const MembershipProfile profile = evaluate_membership(4, view, model, radii, fuzzy);
    std::cout << "record 4 belongs to:\n";
    for (int k = 0; k < profile.cluster_count(); ++k) {
        std::cout << "  cluster " << k + 1 << " with mu_xy=" << profile.clusters[k].mu_xy << "\n";
    }
    const DifficultyRecommendation rec = recommend_difficulty(profile);
    std::cout << "recommended difficulty level: " << rec.primary_level << "\n";
    return 0;
}
