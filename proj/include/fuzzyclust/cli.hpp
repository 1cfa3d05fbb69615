#pragma once

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fuzzyclust/dataset.hpp"
#include "fuzzyclust/errors.hpp"
#include "fuzzyclust/fuzzy.hpp"
#include "fuzzyclust/kmeans.hpp"
#include "fuzzyclust/report.hpp"

namespace fuzzyclust {

/// Full configuration of one pipeline run, as parsed from the command line.
/// Exactly one of k / sweep must be set.
struct RunConfig {
    std::string input_path;
    std::string x_column = "math score";
    std::string y_column = "reading score";
    std::optional<int> k;
    std::optional<std::pair<int, int>> sweep;
    double k_r = 1.5;
    double theta = 0.5;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    bool write_json = true;
    bool write_csv = true;
    bool write_svg = true;
    std::vector<int> query;  // 1-based object numbers
    int n_restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;
};

/// Thrown when --help is requested; carries the help text.
struct HelpRequested {
    std::string text;
};

inline RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    std::string sweep_spec;
    std::string formats = "json,csv,svg";

    CLI::App app{"Cluster score records with K-Means and describe every cluster with "
                 "asymmetric triangular fuzzy membership functions.",
                 "fuzzyclust"};
    app.add_option("--input", cfg.input_path, "input CSV file")->required();
    app.add_option("--x-col", cfg.x_column, "x feature column name")
        ->capture_default_str();
    app.add_option("--y-col", cfg.y_column, "y feature column name")
        ->capture_default_str();
    app.add_option("--k", cfg.k, "cluster count Q_k");
    app.add_option("--sweep", sweep_spec, "sweep cluster counts A..B and pick the best F0/F1");
    app.add_option("--kr", cfg.k_r, "radius change factor k_R")->capture_default_str();
    app.add_option("--theta", cfg.theta, "supplementary recommendation threshold")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory")
        ->envname("FUZZYCLUST_OUT")
        ->capture_default_str();
    app.add_option("--formats", formats, "comma list of outputs: json,csv,svg")
        ->capture_default_str();
    app.add_option("--query", cfg.query, "object number i_v to profile (repeatable)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\nRun with --help for usage.");
    }

    if (cfg.k.has_value() == !sweep_spec.empty()) {
        throw UsageError("exactly one of --k or --sweep must be given");
    }
    if (!sweep_spec.empty()) {
        const auto dots = sweep_spec.find("..");
        int lo = 0, hi = 0;
        bool ok = dots != std::string::npos;
        if (ok) {
            try {
                std::size_t used = 0;
                lo = std::stoi(sweep_spec.substr(0, dots), &used);
                ok = used == dots;
                hi = std::stoi(sweep_spec.substr(dots + 2), &used);
                ok = ok && used == sweep_spec.size() - dots - 2;
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) throw UsageError("--sweep expects A..B, e.g. --sweep 2..6");
        if (lo < 2 || lo > hi) throw UsageError("--sweep range must satisfy 2 <= A <= B");
        cfg.sweep = {lo, hi};
    }
    if (cfg.k && *cfg.k < 1) throw UsageError("--k must be at least 1");
    if (cfg.k_r <= 0.0) throw UsageError("--kr must be positive");
    if (cfg.theta < 0.0 || cfg.theta > 1.0) throw UsageError("--theta must lie in [0, 1]");
    for (int q : cfg.query) {
        if (q < 1) throw UsageError("--query expects 1-based object numbers");
    }

    cfg.write_json = cfg.write_csv = cfg.write_svg = false;
    std::stringstream tokens(formats);
    std::string token;
    while (std::getline(tokens, token, ',')) {
        if (token == "json") cfg.write_json = true;
        else if (token == "csv") cfg.write_csv = true;
        else if (token == "svg") cfg.write_svg = true;
        else throw UsageError("unknown format \"" + token + "\" (expected json, csv or svg)");
    }
    if (!cfg.write_json && !cfg.write_csv && !cfg.write_svg) {
        throw UsageError("--formats selected no outputs");
    }
    return cfg;
}

namespace detail {

inline std::string opt6(const std::optional<double>& v) {
    return v ? fmt6(*v) : std::string("n/a");
}

inline void print_summary(std::ostream& out, const RunConfig& cfg, const FeatureView& view,
                          const ClusterModel& model, const RunReport& report) {
    out << "dataset: " << report.rows.size() << " records from " << cfg.input_path << "\n";
    out << "features: x = \"" << view.x_name << "\", y = \"" << view.y_name << "\"";
    if (view.scaling.applied) {
        out << " (" << (view.scaling.axis == ScaledAxis::x ? "x" : "y") << " scaled by "
            << fmt6(view.scaling.factor) << ")";
    } else {
        out << " (no scaling needed)";
    }
    out << "\n";
    if (report.sweep) {
        out << "k sweep:\n";
        for (const SweepEntry& e : report.sweep->entries) {
            out << "  k=" << e.k << "  F0=" << fmt6(e.quality.intra_f0)
                << "  F1=" << opt6(e.quality.inter_f1) << "  F0/F1=" << opt6(e.quality.ratio)
                << "\n";
        }
        out << "  selected k = " << report.sweep->selected_k << "\n";
    }
    out << "k-means: k=" << model.cluster_count() << ", seed=" << cfg.seed
        << (model.converged ? ", converged" : ", iteration limit reached") << " after "
        << model.iterations << " iterations, wcss=" << fmt6(model.wcss) << "\n";
    out << "quality: F0=" << fmt6(report.quality.intra_f0)
        << "  F1=" << opt6(report.quality.inter_f1) << "  F0/F1=" << opt6(report.quality.ratio)
        << "\n";
    out << "cluster  label            centroid(x, y)        count  R_c\n";
    for (const ClusterSummary& s : report.clusters) {
        std::ostringstream centroid;
        centroid << "(" << fmt6(s.centroid.x) << ", " << fmt6(s.centroid.y) << ")";
        out << std::left << std::setw(9) << s.cluster_number << std::setw(17) << s.label
            << std::setw(22) << centroid.str() << std::setw(7) << s.count << fmt6(s.radii.r_c)
            << "\n";
    }
    for (const MembershipProfile& p : report.profiles) {
        const ObjectRow& row = report.rows[p.object_number - 1];
        out << "object " << p.object_number << ": x=" << fmt6(row.x) << ", y=" << fmt6(row.y)
            << ", assigned cluster " << p.assigned_cluster + 1 << " (\""
            << report.clusters[p.assigned_cluster].label << "\")\n";
        out << "  cluster  mu_rho    mu_x      mu_y      mu_xy\n";
        for (int k = 0; k < p.cluster_count(); ++k) {
            out << "  " << std::left << std::setw(9) << k + 1 << std::setw(10)
                << fmt6(p.clusters[k].mu_rho) << std::setw(10) << fmt6(p.clusters[k].mu_x)
                << std::setw(10) << fmt6(p.clusters[k].mu_y) << fmt6(p.clusters[k].mu_xy) << "\n";
        }
        const DifficultyRecommendation* rec = nullptr;
        for (const DifficultyRecommendation& r : report.recommendations) {
            if (r.object_number == p.object_number) {
                rec = &r;
                break;
            }
        }
        out << "  recommendation: primary level " << rec->primary_level;
        if (rec->supplementary_levels.empty()) {
            out << ", no supplementary levels";
        } else {
            out << ", supplementary level";
            if (rec->supplementary_levels.size() > 1) out << "s";
            for (std::size_t i = 0; i < rec->supplementary_levels.size(); ++i) {
                out << (i ? ", " : " ") << rec->supplementary_levels[i];
            }
        }
        out << " (theta=" << fmt6(rec->theta) << ")\n";
    }
}

}  // namespace detail

/// Executes the whole pipeline: load, select, scale, cluster (or sweep),
/// radii, memberships, reports and plots. Throws fuzzyclust::Error on failure.
inline void run(const RunConfig& cfg, std::ostream& out) {
    namespace fs = std::filesystem;

    const Dataset dataset = load_csv(cfg.input_path, {cfg.x_column, cfg.y_column});
    const FeatureView original = select_features(dataset, cfg.x_column, cfg.y_column);
    const FeatureView view = scale_features(original);

    KMeansConfig kmeans_cfg;
    kmeans_cfg.seed = cfg.seed;
    kmeans_cfg.n_restarts = cfg.n_restarts;
    kmeans_cfg.max_iter = cfg.max_iter;
    kmeans_cfg.tol = cfg.tol;

    std::optional<SweepResult> sweep;
    if (cfg.sweep) {
        sweep = sweep_k(view, cfg.sweep->first, cfg.sweep->second, kmeans_cfg);
        kmeans_cfg.clusters = sweep->selected_k;
    } else {
        kmeans_cfg.clusters = *cfg.k;
    }
    const ClusterModel model = kmeans_fit(view, kmeans_cfg);
    const ClusterRadii radii = compute_radii(view, model);
    const FuzzyConfig fuzzy_cfg{cfg.k_r};

    RunReport report =
        build_run_report(original, view, model, radii, fuzzy_cfg, cfg.theta, cfg.query);
    report.input_path = cfg.input_path;
    report.seed = cfg.seed;
    report.sweep = sweep;

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
    const fs::path out_dir(cfg.out_dir);

    if (cfg.write_json) export_report(report, ReportFormat::json, (out_dir / "report.json").string());
    if (cfg.write_csv) export_report(report, ReportFormat::csv, (out_dir / "report.csv").string());
    if (cfg.write_svg) {
        ScatterOptions options;
        options.draw_quadrant_arcs = true;
        options.radius_scale = cfg.k_r;
        write_text_file((out_dir / "scatter.svg").string(),
                        render_scatter_svg(view, model, radii, options));
        for (int k = 1; k <= model.cluster_count(); ++k) {
            for (const auto axis : {MembershipAxis::x, MembershipAxis::y, MembershipAxis::rho}) {
                const char* name = axis == MembershipAxis::x ? "x"
                                   : axis == MembershipAxis::y ? "y"
                                                               : "rho";
                const std::string file = "membership_" + std::string(name) + "_cluster" +
                                         std::to_string(k) + ".svg";
                write_text_file((out_dir / file).string(),
                                plot_membership_functions(radii, fuzzy_cfg, k, axis));
            }
        }
    }
    detail::print_summary(out, cfg, view, model, report);
    out << "outputs written to " << cfg.out_dir << "\n";
}

/// Complete CLI behavior: parse, run, map every error to its exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = parse_args(args);
        run(cfg, out);
        return 0;
    } catch (const HelpRequested& help) {
        out << help.text;
        return 0;
    } catch (const Error& e) {
        err << "fuzzyclust: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "fuzzyclust: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fuzzyclust
