// hypegbms command-line front end: cluster CSV data with HypeGBMS or the
// Euclidean GBMS baseline, sweep (sigma, curvature) grids, generate synthetic
// hierarchical fixtures, and run the numerical self-validation suite.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypegbms/clustering.hpp"
#include "hypegbms/data.hpp"
#include "hypegbms/metrics.hpp"
#include "hypegbms/report.hpp"
#include "hypegbms/validate.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitValidation = 3;

struct ClusterOptions {
    std::string input, output, report_path;
    std::string algorithm = "hypegbms";
    double sigma = 0.5;
    double curvature = -1.0;
    double epsilon = 1e-5;
    double gamma = 1e-4;
    double scale = 1.0;
    std::optional<double> delta;
    int max_iter = 200;
    unsigned long seed = 42;
    std::string label_column;
    bool has_header = false;
};

hypegbms::LabelColumn parse_label_column(const std::string& s) {
    if (s.empty()) return {};
    char* end = nullptr;
    const unsigned long idx = std::strtoul(s.c_str(), &end, 10);
    if (end == s.c_str() + s.size()) return std::size_t(idx);
    return s;
}

void write_labels(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hypegbms::io_error("cannot write labels to " + path);
    for (int l : labels) out << l << '\n';
}

int run_cluster(const ClusterOptions& opt) {
    hypegbms::Dataset ds = hypegbms::load_csv(opt.input, parse_label_column(opt.label_column),
                                              opt.has_header);
    hypegbms::RunConfig cfg;
    cfg.sigma = opt.sigma;
    cfg.curvature = hypegbms::Curvature(opt.curvature);
    cfg.epsilon = opt.epsilon;
    cfg.delta = opt.delta;
    cfg.gamma = opt.gamma;
    cfg.max_iter = opt.max_iter;
    cfg.scale = opt.scale;
    cfg.seed = opt.seed;
    cfg.validate();

    const auto start = std::chrono::steady_clock::now();
    const hypegbms::ClusterResult result = opt.algorithm == "gbms"
                                               ? hypegbms::run_gbms(ds.features, cfg)
                                               : hypegbms::run_hypegbms(ds.features, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!opt.output.empty()) write_labels(result.labels, opt.output);
    const nlohmann::json report =
        hypegbms::make_report(opt.algorithm, result, cfg, secs, ds.labels);
    if (!opt.report_path.empty()) {
        std::ofstream out(opt.report_path, std::ios::binary);
        if (!out) throw hypegbms::io_error("cannot write report to " + opt.report_path);
        out << report.dump(2) << '\n';
    } else {
        std::cout << report.dump(2) << '\n';
    }
    return 0;
}

int run_sweep(const ClusterOptions& opt, const std::vector<double>& sigmas,
              const std::vector<double>& curvatures, const std::string& out_path) {
    hypegbms::Dataset ds = hypegbms::load_csv(opt.input, parse_label_column(opt.label_column),
                                              opt.has_header);
    if (!ds.labels) {
        std::cerr << "sweep requires ground-truth labels (--label-column)\n";
        return kExitUsage;
    }

    struct Row {
        double sigma, c, ari, nmi;
        int k;
        std::size_t iters;
    };
    std::vector<Row> rows;
    std::size_t best = 0;
    for (double c : curvatures)
        for (double s : sigmas) {
            hypegbms::RunConfig cfg;
            cfg.sigma = s;
            cfg.curvature = hypegbms::Curvature(c);
            cfg.epsilon = opt.epsilon;
            cfg.delta = opt.delta;
            cfg.gamma = opt.gamma;
            cfg.max_iter = opt.max_iter;
            cfg.scale = opt.scale;
            cfg.seed = opt.seed;
            const hypegbms::ClusterResult r = hypegbms::run_hypegbms(ds.features, cfg);
            rows.push_back({s, c, hypegbms::ari(r.labels, *ds.labels),
                            hypegbms::nmi(r.labels, *ds.labels), r.num_clusters,
                            r.trace.size()});
            if (rows.back().ari > rows[best].ari) best = rows.size() - 1;
        }

    std::ofstream out;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
        out.open(out_path, std::ios::binary);
        if (!out) throw hypegbms::io_error("cannot write sweep results to " + out_path);
        os = &out;
    }
    *os << "sigma,curvature,ari,nmi,num_clusters,iterations,best\n";
    char buf[160];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%zu,%d\n", rows[i].sigma,
                      rows[i].c, rows[i].ari, rows[i].nmi, rows[i].k, rows[i].iters,
                      i == best ? 1 : 0);
        *os << buf;
    }
    return 0;
}

int run_validate(unsigned long seed, const std::string& only, bool inject_fault) {
    std::vector<hypegbms::validate::Check> checks =
        hypegbms::validate::run_all(seed, inject_fault, only);
    if (checks.empty()) {
        std::cerr << "no check named '" << only << "'\n";
        return kExitUsage;
    }
    bool all_ok = true;
    std::printf("%-22s %-6s %14s %4s %14s\n", "check", "status", "measured", "", "threshold");
    for (const auto& c : checks) {
        std::printf("%-22s %-6s %14.6e %4s %14.6e\n", c.name.c_str(), c.ok ? "PASS" : "FAIL",
                    c.measured, c.op.c_str(), c.threshold);
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : kExitValidation;
}

int run_gen(int roots, int children, int points_per_leaf, double leaf_spread, double level_gap,
            int dim, unsigned long seed, const std::string& output) {
    const hypegbms::Dataset ds = hypegbms::make_hierarchical(roots, children, points_per_leaf,
                                                             leaf_spread, level_gap, dim, seed);
    hypegbms::save_csv(ds, output);
    std::cout << "wrote " << ds.n() << " points (" << ds.p() << " features + label) to " << output
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic Gaussian Blurring Mean Shift clustering"};
    app.require_subcommand(1);

    ClusterOptions opt;
    double delta_flag = 0.0;

    auto* cluster = app.add_subcommand("cluster", "Cluster a CSV file");
    cluster->add_option("--input", opt.input, "input CSV path")->required();
    cluster->add_option("--output", opt.output, "label CSV output path");
    cluster->add_option("--algorithm", opt.algorithm, "hypegbms or gbms")
        ->check(CLI::IsMember({"hypegbms", "gbms"}));
    cluster->add_option("--sigma", opt.sigma, "kernel bandwidth");
    auto* curv = cluster->add_option("--curvature", opt.curvature, "ball curvature, < 0");
    cluster->add_option("--epsilon", opt.epsilon, "movement stopping tolerance");
    auto* delta_opt =
        cluster->add_option("--delta", delta_flag, "cluster separation (default: 0.1 x median distance)");
    cluster->add_option("--gamma", opt.gamma, "entropy stopping tolerance");
    cluster->add_option("--max-iter", opt.max_iter, "iteration cap");
    cluster->add_option("--scale", opt.scale, "projection scale");
    cluster->add_option("--label-column", opt.label_column, "ground-truth column name or index");
    cluster->add_flag("--has-header", opt.has_header, "first CSV row is a header");
    cluster->add_option("--seed", opt.seed, "random seed");
    cluster->add_option("--report", opt.report_path, "JSON report path (default: stdout)");

    std::vector<double> sigmas, curvatures;
    std::string sweep_output;
    auto* sweep = app.add_subcommand("sweep", "Grid-sweep sigma and curvature");
    sweep->add_option("--input", opt.input, "input CSV path")->required();
    sweep->add_option("--sigmas", sigmas, "sigma grid")->delimiter(',');
    sweep->add_option("--curvatures", curvatures, "curvature grid")->delimiter(',');
    sweep->add_option("--epsilon", opt.epsilon, "movement stopping tolerance");
    auto* sweep_delta = sweep->add_option("--delta", delta_flag, "cluster separation");
    sweep->add_option("--gamma", opt.gamma, "entropy stopping tolerance");
    sweep->add_option("--max-iter", opt.max_iter, "iteration cap");
    sweep->add_option("--scale", opt.scale, "projection scale");
    sweep->add_option("--label-column", opt.label_column, "ground-truth column name or index")
        ->required();
    sweep->add_flag("--has-header", opt.has_header, "first CSV row is a header");
    sweep->add_option("--seed", opt.seed, "random seed");
    sweep->add_option("--output", sweep_output, "results CSV path (default: stdout)");

    std::string only;
    bool inject_fault = false;
    unsigned long validate_seed = 42;
    auto* validate = app.add_subcommand("validate", "Run the numerical self-checks");
    validate->add_option("--only", only, "run a single named check");
    validate->add_option("--seed", validate_seed, "random seed");
    validate->add_flag("--inject-fault", inject_fault)->group("");  // hidden, harness testing

    int roots = 2, children = 2, points_per_leaf = 75, dim = 3;
    double leaf_spread = 0.05, level_gap = 10.0;
    unsigned long gen_seed = 42;
    std::string gen_output;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic hierarchical dataset");
    gen->add_option("--roots", roots, "number of root clusters");
    gen->add_option("--children", children, "children per root");
    gen->add_option("--points-per-leaf", points_per_leaf, "points per leaf");
    gen->add_option("--leaf-spread", leaf_spread, "leaf Gaussian spread");
    gen->add_option("--level-gap", level_gap, "minimum distance between roots");
    gen->add_option("--dim", dim, "feature dimension");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--output", gen_output, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*cluster) {
            if (*delta_opt) opt.delta = delta_flag;
            if (opt.algorithm == "hypegbms" && !*curv) {
                std::cerr << "--curvature is required for hypegbms\n";
                return kExitUsage;
            }
            return run_cluster(opt);
        }
        if (*sweep) {
            if (*sweep_delta) opt.delta = delta_flag;
            if (sigmas.empty())
                for (int i = 1; i <= 10; ++i) sigmas.push_back(0.1 * i);
            if (curvatures.empty())
                for (int i = 1; i <= 10; ++i) curvatures.push_back(-0.1 * i);
            return run_sweep(opt, sigmas, curvatures, sweep_output);
        }
        if (*validate) return run_validate(validate_seed, only, inject_fault);
        if (*gen)
            return run_gen(roots, children, points_per_leaf, leaf_spread, level_gap, dim,
                           gen_seed, gen_output);
    } catch (const hypegbms::numeric_degenerate& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
