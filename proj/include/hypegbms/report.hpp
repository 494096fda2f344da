#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hypegbms/clustering.hpp"
#include "hypegbms/metrics.hpp"

namespace hypegbms {

/// Machine-checkable run report: cluster counts, stop diagnostics, the full
/// per-iteration movement/entropy/density sequences, and agreement metrics
/// when ground truth is available. `wall_time_seconds` is the only
/// non-deterministic field.
inline nlohmann::json make_report(const std::string& algorithm, const ClusterResult& result,
                                  const RunConfig& cfg, double wall_time_seconds,
                                  const std::optional<std::vector<int>>& ground_truth) {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["num_clusters"] = result.num_clusters;
    j["stop_reason"] = to_string(result.stop_reason);
    j["converged"] = result.converged;
    j["iterations"] = result.trace.size();
    j["delta_used"] = result.delta_used;

    nlohmann::json delta = nlohmann::json::array();
    nlohmann::json entropy = nlohmann::json::array();
    nlohmann::json density = nlohmann::json::array();
    for (const IterationTrace& t : result.trace) {
        delta.push_back(t.avg_movement);
        entropy.push_back(t.entropy);
        density.push_back(t.mean_density);
    }
    j["avg_movement"] = std::move(delta);
    j["entropy"] = std::move(entropy);
    j["mean_density"] = std::move(density);

    nlohmann::json config;
    config["sigma"] = cfg.sigma;
    if (algorithm == "hypegbms") config["curvature"] = cfg.curvature.c();
    config["epsilon"] = cfg.epsilon;
    config["gamma"] = cfg.gamma;
    config["max_iter"] = cfg.max_iter;
    config["scale"] = cfg.scale;
    config["entropy_bins_fraction"] = cfg.entropy_bins_fraction;
    config["seed"] = cfg.seed;
    j["config"] = std::move(config);

    if (ground_truth) {
        j["ari"] = ari(result.labels, *ground_truth);
        j["nmi"] = nmi(result.labels, *ground_truth);
    }
    j["wall_time_seconds"] = wall_time_seconds;
    return j;
}

} // namespace hypegbms
