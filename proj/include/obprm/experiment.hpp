#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "obprm/format.hpp"
#include "obprm/geometry.hpp"
#include "obprm/montecarlo.hpp"
#include "obprm/sampler.hpp"
#include "obprm/shape_io.hpp"
#include "obprm/stats.hpp"
#include "obprm/valuations.hpp"

namespace obprm {

struct ExperimentConfig {
    std::vector<std::string> obstacle_paths;
    double delta = 1.0;
    int rays = 200;
    std::optional<double> ray_length;  // nullopt = "auto" (diameter + 2 delta)
    int replications = 100;
    std::int64_t drop_trials = 100000;
    std::uint64_t seed = 0;
    std::string raw_text;  // exact file bytes, echoed into the report

    void validate() const {
        if (obstacle_paths.empty())
            throw std::invalid_argument("ExperimentConfig: 'obstacles' must be nonempty");
        if (!(delta > 0.0)) throw std::invalid_argument("ExperimentConfig: 'delta' must be positive");
        if (rays < 1) throw std::invalid_argument("ExperimentConfig: 'rays' must be >= 1");
        if (ray_length && !(*ray_length > delta))
            throw std::invalid_argument("ExperimentConfig: 'ray_length' must exceed 'delta'");
        if (replications < 1)
            throw std::invalid_argument("ExperimentConfig: 'replications' must be >= 1");
        if (drop_trials < 1)
            throw std::invalid_argument("ExperimentConfig: 'drop_trials' must be >= 1");
    }
};

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.raw_text = text;
    if (!j.contains("obstacles") || !j["obstacles"].is_array())
        throw std::invalid_argument("config: 'obstacles' must be an array of shape-file paths");
    for (const auto& p : j["obstacles"]) cfg.obstacle_paths.push_back(p.get<std::string>());
    if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
    if (j.contains("rays")) cfg.rays = j["rays"].get<int>();
    if (j.contains("ray_length")) {
        if (j["ray_length"].is_string()) {
            if (j["ray_length"].get<std::string>() != "auto")
                throw std::invalid_argument("config: 'ray_length' must be a number or \"auto\"");
        } else {
            cfg.ray_length = j["ray_length"].get<double>();
        }
    }
    if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
    if (j.contains("drop_trials")) cfg.drop_trials = j["drop_trials"].get<std::int64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

struct ObstacleResult {
    std::string name;
    std::string path;
    int dimension = 2;
    double volume = 0.0;   // union n-volume (area in 2D)
    double surface = 0.0;  // union boundary measure (perimeter in 2D)
    double diameter = 0.0;
    double ray_length = 0.0;
    double predicted_paper = 0.0;
    double predicted_corrected = 0.0;
    bool paper_exceeds_unity = false;
    bool corrected_exceeds_unity = false;
    TrialStats obprm;
    TrialStats drop;
};

struct ExperimentReport {
    std::string config_echo;
    std::uint64_t seed = 0;
    double delta = 0.0;
    int rays = 0;
    std::optional<double> ray_length;
    int replications = 0;
    std::int64_t drop_trials = 0;
    std::vector<ObstacleResult> obstacles;
    // Off by default: wall-clock stamps would break the byte-identical
    // report contract across reruns.
    std::optional<std::pair<std::string, std::string>> timestamps;
};

namespace detail {

inline double set_volume(const PolyconvexSet& s) {
    if (s.dimension() == 2) return union_area_2d(s.parts());
    double total = 0.0;
    for (std::size_t i = 0; i < s.parts().size(); ++i) {
        for (std::size_t j = i + 1; j < s.parts().size(); ++j)
            if (intersection_polytope(s.parts()[i], s.parts()[j]))
                throw std::domain_error("set_volume: overlapping 3D parts are unsupported");
        total += s.parts()[i].volume();
    }
    return total;
}

inline double set_surface(const PolyconvexSet& s) {
    if (s.dimension() == 2) return union_boundary_measure_2d(s.parts());
    double total = 0.0;
    for (std::size_t i = 0; i < s.parts().size(); ++i) {
        for (std::size_t j = i + 1; j < s.parts().size(); ++j)
            if (intersection_polytope(s.parts()[i], s.parts()[j]))
                throw std::domain_error("set_surface: overlapping 3D parts are unsupported");
        total += s.parts()[i].surface_measure();
    }
    return total;
}

inline std::string path_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

}  // namespace detail

// Full pipeline for one config: load every obstacle, compute its geometry
// summary and both closed-form predictions, then the OBPRM replication
// estimate and the segment-drop estimate. Obstacles keep config order and
// every estimate derives from (seed, obstacle index), so the report is a
// pure function of (config, seed) regardless of thread count.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, int threads = 1) {
    cfg.validate();
    SeededRng rng(cfg.seed);

    ExperimentReport report;
    report.config_echo = cfg.raw_text;
    report.seed = cfg.seed;
    report.delta = cfg.delta;
    report.rays = cfg.rays;
    report.ray_length = cfg.ray_length;
    report.replications = cfg.replications;
    report.drop_trials = cfg.drop_trials;

    for (std::size_t i = 0; i < cfg.obstacle_paths.size(); ++i) {
        PolyconvexSet shape = [&] {
            try {
                return load_shape(cfg.obstacle_paths[i]);
            } catch (const std::exception& e) {
                throw std::runtime_error("obstacle " + std::to_string(i) + ": " + e.what());
            }
        }();

        ObstacleResult r;
        r.name = detail::path_stem(cfg.obstacle_paths[i]);
        r.path = cfg.obstacle_paths[i];
        r.dimension = shape.dimension();
        r.volume = detail::set_volume(shape);
        r.surface = detail::set_surface(shape);
        r.diameter = shape.diameter();
        r.ray_length = cfg.ray_length ? *cfg.ray_length : r.diameter + 2.0 * cfg.delta;

        PredictionInput pin;
        pin.dimension = r.dimension;
        pin.boundary_measure = r.surface;
        pin.delta = cfg.delta;
        pin.d = r.diameter + 2.0 * cfg.delta;
        pin.variant = PredictionVariant::PaperLiteral;
        r.predicted_paper = predicted_success(pin);
        pin.variant = PredictionVariant::RadiusCorrected;
        r.predicted_corrected = predicted_success(pin);
        r.paper_exceeds_unity = r.predicted_paper > 1.0;
        r.corrected_exceeds_unity = r.predicted_corrected > 1.0;

        ObprmParams params;
        params.num_rays = cfg.rays;
        params.ray_length = r.ray_length;
        params.delta = cfg.delta;
        params.max_iterations = std::max(64, bisection_iteration_bound(r.ray_length, cfg.delta));
        r.obprm = replicate_obprm(shape, params, cfg.replications,
                                  rng.derive_seed(2 * static_cast<std::uint64_t>(i)), threads);
        r.drop = estimate_hit_probability(shape, cfg.delta, cfg.drop_trials,
                                          rng.derive_seed(2 * static_cast<std::uint64_t>(i) + 1),
                                          threads);
        report.obstacles.push_back(std::move(r));
    }
    return report;
}

inline nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["config_echo"] = report.config_echo;
    j["seed"] = report.seed;
    j["parameters"] = {{"delta", round_g12(report.delta)},
                       {"rays", report.rays},
                       {"replications", report.replications},
                       {"drop_trials", report.drop_trials}};
    if (report.ray_length)
        j["parameters"]["ray_length"] = round_g12(*report.ray_length);
    else
        j["parameters"]["ray_length"] = "auto";
    if (report.timestamps) {
        j["timestamps"] = {{"started", report.timestamps->first},
                           {"finished", report.timestamps->second}};
    }
    j["obstacles"] = nlohmann::ordered_json::array();
    for (const auto& r : report.obstacles) {
        nlohmann::ordered_json jo;
        jo["name"] = r.name;
        jo["path"] = r.path;
        jo["dimension"] = r.dimension;
        jo["volume"] = round_g12(r.volume);
        jo["surface"] = round_g12(r.surface);
        jo["diameter"] = round_g12(r.diameter);
        jo["ray_length"] = round_g12(r.ray_length);
        jo["predicted"] = {{"paper", round_g12(r.predicted_paper)},
                           {"corrected", round_g12(r.predicted_corrected)},
                           {"paper_exceeds_unity", r.paper_exceeds_unity},
                           {"corrected_exceeds_unity", r.corrected_exceeds_unity}};
        jo["obprm"] = {{"trials", r.obprm.trials},
                       {"successes", r.obprm.successes},
                       {"rate", round_g12(r.obprm.point_estimate)},
                       {"ci_low", round_g12(r.obprm.ci_low)},
                       {"ci_high", round_g12(r.obprm.ci_high)}};
        jo["segment_drop"] = {{"trials", r.drop.trials},
                              {"successes", r.drop.successes},
                              {"rate", round_g12(r.drop.point_estimate)},
                              {"ci_low", round_g12(r.drop.ci_low)},
                              {"ci_high", round_g12(r.drop.ci_high)}};
        j["obstacles"].push_back(std::move(jo));
    }
    return j;
}

inline std::string summary_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "name,area,perimeter,diameter,predicted_paper,predicted_corrected,"
           "obprm_rate,obprm_ci,drop_rate,drop_ci\n";
    for (const auto& r : report.obstacles) {
        out << r.name << "," << fmt_g12(r.volume) << "," << fmt_g12(r.surface) << ","
            << fmt_g12(r.diameter) << "," << fmt_g12(r.predicted_paper) << ","
            << fmt_g12(r.predicted_corrected) << "," << fmt_g12(r.obprm.point_estimate) << ","
            << fmt_g12(r.obprm.ci_low) << ";" << fmt_g12(r.obprm.ci_high) << ","
            << fmt_g12(r.drop.point_estimate) << "," << fmt_g12(r.drop.ci_low) << ";"
            << fmt_g12(r.drop.ci_high) << "\n";
    }
    return out.str();
}

// Writes report.json (stable key order) and summary.csv into dir.
inline void write_report(const ExperimentReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(std::filesystem::path(dir) / "report.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report.json in " + dir);
        out << report_to_json(report).dump(2) << "\n";
    }
    {
        std::ofstream out(std::filesystem::path(dir) / "summary.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write summary.csv in " + dir);
        out << summary_csv(report);
    }
}

}  // namespace obprm
