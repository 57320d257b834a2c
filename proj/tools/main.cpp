// Command-line front end: predict, minkowski, obprm, drop-segments, crofton,
// plan, experiment. Exit codes: 0 success, 1 runtime/IO failure, 2 usage.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obprm/cspace.hpp"
#include "obprm/experiment.hpp"
#include "obprm/format.hpp"
#include "obprm/geometry.hpp"
#include "obprm/montecarlo.hpp"
#include "obprm/roadmap.hpp"
#include "obprm/sampler.hpp"
#include "obprm/shape_io.hpp"
#include "obprm/svg.hpp"
#include "obprm/valuations.hpp"

namespace {

using namespace obprm;

Vec parse_point(const std::string& text) {
    std::vector<double> coords;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) coords.push_back(std::stod(item));
    if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("point must have 1.." + std::to_string(kMaxDim) + " coordinates");
    Vec v(static_cast<int>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<int>(i)] = coords[i];
    return v;
}

const char* status_name(RayOutcome::Status s) {
    switch (s) {
        case RayOutcome::Status::FreeNode: return "free_node";
        case RayOutcome::Status::EndpointInsideObstacle: return "endpoint_inside";
        default: return "no_boundary_crossing";
    }
}

void write_nodes_csv(const NodeBatch& batch, int dim, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    const char* axes[] = {"x", "y", "z", "w"};
    out << "ray_index";
    for (int i = 0; i < dim; ++i) out << ",dir_" << axes[std::min(i, 3)];
    out << ",status";
    for (int i = 0; i < dim; ++i) out << ",node_" << axes[std::min(i, 3)];
    out << ",iterations\n";
    for (std::size_t r = 0; r < batch.outcomes.size(); ++r) {
        const auto& o = batch.outcomes[r];
        out << r;
        for (int i = 0; i < dim; ++i) out << "," << fmt_g12(o.direction[i]);
        out << "," << status_name(o.status);
        for (int i = 0; i < dim; ++i) {
            out << ",";
            if (o.status == RayOutcome::Status::FreeNode) out << fmt_g12(o.node[i]);
        }
        out << "," << o.iterations << "\n";
    }
}

std::vector<Point> read_nodes_csv(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open samples file: " + path);
    std::vector<Point> nodes;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        // Layout: ray_index, dir x dim, status, node x dim, iterations.
        if (cells.size() < static_cast<std::size_t>(2 * dim) + 3) continue;
        if (cells[1 + dim] != "free_node") continue;
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = std::stod(cells[2 + dim + i]);
        nodes.push_back(v);
    }
    return nodes;
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Obstacle-surface sampling, integral-geometry predictions and Monte Carlo checks"};
    app.require_subcommand(1);

    // predict
    auto* predict = app.add_subcommand("predict", "Closed-form needle-drop success probability");
    int p_dim = 2;
    double p_boundary = 0.0, p_delta = 0.0, p_d = 0.0;
    std::string p_variant = "paper";
    predict->add_option("--dim", p_dim, "Space dimension")->required()->check(CLI::Range(1, kMaxDim));
    predict->add_option("--boundary", p_boundary, "Boundary measure of the obstacle")
        ->required()
        ->check(CLI::PositiveNumber);
    predict->add_option("--delta", p_delta, "Needle length / minimum step")
        ->required()
        ->check(CLI::PositiveNumber);
    predict->add_option("--bounding-diameter", p_d, "Conditioning ball diameter")
        ->required()
        ->check(CLI::PositiveNumber);
    predict->add_option("--variant", p_variant, "Formula variant")
        ->check(CLI::IsMember({"paper", "corrected"}));

    // minkowski
    auto* mink = app.add_subcommand("minkowski", "Translational C-obstacle of obstacle and robot");
    std::string m_obstacle, m_robot, m_out;
    mink->add_option("obstacle", m_obstacle, "Obstacle shape JSON")->required()->check(CLI::ExistingFile);
    mink->add_option("robot", m_robot, "Robot shape JSON (reference point at origin)")
        ->required()
        ->check(CLI::ExistingFile);
    mink->add_option("--out", m_out, "Output shape JSON path")->required();

    // obprm
    auto* ob = app.add_subcommand("obprm", "Generate free nodes near the obstacle surface");
    std::string o_shape, o_csv, o_svg;
    int o_rays = 200;
    double o_delta = 0.0;
    std::optional<double> o_len;
    std::uint64_t o_seed = 0;
    ob->add_option("--shape", o_shape, "Obstacle shape JSON")->required()->check(CLI::ExistingFile);
    ob->add_option("--rays", o_rays, "Number of rays")->check(CLI::PositiveNumber);
    ob->add_option("--delta", o_delta, "Minimum partition size")->required()->check(CLI::PositiveNumber);
    ob->add_option("--ray-length", o_len, "Ray length (default: diameter + 2 delta)")
        ->check(CLI::PositiveNumber);
    ob->add_option("--seed", o_seed, "Random seed");
    ob->add_option("--out", o_csv, "Node CSV output path")->required();
    ob->add_option("--svg", o_svg, "Optional SVG figure path (2D only)");

    // drop-segments
    auto* drop = app.add_subcommand("drop-segments", "Needle-drop hit-probability estimate");
    std::string d_shape;
    double d_delta = 0.0;
    std::int64_t d_trials = 100000;
    std::uint64_t d_seed = 0;
    int d_threads = 1;
    drop->add_option("--shape", d_shape, "Obstacle shape JSON")->required()->check(CLI::ExistingFile);
    drop->add_option("--delta", d_delta, "Needle length")->required()->check(CLI::PositiveNumber);
    drop->add_option("--trials", d_trials, "Trial count")->check(CLI::PositiveNumber);
    drop->add_option("--seed", d_seed, "Random seed");
    drop->add_option("--threads", d_threads, "Worker count")->check(CLI::Range(1, 64));

    // crofton
    auto* cro = app.add_subcommand("crofton", "Random-line perimeter estimate (2D)");
    std::string c_shape;
    std::int64_t c_lines = 100000;
    std::uint64_t c_seed = 0;
    cro->add_option("--shape", c_shape, "Shape JSON")->required()->check(CLI::ExistingFile);
    cro->add_option("--lines", c_lines, "Number of random lines")->check(CLI::PositiveNumber);
    cro->add_option("--seed", c_seed, "Random seed");

    // plan
    auto* plan = app.add_subcommand("plan", "Build a roadmap over samples and answer one query");
    std::string pl_env, pl_samples, pl_start, pl_goal;
    int pl_k = 8;
    std::optional<double> pl_resolution;
    plan->add_option("--env", pl_env, "Environment shape JSON")->required()->check(CLI::ExistingFile);
    plan->add_option("--samples", pl_samples, "Node CSV from the obprm subcommand")
        ->required()
        ->check(CLI::ExistingFile);
    plan->add_option("--k", pl_k, "Neighbors per milestone")->check(CLI::PositiveNumber);
    plan->add_option("--start", pl_start, "Start point, comma separated")->required();
    plan->add_option("--goal", pl_goal, "Goal point, comma separated")->required();
    plan->add_option("--resolution", pl_resolution, "Collision-check spacing")
        ->check(CLI::PositiveNumber);

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a full experiment config");
    std::string e_config, e_out = ".";
    int e_threads = 1;
    std::optional<std::uint64_t> e_seed;
    bool e_timestamps = false;
    exp->add_option("--config", e_config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    exp->add_option("--out", e_out, "Output directory");
    exp->add_option("--threads", e_threads, "Worker count (results do not depend on it)")
        ->check(CLI::Range(1, 64));
    exp->add_option("--seed", e_seed, "Override the config seed");
    exp->add_flag("--timestamps", e_timestamps, "Record wall-clock timestamps in report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*predict) {
            PredictionInput in;
            in.dimension = p_dim;
            in.boundary_measure = p_boundary;
            in.delta = p_delta;
            in.d = p_d;
            in.variant = p_variant == "corrected" ? PredictionVariant::RadiusCorrected
                                                  : PredictionVariant::PaperLiteral;
            std::cout << fmt_g12(predicted_success(in)) << "\n";
        } else if (*mink) {
            PolyconvexSet obstacle = load_shape(m_obstacle);
            PolyconvexSet robot_set = load_shape(m_robot);
            if (robot_set.parts().size() != 1)
                throw std::runtime_error("robot shape must consist of a single convex part");
            RobotShape robot(robot_set.parts()[0]);
            PolyconvexSet cobs = minkowski_cobstacle(obstacle, robot);
            save_shape(cobs, m_out);
            double vol = 0.0, surf = 0.0;
            for (const auto& part : cobs.parts()) {
                vol += part.volume();
                surf += part.surface_measure();
            }
            std::cout << "volume=" << fmt_g12(vol) << ", surface=" << fmt_g12(surf) << "\n";
        } else if (*ob) {
            PolyconvexSet shape = load_shape(o_shape);
            ObprmParams params;
            params.num_rays = o_rays;
            params.delta = o_delta;
            params.ray_length = o_len ? *o_len : shape.diameter() + 2.0 * o_delta;
            params.max_iterations = std::max(64, bisection_iteration_bound(params.ray_length, o_delta));
            NodeBatch batch = generate_nodes(shape, params, o_seed);
            write_nodes_csv(batch, shape.dimension(), o_csv);
            if (!o_svg.empty()) {
                SvgScene scene = SvgScene::for_set(shape);
                for (const auto& o : batch.outcomes)
                    if (o.status == RayOutcome::Status::FreeNode) scene.add_marker(o.node);
                scene.legend = "free nodes: " + std::to_string(batch.success_count) + "/" +
                               std::to_string(params.num_rays);
                write_svg(scene, o_svg);
            }
            std::cout << "success_rate=" << fmt_g12(batch.success_rate) << "\n";
        } else if (*drop) {
            PolyconvexSet shape = load_shape(d_shape);
            TrialStats stats = estimate_hit_probability(shape, d_delta, d_trials, d_seed, d_threads);
            std::cout << "rate=" << fmt_g12(stats.point_estimate) << " ci=["
                      << fmt_g12(stats.ci_low) << "," << fmt_g12(stats.ci_high)
                      << "] trials=" << stats.trials << "\n";
        } else if (*cro) {
            PolyconvexSet shape = load_shape(c_shape);
            std::cout << fmt_g12(crofton_estimate(shape, c_lines, c_seed)) << "\n";
        } else if (*plan) {
            PolyconvexSet env = load_shape(pl_env);
            Point start = parse_point(pl_start);
            Point goal = parse_point(pl_goal);
            if (start.dim() != env.dimension() || goal.dim() != env.dimension())
                throw std::runtime_error("start/goal dimension does not match the environment");
            std::vector<Point> samples = read_nodes_csv(pl_samples, env.dimension());
            double resolution = pl_resolution ? *pl_resolution : 0.01 * (env.diameter() + 1.0);
            Roadmap roadmap = build_roadmap(env, samples, pl_k, resolution);
            auto path = query(roadmap, env, Query{start, goal}, resolution);
            if (!path) {
                std::cout << "NO PATH\n";
            } else {
                for (const auto& p : *path) {
                    for (int i = 0; i < p.dim(); ++i) std::cout << (i ? "," : "") << fmt_g12(p[i]);
                    std::cout << "\n";
                }
            }
        } else if (*exp) {
            ExperimentConfig cfg = load_experiment_config(e_config);
            if (e_seed) cfg.seed = *e_seed;
            std::string started = iso_timestamp();
            ExperimentReport report = run_experiment(cfg, e_threads);
            if (e_timestamps) report.timestamps = {started, iso_timestamp()};
            write_report(report, e_out);
            std::cout << "wrote " << e_out << "/report.json and " << e_out << "/summary.csv\n";
        }
    } catch (const ShapeFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
