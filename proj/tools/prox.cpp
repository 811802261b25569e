// Experiment runner: loads JSON configs, executes PPA / gradient-flow runs
// with runtime certificates, and emits CSV traces plus JSON reports.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "prox0/diagnostics.hpp"
#include "prox0/errors.hpp"
#include "prox0/io.hpp"

namespace fs = std::filesystem;
using namespace prox0;

namespace {

int log_level() {
    const char* env = std::getenv("PROX_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "error") return 0;
    if (v == "debug") return 2;
    return 1;  // info
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[prox] %s\n", msg.c_str());
}

MetricTree default_tree() {
    // two pairs of equal sibling leaf edges; has a nontrivial automorphism
    return MetricTree({"r", "a", "b", "c", "d", "e"},
                      {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 0.5}, {3, 4, 2.0}, {3, 5, 2.0}});
}

int exit_code_from_certificates(const std::map<std::string, CertificateReport>& certs) {
    for (const auto& [name, rep] : certs)
        if (!rep.skipped && !rep.pass) {
            std::fprintf(stderr, "[prox] certificate '%s' failed: worst %.3g at index %ld\n",
                         name.c_str(), rep.worst, rep.worst_index);
            return 2;
        }
    return 0;
}

int cmd_run(const std::string& config_path, std::string out_dir) {
    const json config_json = json::parse(read_text_file(config_path));
    const ExperimentConfig cfg = config_from_json(config_json);
    if (out_dir.empty()) out_dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    fs::create_directories(out_dir);
    const std::string hash = config_hash_hex(config_json);
    log_info("config " + config_path + " hash " + hash);

    std::map<std::string, CertificateReport> all_certs;
    std::vector<std::string> outputs;
    const bool both = cfg.algorithm == "both";

    if (cfg.algorithm == "ppa" || both) {
        const Trace trace =
            run_ppa(cfg.space, cfg.functional, cfg.start, *cfg.schedule, cfg.stop, cfg.resolvent);
        const std::string csv_name = both ? "trace_ppa.csv" : "trace.csv";
        write_text_file(out_dir + "/" + csv_name, trace_csv_string(cfg.space, trace));
        outputs.push_back(csv_name);
        for (const auto& [name, rep] : trace.certificates) all_certs["ppa." + name] = rep;
        log_info("ppa: " + std::to_string(trace.steps()) + " steps, stop=" + trace.stop_reason);
    }
    if (cfg.algorithm == "flow" || both) {
        const Trace trace =
            flow_convergence_run(cfg.space, cfg.functional, cfg.start, cfg.lambda_grid, cfg.flow);
        const std::string csv_name = both ? "trace_flow.csv" : "trace.csv";
        write_text_file(out_dir + "/" + csv_name, trace_csv_string(cfg.space, trace));
        outputs.push_back(csv_name);
        for (const auto& [name, rep] : trace.certificates) all_certs["flow." + name] = rep;
        log_info("flow: grid of " + std::to_string(cfg.lambda_grid.size()));
    }

    json report;
    report["config_hash"] = hash;
    report["certificates"] = certificates_to_json(all_certs);
    write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
    outputs.push_back("report.json");

    write_text_file(out_dir + "/manifest.json",
                    manifest_json(hash, all_certs, outputs).dump(2) + "\n");
    return exit_code_from_certificates(all_certs);
}

int cmd_mean(const std::string& points_path, const std::string& space_flag, int p, double lambda,
             long iterations, std::string out_dir) {
    const json pj = json::parse(read_text_file(points_path));
    if (!pj.is_object() || !pj.contains("space") || !pj.contains("points"))
        throw ValidationError("points file: expected {\"space\": ..., \"points\": [...]}");
    const Space space = space_from_json(pj["space"]);
    if (!space_flag.empty() && space_flag != space_kind_name(space.kind()))
        throw ValidationError("--space disagrees with the points file (" + space_flag + " vs " +
                              space_kind_name(space.kind()) + ")");
    std::vector<Point> points;
    for (const auto& item : pj["points"]) points.push_back(point_from_json(space, item));
    if (points.empty()) throw ValidationError("points file: needs at least one point");

    const double w = 1.0 / static_cast<double>(points.size());
    std::vector<WeightedTerm> terms;
    for (const auto& a : points) {
        if (p == 2)
            terms.push_back({w, squared_distance(space, a, 2.0)});  // (1/m) d^2 per point
        else
            terms.push_back({w, distance_to_point(space, a, 1.0)});
    }
    const Functional objective = weighted_sum(space, std::move(terms));

    StopRule stop;
    stop.max_iterations = iterations;
    stop.step_distance_below = 1e-12;
    const Trace trace =
        run_ppa(space, objective, points.front(), StepSchedule::constant(lambda), stop);

    if (out_dir.empty()) out_dir = ".";
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/trace.csv", trace_csv_string(space, trace));
    json result;
    result["point"] = point_to_json(space, trace.iterates.back());
    result["objective_value"] = trace.values.back();
    result["iterations"] = trace.steps();
    result["p"] = p;
    write_text_file(out_dir + "/mean.json", result.dump(2) + "\n");
    log_info("mean: " + std::to_string(trace.steps()) + " steps, f = " +
             std::to_string(trace.values.back()));
    std::printf("%s\n", result["point"].dump().c_str());
    return 0;
}

int cmd_verify(const std::string& space_flag, int dimension, long budget, std::uint64_t seed,
               const std::string& tree_path, std::string out_dir, bool serial) {
    std::vector<Space> spaces;
    auto add_space = [&](const std::string& kind) {
        if (kind == "euclidean") spaces.push_back(Space::euclidean(dimension));
        if (kind == "hyperbolic") spaces.push_back(Space::hyperbolic(dimension));
        if (kind == "spd") spaces.push_back(Space::spd(dimension));
        if (kind == "tree") {
            if (tree_path.empty())
                spaces.push_back(Space::metric_tree(default_tree()));
            else
                spaces.push_back(space_from_json(json::parse(read_text_file(tree_path))));
        }
    };
    if (space_flag == "all") {
        for (const char* k : {"euclidean", "hyperbolic", "spd", "tree"}) add_space(k);
    } else {
        add_space(space_flag);
        if (spaces.empty()) throw ValidationError("verify: unknown space '" + space_flag + "'");
    }

    const ExecMode mode = serial ? ExecMode::Serial : ExecMode::Parallel;
    json report = json::array();
    bool all_pass = true;
    for (const Space& s : spaces) {
        const auto results = run_all_sweeps(s, budget, seed, mode);
        for (const auto& r : results) {
            std::printf("[%s] %-34s %-10s worst %12.3e (tol %.0e, %ld samples)\n",
                        r.pass ? "PASS" : "FAIL", r.name.c_str(), space_kind_name(s.kind()),
                        r.worst, r.tolerance, r.samples);
            if (!r.pass) {
                all_pass = false;
                std::printf("       violating tuple: %s\n", r.worst_detail.c_str());
            }
            json item = sweep_result_to_json(r);
            item["space"] = space_kind_name(s.kind());
            report.push_back(std::move(item));
        }
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text_file(out_dir + "/verify_report.json", report.dump(2) + "\n");
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proximal point algorithm and gradient flows on Hadamard spaces"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "execute a PPA/flow experiment from a JSON config");
    run->add_option("--config", config_path, "experiment config path")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");

    std::string points_path, mean_space;
    int mean_p = 2;
    double mean_lambda = 1.0;
    long mean_iters = 100;
    std::string mean_out;
    auto* mean = app.add_subcommand("mean", "Frechet mean (p=2) or geometric median (p=1)");
    mean->add_option("points", points_path, "JSON file with {space, points}")->required();
    mean->add_option("--space", mean_space, "expected space kind (cross-check)");
    mean->add_option("--p", mean_p, "exponent: 2 = mean, 1 = median")
        ->check(CLI::IsMember({1, 2}));
    mean->add_option("--lambda", mean_lambda, "constant step size");
    mean->add_option("--iters", mean_iters, "iteration cap");
    mean->add_option("--out", mean_out, "output directory");

    std::string verify_space = "all", verify_tree, verify_out;
    int verify_dim = 2;
    long verify_budget = 1000;
    std::uint64_t verify_seed = 0;
    bool verify_serial = false;
    auto* verify = app.add_subcommand("verify", "run the sampled invariant suites");
    verify->add_option("--space", verify_space, "euclidean|hyperbolic|spd|tree|all");
    verify->add_option("--dimension", verify_dim, "dimension / matrix order");
    verify->add_option("--budget", verify_budget, "samples per sweep")->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--tree", verify_tree, "tree description JSON (tree space)");
    verify->add_option("--out", verify_out, "directory for verify_report.json");
    verify->add_flag("--serial", verify_serial, "use the serial reference kernels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (mean->parsed())
            return cmd_mean(points_path, mean_space, mean_p, mean_lambda, mean_iters, mean_out);
        if (verify->parsed())
            return cmd_verify(verify_space, verify_dim, verify_budget, verify_seed, verify_tree,
                              verify_out, verify_serial);
    } catch (const Error& e) {
        std::fprintf(stderr, "[prox] error: %s\n", e.what());
        return 1;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "[prox] config error: %s\n", e.what());
        return 1;
    }
    return 1;
}
