#pragma once

#include <json.hpp>
#include <map>
#include <string>

#include "prox0/flow.hpp"
#include "prox0/sweeps.hpp"

namespace prox0 {

inline constexpr const char* kArtifactVersion = "0.1.0";

using json = nlohmann::json;

// All parsers are strict: unknown fields raise ValidationError, so a typo in
// an experiment config fails loudly instead of silently changing the run.

json space_to_json(const Space& s);
Space space_from_json(const json& j);

json point_to_json(const Space& s, const Point& p);
Point point_from_json(const Space& s, const json& j);

json convex_set_to_json(const Space& s, const ConvexSet& set);
ConvexSet convex_set_from_json(const Space& s, const json& j);

json ray_to_json(const Space& s, const GeodesicRay& ray);
GeodesicRay ray_from_json(const Space& s, const json& j);

json isometry_to_json(const Space& s, const Isometry& iso);
Isometry isometry_from_json(const Space& s, const json& j);

json functional_to_json(const Space& s, const Functional& f);
Functional functional_from_json(const Space& s, const json& j);

json schedule_to_json(const StepSchedule& sched);
StepSchedule schedule_from_json(const json& j);

StopRule stop_rule_from_json(const json& j);
ResolventOptions resolvent_options_from_json(const json& j);
FlowOptions flow_options_from_json(const json& j);

struct ExperimentConfig {
    Space space;
    Functional functional;
    std::string algorithm;  // "ppa" | "flow" | "both"
    std::optional<StepSchedule> schedule;
    std::vector<double> lambda_grid;
    Point start;
    StopRule stop;
    ResolventOptions resolvent;
    FlowOptions flow;
    std::uint64_t seed = 0;
    std::string out_dir;  // optional in the file; the CLI may override
};

ExperimentConfig config_from_json(const json& j);

// FNV-1a over the canonical dump (nlohmann objects keep keys sorted, so the
// hash is invariant under field reordering in the source file).
std::string config_hash_hex(const json& j);

std::string trace_csv_string(const Space& s, const Trace& trace);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

json certificate_to_json(const CertificateReport& rep);
json certificates_to_json(const std::map<std::string, CertificateReport>& reps);
json sweep_result_to_json(const SweepResult& r);

json manifest_json(const std::string& config_hash,
                   const std::map<std::string, CertificateReport>& certificates,
                   const std::vector<std::string>& outputs);

}  // namespace prox0
