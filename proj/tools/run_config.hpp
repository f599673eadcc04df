#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgseg/scenarios.hpp"
#include "qgseg/seqgen.hpp"

namespace qgseg::cli {

/// Everything `run` and `generate` need, from a scenario name or an inline spec.
///
/// Config file schema (JSON):
///
///     {
///       "scenario": "q1_xyz_pure",            // or "spec": {...}, not both
///       "spec": {
///         "name": "custom",
///         "observables": ["X", "Y", "Z*Z"],   // '*' joins tensor factors
///         "pattern": "cyclic",                // or explicit [0, 1, 2, ...]
///         "segments": [
///           {"length": 1000, "ket": [[1, 0], [0, 2]], "normalize": true},
///           {"length": 1000, "density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
///         ]
///       },
///       "seed": 42,                           // or "auto"
///       "trials": 1,
///       "out_dir": "runs",
///       "recursive": false, "threshold": 0.01, "min_segment": 50,
///       "tolerance": 100
///     }
///
/// Complex numbers are [re, im] pairs; a bare number is taken as real.
struct RunConfig {
    std::optional<std::string> scenario;
    std::optional<nlohmann::json> inline_spec;
    std::optional<std::uint64_t> seed;  // nullopt: draw from system entropy
    std::size_t trials = 1;
    std::filesystem::path out_dir = ".";
    bool recursive = false;
    double threshold = 0.01;
    std::size_t min_segment = 50;
    std::size_t tolerance = 100;
};

RunConfig parse_run_config(const nlohmann::json &doc);
RunConfig load_run_config(const std::filesystem::path &path);

/// A validated program/schedule pair ready to generate from.
struct Job {
    std::string name;
    ObservableProgram program;
    StateSchedule schedule;
    std::vector<std::size_t> true_changepoints;
    std::vector<std::string> distinguishing_labels;
    std::vector<std::string> notes;
};

/// Resolves and validates the config's scenario or inline spec. Throws
/// ValidationError before anything is generated.
Job resolve_job(const RunConfig &config);
Job job_from_scenario(const Scenario &scenario);
Job job_from_spec(const nlohmann::json &spec);

}  // namespace qgseg::cli
