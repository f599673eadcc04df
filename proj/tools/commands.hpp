#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgseg/segment.hpp"
#include "run_config.hpp"

namespace qgseg::cli {

/// {estimated_changepoint, argmax_value, argmax_observable, no_signal, seed}
nlohmann::json summary_json(const SegmentationResult &result, std::uint64_t seed);

struct TrialOutcome {
    std::uint64_t seed;
    SegmentationResult result;
    std::vector<std::size_t> changepoints;  // recursive mode only
};

struct Aggregate {
    double median_estimate;
    double median_abs_error;
    double success_rate;
    std::size_t no_signal_count;
};

/// Statistics over trial estimates against the nearest true changing index.
/// Estimates are sorted first, so the result is independent of trial order.
Aggregate aggregate_estimates(std::vector<std::size_t> estimates, std::span<const std::size_t> true_changepoints,
                              std::size_t no_signal_count, std::size_t tolerance);

struct RunReport {
    std::uint64_t base_seed;
    std::vector<TrialOutcome> trials;
    std::vector<std::filesystem::path> written;
    std::optional<nlohmann::json> aggregate;
};

/// Runs every trial t with seed base+t and writes, per trial,
/// `<name>_seed<S>_profile.csv` and `<name>_seed<S>_summary.json` into
/// config.out_dir; with trials > 1 also `<name>_aggregate.json`.
RunReport cmd_run(const RunConfig &config, std::ostream &log);

/// Writes `<name>_seed<S>.seq` (one file per trial, seeds base+t) in the
/// sequence text format and returns the paths.
std::vector<std::filesystem::path> cmd_generate(const RunConfig &config, std::ostream &log);

struct SegmentFileOptions {
    /// Catalog as observable strings ("X", "Z*Z"); empty means use the file's
    /// `# program=` header.
    std::vector<std::string> observables;
    std::optional<std::filesystem::path> out_dir;
    bool recursive = false;
    double threshold = kDefaultRecursiveThreshold;
    std::size_t min_segment = kDefaultMinSegment;
};

/// Segments an outcome file and returns the summary JSON (with "changepoints"
/// in recursive mode). Writes the profile CSV and summary to out_dir if set.
nlohmann::json cmd_segment_file(const std::filesystem::path &path, const SegmentFileOptions &options);

/// One line per scenario: name, figure alias, n, i_c, distinguishing labels.
void cmd_list_scenarios(std::ostream &out);

}  // namespace qgseg::cli
