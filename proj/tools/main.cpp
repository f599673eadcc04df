#include <charconv>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qgseg/scenarios.hpp"

namespace {

using namespace qgseg;
using namespace qgseg::cli;

struct RunFlags {
    std::string scenario;
    std::string config;
    std::string seed;
    std::optional<std::size_t> trials;
    std::string out_dir;
    bool recursive = false;
    std::optional<double> threshold;
    std::optional<std::size_t> min_segment;
    std::optional<std::size_t> tolerance;
};

void add_run_flags(CLI::App *cmd, RunFlags &f, bool with_segmentation) {
    cmd->add_option("--scenario", f.scenario, "Scenario name or alias (see list-scenarios)");
    cmd->add_option("--config", f.config, "JSON run configuration file");
    cmd->add_option("--seed", f.seed, "Base seed (integer) or 'auto'");
    cmd->add_option("--trials", f.trials, "Number of trials; trial t uses seed+t")->check(CLI::PositiveNumber);
    cmd->add_option("--out-dir", f.out_dir, "Output directory");
    if (with_segmentation) {
        cmd->add_flag("--recursive", f.recursive, "Also run recursive multi-changepoint segmentation");
        cmd->add_option("--threshold", f.threshold, "Recursive split threshold in nats (default 0.01)");
        cmd->add_option("--min-segment", f.min_segment, "Recursive minimum segment length (default 50)");
        cmd->add_option("--tolerance", f.tolerance, "Success window +-tolerance around the true index (default 100)");
    }
}

RunConfig merge(const RunFlags &f) {
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
    if (!f.scenario.empty()) {
        cfg.scenario = f.scenario;
        cfg.inline_spec.reset();
    }
    if (!f.seed.empty()) {
        if (f.seed == "auto") {
            cfg.seed.reset();
        } else {
            std::uint64_t s = 0;
            auto res = std::from_chars(f.seed.data(), f.seed.data() + f.seed.size(), s);
            if (res.ec != std::errc() || res.ptr != f.seed.data() + f.seed.size()) {
                throw ValidationError("--seed must be a non-negative integer or 'auto'");
            }
            cfg.seed = s;
        }
    }
    if (f.trials) {
        cfg.trials = *f.trials;
    }
    if (!f.out_dir.empty()) {
        cfg.out_dir = f.out_dir;
    }
    cfg.recursive = cfg.recursive || f.recursive;
    if (f.threshold) {
        cfg.threshold = *f.threshold;
    }
    if (f.min_segment) {
        cfg.min_segment = *f.min_segment;
    }
    if (f.tolerance) {
        cfg.tolerance = *f.tolerance;
    }
    return cfg;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Segmentation of quantum generated sequences with the Jensen-Shannon divergence"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto *run = app.add_subcommand("run", "Generate sequences, segment them, write profile CSV and summary JSON");
    add_run_flags(run, run_flags, true);

    RunFlags gen_flags;
    auto *generate = app.add_subcommand("generate", "Write generated outcome sequences in the text format");
    add_run_flags(generate, gen_flags, false);

    std::string seq_path;
    std::string observables;
    std::string seg_scenario;
    SegmentFileOptions seg_opts;
    std::string seg_out_dir;
    auto *segment_file = app.add_subcommand("segment-file", "Segment an outcome sequence file");
    segment_file->add_option("path", seq_path, "Sequence file")->required();
    segment_file->add_option("--observables", observables, "Catalog, e.g. 'X,Y,Z' or 'X*X,Y*Y' (default: file header)");
    segment_file->add_option("--scenario", seg_scenario, "Take the catalog from this scenario");
    segment_file->add_option("--out-dir", seg_out_dir, "Write profile CSV and summary JSON here");
    segment_file->add_flag("--recursive", seg_opts.recursive, "Also run recursive segmentation");
    segment_file->add_option("--threshold", seg_opts.threshold, "Recursive split threshold in nats");
    segment_file->add_option("--min-segment", seg_opts.min_segment, "Recursive minimum segment length");

    auto *list = app.add_subcommand("list-scenarios", "List built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            RunReport report = cmd_run(merge(run_flags), std::cerr);
            if (report.aggregate) {
                std::cout << report.aggregate->dump(2) << "\n";
            } else {
                const auto &trial = report.trials.front();
                auto summary = summary_json(trial.result, trial.seed);
                if (!trial.changepoints.empty() || run_flags.recursive) {
                    summary["changepoints"] = trial.changepoints;
                }
                std::cout << summary.dump(2) << "\n";
            }
        } else if (generate->parsed()) {
            for (const auto &path : cmd_generate(merge(gen_flags), std::cerr)) {
                std::cout << path.string() << "\n";
            }
        } else if (segment_file->parsed()) {
            if (!seg_scenario.empty()) {
                for (const auto &obs : build_scenario(seg_scenario).program.catalog) {
                    seg_opts.observables.push_back(obs.label());
                }
            }
            std::string rest = observables;
            while (!rest.empty()) {
                std::size_t comma = rest.find(',');
                seg_opts.observables.push_back(rest.substr(0, comma));
                rest = comma == std::string::npos ? std::string{} : rest.substr(comma + 1);
            }
            if (!seg_out_dir.empty()) {
                seg_opts.out_dir = seg_out_dir;
            }
            std::cout << cmd_segment_file(seq_path, seg_opts).dump(2) << "\n";
        } else if (list->parsed()) {
            cmd_list_scenarios(std::cout);
        }
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
