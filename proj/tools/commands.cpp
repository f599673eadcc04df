#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <limits>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "qgseg/scenarios.hpp"
#include "qgseg/sequence_io.hpp"

namespace qgseg::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write to " + path.string() + " failed");
    }
}

std::string profile_csv(const JsdProfile &profile) {
    std::ostringstream out;
    write_profile_csv(out, profile);
    return out.str();
}

double median_of_sorted(const std::vector<double> &v) {
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t nearest_error(std::size_t estimate, std::span<const std::size_t> truth) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t t : truth) {
        best = std::min(best, estimate > t ? estimate - t : t - estimate);
    }
    return best;
}

}  // namespace

json summary_json(const SegmentationResult &result, std::uint64_t seed) {
    json s;
    s["estimated_changepoint"] = result.estimated_changepoint;
    s["argmax_value"] = result.profile.argmax_value;
    if (result.profile.argmax_observable) {
        s["argmax_observable"] = result.profile.labels[*result.profile.argmax_observable];
    } else {
        s["argmax_observable"] = nullptr;
    }
    s["no_signal"] = result.no_signal;
    s["seed"] = seed;
    return s;
}

Aggregate aggregate_estimates(std::vector<std::size_t> estimates, std::span<const std::size_t> true_changepoints,
                              std::size_t no_signal_count, std::size_t tolerance) {
    if (estimates.empty()) {
        throw ValidationError("no estimates to aggregate");
    }
    std::sort(estimates.begin(), estimates.end());
    std::vector<double> values(estimates.begin(), estimates.end());
    Aggregate agg{median_of_sorted(values), 0.0, 0.0, no_signal_count};
    if (true_changepoints.empty()) {
        agg.median_abs_error = std::numeric_limits<double>::quiet_NaN();
        agg.success_rate = std::numeric_limits<double>::quiet_NaN();
        return agg;
    }
    std::vector<double> errors;
    std::size_t hits = 0;
    for (std::size_t e : estimates) {
        std::size_t err = nearest_error(e, true_changepoints);
        errors.push_back(static_cast<double>(err));
        hits += err <= tolerance ? 1 : 0;
    }
    std::sort(errors.begin(), errors.end());
    agg.median_abs_error = median_of_sorted(errors);
    agg.success_rate = static_cast<double>(hits) / static_cast<double>(estimates.size());
    return agg;
}

RunReport cmd_run(const RunConfig &config, std::ostream &log) {
    Job job = resolve_job(config);
    for (const auto &note : job.notes) {
        log << "note: " << note << "\n";
    }
    RunReport report;
    report.base_seed = config.seed ? *config.seed : entropy_seed();
    ensure_dir(config.out_dir);

    const auto catalog = job.program.alphabets();
    report.trials.resize(config.trials);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(config.trials);
    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            try {
                TrialOutcome &out = report.trials[t];
                out.seed = report.base_seed + t;
                OutcomeSequence seq = generate_quantum_sequence(job.program, job.schedule, out.seed);
                out.result = estimate_changepoint(seq, catalog);
                if (config.recursive) {
                    out.changepoints = segment_recursive(seq, catalog, config.threshold, config.min_segment);
                }
            } catch (...) {
                failures[t] = std::current_exception();
            }
        }
    };
    std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, config.trials);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < threads; ++w) {
            pool.emplace_back(worker);
        }
        worker();
    }
    for (const auto &failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<std::size_t> estimates;
    std::size_t no_signal = 0;
    std::size_t recursive_hits = 0;
    for (const auto &trial : report.trials) {
        std::string stem = job.name + "_seed" + std::to_string(trial.seed);
        fs::path csv = config.out_dir / (stem + "_profile.csv");
        fs::path summary = config.out_dir / (stem + "_summary.json");
        write_text(csv, profile_csv(trial.result.profile));
        json s = summary_json(trial.result, trial.seed);
        if (config.recursive) {
            s["changepoints"] = trial.changepoints;
            bool exact = trial.changepoints.size() == job.true_changepoints.size();
            for (std::size_t i = 0; exact && i < trial.changepoints.size(); ++i) {
                std::size_t a = trial.changepoints[i];
                std::size_t b = job.true_changepoints[i];
                exact = (a > b ? a - b : b - a) <= config.tolerance;
            }
            recursive_hits += exact ? 1 : 0;
        }
        write_text(summary, s.dump(2) + "\n");
        report.written.push_back(csv);
        report.written.push_back(summary);
        estimates.push_back(trial.result.estimated_changepoint);
        no_signal += trial.result.no_signal ? 1 : 0;
    }

    if (config.trials > 1) {
        Aggregate agg = aggregate_estimates(estimates, job.true_changepoints, no_signal, config.tolerance);
        json a;
        a["name"] = job.name;
        a["trials"] = config.trials;
        a["base_seed"] = report.base_seed;
        a["true_changepoints"] = job.true_changepoints;
        a["tolerance"] = config.tolerance;
        a["median_estimate"] = agg.median_estimate;
        if (job.true_changepoints.empty()) {
            a["median_abs_error"] = nullptr;
            a["success_rate"] = nullptr;
        } else {
            a["median_abs_error"] = agg.median_abs_error;
            a["success_rate"] = agg.success_rate;
        }
        a["no_signal_count"] = agg.no_signal_count;
        a["distinguishing_observables"] = job.distinguishing_labels;
        a["detectable"] = !job.distinguishing_labels.empty();
        // Recovered: at least 90% of trials within +-tolerance of a true index.
        bool recovered = !job.true_changepoints.empty() && agg.success_rate >= 0.9;
        a["verdict"] = recovered ? "changepoint_recovered" : "not_recovered";
        if (config.recursive) {
            a["recursive_exact_rate"] = static_cast<double>(recursive_hits) / static_cast<double>(config.trials);
        }
        std::sort(estimates.begin(), estimates.end());
        a["sorted_estimates"] = estimates;
        fs::path path = config.out_dir / (job.name + "_aggregate.json");
        write_text(path, a.dump(2) + "\n");
        report.written.push_back(path);
        report.aggregate = std::move(a);
    }
    log << "wrote " << report.written.size() << " files to " << config.out_dir.string() << "\n";
    return report;
}

std::vector<fs::path> cmd_generate(const RunConfig &config, std::ostream &log) {
    Job job = resolve_job(config);
    for (const auto &note : job.notes) {
        log << "note: " << note << "\n";
    }
    std::uint64_t base = config.seed ? *config.seed : entropy_seed();
    ensure_dir(config.out_dir);
    const auto catalog = job.program.alphabets();
    std::vector<fs::path> written;
    for (std::size_t t = 0; t < config.trials; ++t) {
        OutcomeSequence seq = generate_quantum_sequence(job.program, job.schedule, base + t);
        fs::path path = config.out_dir / (job.name + "_seed" + std::to_string(base + t) + ".seq");
        write_text(path, format_sequence(seq, catalog));
        written.push_back(path);
    }
    return written;
}

json cmd_segment_file(const fs::path &path, const SegmentFileOptions &options) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open sequence file " + path.string());
    }
    std::vector<OutcomeAlphabet> catalog;
    for (const auto &text : options.observables) {
        HermitianObservable obs = parse_observable(text);
        catalog.push_back({obs.label(), obs.alphabet()});
    }
    ParsedSequence parsed = read_sequence(in, catalog);
    if (parsed.sequence.size() < 2) {
        throw ValidationError(path.string() + ": n ≥ 2 required");
    }
    SegmentationResult result = estimate_changepoint(parsed.sequence, parsed.catalog);
    json summary = summary_json(result, parsed.sequence.seed);
    if (options.recursive) {
        summary["changepoints"] =
            segment_recursive(parsed.sequence, parsed.catalog, options.threshold, options.min_segment);
    }
    if (options.out_dir) {
        ensure_dir(*options.out_dir);
        std::string stem = path.stem().string();
        write_text(*options.out_dir / (stem + "_profile.csv"), profile_csv(result.profile));
        write_text(*options.out_dir / (stem + "_summary.json"), summary.dump(2) + "\n");
    }
    return summary;
}

void cmd_list_scenarios(std::ostream &out) {
    for (const auto &name : scenario_names()) {
        Scenario s = build_scenario(name);
        std::string labels;
        for (const auto &l : s.distinguishing_labels()) {
            labels += (labels.empty() ? "" : ",") + l;
        }
        out << std::left << std::setw(14) << s.name << std::setw(7) << s.short_alias << "n=" << s.program.size()
            << "  i_c=" << s.true_changepoint << "  distinguishing=" << (labels.empty() ? "none" : labels) << "\n";
    }
}

}  // namespace qgseg::cli
