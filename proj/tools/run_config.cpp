#include "run_config.hpp"

#include <algorithm>
#include <fstream>

namespace qgseg::cli {

using nlohmann::json;

namespace {

Complex parse_complex(const json &j, const std::string &where) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ValidationError(where + ": expected a number or an [re, im] pair, got " + j.dump());
}

QuantumState parse_segment_state(const json &seg, const std::string &where, std::vector<std::string> &notes) {
    if (seg.contains("ket") == seg.contains("density")) {
        throw ValidationError(where + ": give exactly one of \"ket\" or \"density\"");
    }
    if (seg.contains("ket")) {
        const json &ket = seg.at("ket");
        if (!ket.is_array() || ket.empty()) {
            throw ValidationError(where + ".ket: expected a non-empty array of amplitudes");
        }
        std::vector<Complex> amps;
        for (std::size_t i = 0; i < ket.size(); ++i) {
            amps.push_back(parse_complex(ket[i], where + ".ket[" + std::to_string(i) + "]"));
        }
        bool normalize = seg.value("normalize", true);
        std::vector<std::string> warnings;
        QuantumState state = pure_to_density(amps, normalize, &warnings);
        for (auto &w : warnings) {
            notes.push_back(where + ": " + w);
        }
        return state;
    }
    const json &rows = seg.at("density");
    if (!rows.is_array() || rows.empty()) {
        throw ValidationError(where + ".density: expected a square array of rows");
    }
    std::vector<std::vector<Complex>> m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array()) {
            throw ValidationError(where + ".density: row " + std::to_string(i) + " is not an array");
        }
        std::vector<Complex> row;
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
            row.push_back(parse_complex(rows[i][k], where + ".density[" + std::to_string(i) + "][" +
                                                        std::to_string(k) + "]"));
        }
        m.push_back(std::move(row));
    }
    return QuantumState(ComplexMatrix::from_rows(m));
}

}  // namespace

RunConfig parse_run_config(const json &doc) {
    if (!doc.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    RunConfig cfg;
    if (doc.contains("scenario")) {
        cfg.scenario = doc.at("scenario").get<std::string>();
    }
    if (doc.contains("spec")) {
        cfg.inline_spec = doc.at("spec");
    }
    if (cfg.scenario && cfg.inline_spec) {
        throw ValidationError("config gives both \"scenario\" and \"spec\"");
    }
    if (doc.contains("seed")) {
        const json &s = doc.at("seed");
        if (s.is_string() && s.get<std::string>() == "auto") {
            cfg.seed.reset();
        } else if (s.is_number_unsigned()) {
            cfg.seed = s.get<std::uint64_t>();
        } else {
            throw ValidationError("seed must be a non-negative integer or \"auto\"");
        }
    }
    if (doc.contains("trials")) {
        if (!doc.at("trials").is_number_unsigned() || doc.at("trials").get<std::size_t>() == 0) {
            throw ValidationError("trials must be a positive integer");
        }
        cfg.trials = doc.at("trials").get<std::size_t>();
    }
    cfg.out_dir = doc.value("out_dir", std::string("."));
    cfg.recursive = doc.value("recursive", false);
    cfg.threshold = doc.value("threshold", cfg.threshold);
    cfg.min_segment = doc.value("min_segment", cfg.min_segment);
    cfg.tolerance = doc.value("tolerance", cfg.tolerance);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return parse_run_config(doc);
}

Job job_from_scenario(const Scenario &scenario) {
    return Job{scenario.name,
               scenario.program,
               scenario.schedule,
               {scenario.true_changepoint},
               scenario.distinguishing_labels(),
               scenario.notes};
}

Job job_from_spec(const json &spec) {
    if (!spec.is_object()) {
        throw ValidationError("spec must be a JSON object");
    }
    Job job{spec.value("name", std::string("custom")), {}, {}, {}, {}, {}};

    const json &observables = spec.at("observables");
    if (!observables.is_array() || observables.empty()) {
        throw ValidationError("spec.observables must be a non-empty array of strings");
    }
    std::vector<HermitianObservable> catalog;
    for (const auto &o : observables) {
        catalog.push_back(parse_observable(o.get<std::string>()));
    }

    const json &segments = spec.at("segments");
    if (!segments.is_array() || segments.empty()) {
        throw ValidationError("spec.segments must be a non-empty array");
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        std::string where = "spec.segments[" + std::to_string(s) + "]";
        QuantumState state = parse_segment_state(segments[s], where, job.notes);
        std::size_t length = segments[s].at("length").get<std::size_t>();
        job.schedule.segments.push_back({std::move(state), length});
    }
    job.schedule.validate();
    std::size_t n = job.schedule.total_length();

    const json pattern = spec.value("pattern", json("cyclic"));
    if (pattern.is_string()) {
        if (pattern.get<std::string>() != "cyclic") {
            throw ValidationError("spec.pattern must be \"cyclic\" or an index array");
        }
        job.program = ObservableProgram::cyclic(std::move(catalog), n);
    } else {
        job.program.catalog = std::move(catalog);
        job.program.pattern = pattern.get<std::vector<std::uint32_t>>();
    }
    job.program.validate();
    if (job.program.size() != n) {
        throw ValidationError("spec.pattern has " + std::to_string(job.program.size()) +
                              " entries but the segments cover " + std::to_string(n));
    }
    if (job.schedule.segments.front().state.dim() != job.program.catalog.front().dim()) {
        throw ValidationError("state dimension does not match the observables");
    }

    job.true_changepoints = job.schedule.changing_indices();
    for (std::size_t s = 0; s + 1 < job.schedule.segments.size(); ++s) {
        auto contrast = contrast_catalog(job.program.catalog, job.schedule.segments[s].state,
                                         job.schedule.segments[s + 1].state);
        for (const auto &c : distinguishing_subset(contrast)) {
            if (std::find(job.distinguishing_labels.begin(), job.distinguishing_labels.end(), c.label) ==
                job.distinguishing_labels.end()) {
                job.distinguishing_labels.push_back(c.label);
            }
        }
    }
    return job;
}

Job resolve_job(const RunConfig &config) {
    if (config.scenario) {
        return job_from_scenario(build_scenario(*config.scenario));
    }
    if (config.inline_spec) {
        try {
            return job_from_spec(*config.inline_spec);
        } catch (const nlohmann::json::exception &e) {
            throw ValidationError(std::string("spec: ") + e.what());
        }
    }
    throw ValidationError("no scenario or spec given (use --scenario or --config)");
}

}  // namespace qgseg::cli
