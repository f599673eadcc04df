#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "qgseg/scenarios.hpp"
#include "qgseg/sequence_io.hpp"

using namespace qgseg;
using namespace qgseg::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("qgseg_cli_" + std::string(info->name()) + "_" +
                                            std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }

    RunConfig scenario_config(const std::string &name, std::uint64_t seed, std::size_t trials,
                              const fs::path &out) const {
        RunConfig cfg;
        cfg.scenario = name;
        cfg.seed = seed;
        cfg.trials = trials;
        cfg.out_dir = out;
        return cfg;
    }

    int run_binary(const std::string &args) const {
        std::string cmd = std::string(QGSEG_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                          " 2> " + (dir_ / "stderr.txt").string();
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
    std::ostringstream log_;
};

}  // namespace

TEST_F(CliTest, RunWritesProfileAndSummary) {
    auto report = cmd_run(scenario_config("q1_xyz_pure", 42, 1, dir_), log_);
    ASSERT_EQ(report.written.size(), 2u);
    fs::path csv = dir_ / "q1_xyz_pure_seed42_profile.csv";
    fs::path summary = dir_ / "q1_xyz_pure_seed42_summary.json";
    ASSERT_TRUE(fs::exists(csv));
    ASSERT_TRUE(fs::exists(summary));

    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "k,X,Y,Z,jsd_max");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 1999u);

    json s = json::parse(slurp(summary));
    for (const char *key : {"estimated_changepoint", "argmax_value", "argmax_observable", "no_signal", "seed"}) {
        EXPECT_TRUE(s.contains(key)) << key;
    }
    EXPECT_EQ(s["seed"], 42);
    EXPECT_EQ(s["no_signal"], false);
    EXPECT_GE(s["estimated_changepoint"].get<int>(), 2);
    EXPECT_LE(s["estimated_changepoint"].get<int>(), 2000);
}

TEST_F(CliTest, IdenticalConfigGivesByteIdenticalOutput) {
    cmd_run(scenario_config("q2_xxyyzz", 7, 3, dir_ / "a"), log_);
    cmd_run(scenario_config("q2_xxyyzz", 7, 3, dir_ / "b"), log_);
    std::size_t compared = 0;
    for (const auto &entry : fs::directory_iterator(dir_ / "a")) {
        fs::path twin = dir_ / "b" / entry.path().filename();
        ASSERT_TRUE(fs::exists(twin)) << twin;
        EXPECT_EQ(slurp(entry.path()), slurp(twin)) << entry.path().filename();
        ++compared;
    }
    EXPECT_EQ(compared, 7u);
}

TEST_F(CliTest, TwoQubitAggregateReportsRecovery) {
    auto report = cmd_run(scenario_config("q2_xxyyzz", 1000, 100, dir_), log_);
    ASSERT_TRUE(report.aggregate.has_value());
    json a = json::parse(slurp(dir_ / "q2_xxyyzz_aggregate.json"));
    EXPECT_EQ(a, *report.aggregate);
    EXPECT_EQ(a["trials"], 100);
    EXPECT_EQ(a["true_changepoints"], json::array({1001}));
    EXPECT_LE(a["median_abs_error"].get<double>(), 50.0);
    EXPECT_EQ(a["verdict"], "changepoint_recovered");
    EXPECT_EQ(a["detectable"], true);
    EXPECT_EQ(a["sorted_estimates"].size(), 100u);
}

TEST_F(CliTest, NonDistinguishingAggregateReportsFailure) {
    auto report = cmd_run(scenario_config("q1_x_pure", 2000, 100, dir_), log_);
    json a = *report.aggregate;
    EXPECT_EQ(a["detectable"], false);
    EXPECT_EQ(a["distinguishing_observables"], json::array());
    EXPECT_EQ(a["verdict"], "not_recovered");
    EXPECT_LT(a["success_rate"].get<double>(), 0.9);
}

TEST_F(CliTest, DeterministicCatalogGivesNoSignal) {
    auto report = cmd_run(scenario_config("q2_zz", 3, 5, dir_), log_);
    json a = *report.aggregate;
    EXPECT_EQ(a["no_signal_count"], 5);
    for (const auto &t : report.trials) {
        EXPECT_TRUE(t.result.no_signal);
        EXPECT_EQ(t.result.estimated_changepoint, 2u);
    }
}

TEST_F(CliTest, GenerateThenSegmentFileMatchesInMemoryRun) {
    auto config = scenario_config("q1_yz_mixed", 11, 2, dir_ / "gen");
    auto paths = cmd_generate(config, log_);
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_EQ(paths[0].filename(), "q1_yz_mixed_seed11.seq");

    auto report = cmd_run(scenario_config("q1_yz_mixed", 11, 1, dir_ / "run"), log_);
    SegmentFileOptions opts;
    opts.out_dir = dir_ / "seg";
    json from_file = cmd_segment_file(paths[0], opts);
    EXPECT_EQ(from_file, summary_json(report.trials[0].result, 11));
    EXPECT_EQ(slurp(dir_ / "seg" / "q1_yz_mixed_seed11_profile.csv"),
              slurp(dir_ / "run" / "q1_yz_mixed_seed11_profile.csv"));

    // Explicit catalog gives the same answer as the header.
    opts.out_dir.reset();
    opts.observables = {"Y", "Z"};
    EXPECT_EQ(cmd_segment_file(paths[0], opts), from_file);
}

TEST_F(CliTest, SegmentFileErrors) {
    fs::path unknown = dir_ / "unknown.seq";
    std::ofstream(unknown) << "# program=X:-1|1\nX,1\nQ,1\n";
    try {
        cmd_segment_file(unknown, {});
        FAIL() << "expected an error";
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("'Q'"), std::string::npos);
    }

    fs::path empty = dir_ / "empty.seq";
    std::ofstream(empty).flush();
    try {
        cmd_segment_file(empty, {{"X"}, {}, false, 0.01, 50});
        FAIL() << "expected an error";
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("n ≥ 2 required"), std::string::npos);
    }
    EXPECT_THROW(cmd_segment_file(dir_ / "missing.seq", {}), std::runtime_error);
}

TEST_F(CliTest, SegmentFileRecursive) {
    auto config = scenario_config("q1_z_pure", 5, 1, dir_);
    auto paths = cmd_generate(config, log_);
    SegmentFileOptions opts;
    opts.recursive = true;
    opts.threshold = 0.05;
    json s = cmd_segment_file(paths[0], opts);
    ASSERT_TRUE(s.contains("changepoints"));
    EXPECT_TRUE(s["changepoints"].is_array());
}

TEST_F(CliTest, ListScenarios) {
    std::ostringstream out;
    cmd_list_scenarios(out);
    std::istringstream lines(out.str());
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        rows.push_back(line);
    }
    ASSERT_EQ(rows.size(), 21u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].rfind(scenario_names()[i], 0), 0u) << rows[i];
    }
    EXPECT_NE(rows[0].find("fig1"), std::string::npos);
    EXPECT_NE(rows[14].find("distinguishing=X⊗X,Y⊗Y"), std::string::npos);
    std::ostringstream again;
    cmd_list_scenarios(again);
    EXPECT_EQ(out.str(), again.str());
}

TEST_F(CliTest, InlineSpecConfig) {
    json doc = json::parse(R"({
        "spec": {
            "name": "custom",
            "observables": ["X", "Z"],
            "segments": [
                {"length": 600, "ket": [1, 0]},
                {"length": 400, "ket": [[0, 0], [1, 0]]}
            ]
        },
        "seed": 5,
        "trials": 2
    })");
    RunConfig cfg = parse_run_config(doc);
    EXPECT_EQ(cfg.seed, std::optional<std::uint64_t>(5));
    Job job = resolve_job(cfg);
    EXPECT_EQ(job.name, "custom");
    EXPECT_EQ(job.program.size(), 1000u);
    EXPECT_EQ(job.true_changepoints, (std::vector<std::size_t>{601}));
    EXPECT_EQ(job.distinguishing_labels, (std::vector<std::string>{"Z"}));

    cfg.out_dir = dir_;
    auto report = cmd_run(cfg, log_);
    EXPECT_EQ((*report.aggregate)["median_estimate"].get<double>(), 601.0);
}

TEST_F(CliTest, ConfigValidationErrors) {
    auto bad = [](const char *text) {
        return [text] { resolve_job(parse_run_config(json::parse(text))); };
    };
    EXPECT_THROW(bad(R"({"scenario": "q1_x_pure", "spec": {}})")(), ValidationError);
    EXPECT_THROW(bad(R"({})")(), ValidationError);
    EXPECT_THROW(bad(R"({"scenario": "nope"})")(), ValidationError);
    EXPECT_THROW(bad(R"({"scenario": "q1_x_pure", "trials": 0})")(), ValidationError);
    EXPECT_THROW(bad(R"({"scenario": "q1_x_pure", "seed": -3})")(), ValidationError);
    EXPECT_THROW(bad(R"({"spec": {"observables": ["Q"], "segments": [{"length": 10, "ket": [1, 0]}]}})")(),
                 ValidationError);
    EXPECT_THROW(bad(R"({"spec": {"observables": ["Z"], "segments": [{"length": 10}]}})")(), ValidationError);
    EXPECT_THROW(bad(R"({"spec": {"observables": ["Z"], "segments": [{"length": 10, "ket": [0, 0]}]}})")(),
                 ValidationError);
    EXPECT_THROW(bad(R"({"spec": {"observables": ["Z*Z"], "segments": [{"length": 10, "ket": [1, 0]}]}})")(),
                 ValidationError);
    EXPECT_THROW(
        bad(R"({"spec": {"observables": ["Z"], "pattern": [0, 0], "segments": [{"length": 10, "ket": [1, 0]}]}})")(),
        ValidationError);
    EXPECT_THROW(bad(R"({"spec": {"observables": ["Z"], "segments": [{"length": 10,
                        "density": [[1, 0], [0, 1]]}]}})")(),
                 ValidationError);
    EXPECT_THROW(bad(R"({"spec": {"segments": [{"length": 10, "ket": [1, 0]}]}})")(), ValidationError);
}

TEST_F(CliTest, BinaryExitCodes) {
    EXPECT_EQ(run_binary("list-scenarios"), 0);
    EXPECT_EQ(slurp(dir_ / "stdout.txt").find("q1_xyz_pure"), 0u);
    EXPECT_EQ(run_binary("run --scenario nope --seed 1 --out-dir " + dir_.string()), 2);
    EXPECT_NE(slurp(dir_ / "stderr.txt").find("unknown scenario"), std::string::npos);
    EXPECT_EQ(run_binary("run --scenario fig1 --seed x"), 2);
    EXPECT_EQ(run_binary("segment-file " + (dir_ / "absent.seq").string()), 1);
    EXPECT_EQ(run_binary("run --scenario fig5 --seed 3 --out-dir " + (dir_ / "bin").string()), 0);
    json s = json::parse(slurp(dir_ / "stdout.txt"));
    EXPECT_EQ(s["seed"], 3);
    EXPECT_TRUE(fs::exists(dir_ / "bin" / "q2_xxyyzz_seed3_profile.csv"));
}
