// Copyright 2026 The icotk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "icotk/cli.hpp"
#include "icotk/io.hpp"

namespace icotk {
namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "icotk");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string &name) { return (fs::path(ICOTK_FIXTURE_DIR) / name).string(); }

nlohmann::json report_of(const Run &r) { return nlohmann::json::parse(r.out); }

class EnvTol {
   public:
    explicit EnvTol(const char *value) { ::setenv("ICOTK_TOL", value, 1); }
    ~EnvTol() { ::unsetenv("ICOTK_TOL"); }
};

TEST(CliValidate, ExitCodes) {
    auto ok = run_cli({"validate", fixture("uniform_noise.json")});
    EXPECT_EQ(ok.code, cli::kOk) << ok.err;
    EXPECT_TRUE(report_of(ok)["verdict"].get<bool>());
    EXPECT_EQ(run_cli({"validate", fixture("comb.json")}).code, cli::kOk);

    auto swap = run_cli({"validate", fixture("swap_quantum.json")});
    EXPECT_EQ(swap.code, cli::kRejected);
    auto rep = report_of(swap);
    EXPECT_FALSE(rep["verdict"].get<bool>());
    EXPECT_EQ(rep["results"]["worst_violation"]["subset"].get<std::vector<int>>(), (std::vector<int>{1, 2}));

    EXPECT_EQ(run_cli({"validate", fixture("corrupted.json")}).code, cli::kMalformed);
    EXPECT_EQ(run_cli({"validate", fixture("does_not_exist.json")}).code, cli::kMalformed);
    EXPECT_EQ(run_cli({"validate"}).code, cli::kMalformed);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kMalformed);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST(CliParity, ClassicalAndQuantum) {
    auto mix = run_cli({"parity", fixture("causal_mixture_classical.json")});
    EXPECT_EQ(mix.code, cli::kOk) << mix.err;
    EXPECT_EQ(report_of(mix)["kind"], "classical");
    EXPECT_EQ(run_cli({"parity", fixture("swap_classical.json")}).code, cli::kRejected);
    EXPECT_EQ(run_cli({"parity", fixture("classical_negative_entry.json")}).code, cli::kMalformed);

    auto comb = run_cli({"parity", fixture("comb.json"), "--method", "both"});
    EXPECT_EQ(comb.code, cli::kOk) << comb.err;
    EXPECT_TRUE(report_of(comb)["results"]["methods_agree"].get<bool>());
    auto swap = run_cli({"parity", fixture("swap_quantum.json"), "--method", "both"});
    EXPECT_EQ(swap.code, cli::kRejected);
    EXPECT_TRUE(report_of(swap)["results"]["methods_agree"].get<bool>());
    EXPECT_EQ(run_cli({"parity", fixture("comb.json"), "--method", "guess"}).code, cli::kMalformed);
    EXPECT_EQ(run_cli({"parity", fixture("comb.json"), "--classical", "--quantum"}).code, cli::kMalformed);
}

TEST(CliApply, ChannelsInstrumentsAndRejection) {
    auto ch = run_cli({"apply", fixture("comb.json"), fixture("channel_party1.json"), fixture("channel_party2.json")});
    ASSERT_EQ(ch.code, cli::kOk) << ch.err;
    EXPECT_NEAR(report_of(ch)["results"]["total"].get<double>(), 1.0, 1e-9);

    auto ins = run_cli({"apply", fixture("comb.json"), fixture("instrument_party1.json"), fixture("instrument_party2.json"),
                        "--order", "1,2"});
    ASSERT_EQ(ins.code, cli::kOk) << ins.err;
    auto rep = report_of(ins);
    EXPECT_NEAR(rep["results"]["total"].get<double>(), 1.0, 1e-9);
    EXPECT_LT(rep["results"]["pair_discrepancy"].get<double>(), 1e-9);
    EXPECT_EQ(rep["order"].get<std::vector<int>>(), (std::vector<int>{1, 2}));

    auto swap = run_cli({"apply", fixture("swap_quantum.json"), fixture("channel_party1.json"), fixture("channel_party2.json")});
    EXPECT_EQ(swap.code, cli::kRejected);
    EXPECT_TRUE(report_of(swap).contains("rejection"));
    EXPECT_EQ(run_cli({"apply", fixture("comb.json"), fixture("channel_party1.json")}).code, cli::kMalformed);
}

TEST(CliExplore, CensusVerticesAndLp) {
    auto census = run_cli({"explore", "--two-bit-census"});
    ASSERT_EQ(census.code, cli::kOk) << census.err;
    EXPECT_EQ(census.out, read_text_file(fixture("census_two_bit.csv")));
    auto rep = nlohmann::json::parse(census.err);
    EXPECT_EQ(rep["results"]["census_count"], 12);

    auto vertices = run_cli({"explore", "--vertices"});
    ASSERT_EQ(vertices.code, cli::kOk);
    EXPECT_TRUE(nlohmann::json::parse(vertices.err)["results"]["vertices_match_census"].get<bool>());
    EXPECT_EQ(vertices.out, census.out);

    auto lp_in = run_cli({"explore", "--lp", fixture("causal_mixture_classical.json")});
    EXPECT_EQ(lp_in.code, cli::kOk) << lp_in.err;
    EXPECT_TRUE(nlohmann::json::parse(lp_in.out)["feasible"].get<bool>());
    auto lp_out = run_cli({"explore", "--lp", fixture("swap_classical.json")});
    EXPECT_EQ(lp_out.code, cli::kRejected);
    EXPECT_NEAR(nlohmann::json::parse(lp_out.out)["margin"].get<double>(), 5.0, 1e-9);

    EXPECT_EQ(run_cli({"explore", "--census", "--inputs", "3,2", "--outputs", "2,2"}).code, cli::kCapExceeded);
    EXPECT_EQ(run_cli({"explore", "--census", "--inputs", "3,2", "--outputs", "2,2", "--max-inputs", "6"}).code,
              cli::kOk);
    EXPECT_EQ(run_cli({"explore"}).code, cli::kMalformed);
}

TEST(CliReport, DeterministicApartFromWallTime) {
    auto strip = [](const std::string &text) {
        auto j = nlohmann::json::parse(text);
        EXPECT_TRUE(j.contains("wall_time_s"));
        j.erase("wall_time_s");
        return j.dump();
    };
    for (const auto &args : std::vector<std::vector<std::string>>{
             {"validate", fixture("comb.json")},
             {"parity", fixture("swap_quantum.json"), "--method", "both"},
             {"apply", fixture("comb.json"), fixture("instrument_party1.json"), fixture("instrument_party2.json")}}) {
        auto a = run_cli(args), b = run_cli(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(strip(a.out), strip(b.out));
        auto rep = nlohmann::json::parse(a.out);
        EXPECT_EQ(rep["exit_code"], a.code);
        EXPECT_EQ(rep["inputs"][0]["digest"].get<std::string>().rfind("fnv1a64:", 0), 0u);
    }
}

TEST(CliReport, WritesToFile) {
    auto path = fs::temp_directory_path() / "icotk_cli_report.json";
    auto r = run_cli({"--report", path.string(), "validate", fixture("uniform_noise.json")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(read_json_file(path)["command"], "validate");
    fs::remove(path);
}

TEST(CliTolerance, EnvironmentDefault) {
    {
        EnvTol env("1e-3");
        auto r = run_cli({"validate", fixture("uniform_noise.json")});
        EXPECT_EQ(report_of(r)["tolerances"]["tol"].get<double>(), 1e-3);
        auto flag = run_cli({"validate", fixture("uniform_noise.json"), "--tol", "1e-6"});
        EXPECT_EQ(report_of(flag)["tolerances"]["tol"].get<double>(), 1e-6);
    }
    {
        EnvTol env("tiny");
        EXPECT_EQ(run_cli({"validate", fixture("uniform_noise.json")}).code, cli::kMalformed);
    }
    auto r = run_cli({"validate", fixture("uniform_noise.json")});
    EXPECT_EQ(report_of(r)["tolerances"]["tol"].get<double>(), 1e-9);
}

TEST(Fixtures, RegenerateIdentically) {
    auto dir = fs::temp_directory_path() / "icotk_fixtures_regen";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string cmd = std::string("\"") + ICOTK_MAKE_FIXTURES + "\" \"" + dir.string() + "\"";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    int compared = 0;
    for (const auto &entry : fs::directory_iterator(ICOTK_FIXTURE_DIR)) {
        auto fresh = dir / entry.path().filename();
        ASSERT_TRUE(fs::exists(fresh)) << fresh;
        EXPECT_EQ(read_text_file(fresh), read_text_file(entry.path())) << entry.path().filename();
        ++compared;
    }
    EXPECT_GE(compared, 12);
    fs::remove_all(dir);
}

}  // namespace
}  // namespace icotk
