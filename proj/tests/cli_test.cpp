// Copyright 2026 The q3haar Authors
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

#include "q3haar/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

using namespace q3haar;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string log;
};

Outcome run(RunConfig cfg, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, log;
    const int code = run_command(cfg, {&in, &out, &log});
    return {code, out.str(), log.str()};
}

RunConfig make(const std::string& command) {
    RunConfig c;
    c.command = command;
    return c;
}

std::vector<Json> lines_of(const std::string& text) {
    std::vector<Json> v;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        v.push_back(Json::parse(line));
    }
    return v;
}

}  // namespace

TEST(Io, StateJsonRoundTrip) {
    RandomStream rng(111);
    const StateVector s = haar_reference_state(3, rng);
    const StateVector t = state_from_json(Json::parse(state_to_json(s).dump()));
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(s[i], t[i]);  // shortest round-trip decimal is exact
    }
    EXPECT_THROW(state_from_json(Json::parse(R"({"re":[1,0,0],"im":[0,0,0]})")), DataError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"re":[1,0,0,0],"im":[0,0,0]})")), DataError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"re":[1,0,0,"x"],"im":[0,0,0,0]})")), DataError);
    EXPECT_THROW(state_from_json(Json::parse(R"({"n":3,"re":[1,0,0,0],"im":[0,0,0,0]})")),
                 DataError);
}

TEST(Io, AnglesAndCsv) {
    AngleSet6 a;
    a(1) = 0.1;
    a(6) = 2.5;
    EXPECT_EQ(angles_from_json<6>(angles_to_json(a)), a);
    EXPECT_THROW(angles_from_json<14>(angles_to_json(a)), DataError);
    EXPECT_EQ(csv_header(2, 1, true), "index,theta1,theta2,re0,im0");
    const std::vector<double> v{0.5, 0.25};
    EXPECT_EQ(csv_row(3, v, nullptr), "3,0.5,0.25");
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Sample, ByteIdenticalReruns) {
    RunConfig c = make("sample");
    c.n = 3;
    c.seed = 7;
    const Outcome a = run(c), b = run(c);
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    const auto recs = lines_of(a.out);
    ASSERT_EQ(recs.size(), 3u);
    for (const auto& r : recs) {
        EXPECT_EQ(r.at("schema"), kSchema);
        EXPECT_EQ(r.at("theta").size(), 14u);
        const AngleSet14 th = angles_from_json<14>(r.at("theta"));
        const StateVector s = state_from_json(r.at("state"));
        EXPECT_GE(fidelity(s, build_state_3q(th)), 1 - 1e-12);
    }
    EXPECT_NE(a.log.find("accepted 3 of"), std::string::npos);
}

TEST(Sample, WorkersDoNotChangeOutput) {
    RunConfig c = make("sample");
    c.n = 50;
    const Outcome a = run(c);
    c.workers = 4;
    EXPECT_EQ(run(c).out, a.out);
}

TEST(Sample, TwoQubits) {
    RunConfig c = make("sample");
    c.qubits = 2;
    c.n = 10;
    const Outcome r = run(c);
    ASSERT_EQ(r.code, kExitOk);
    const auto recs = lines_of(r.out);
    ASSERT_EQ(recs.size(), 10u);
    for (const auto& j : recs) {
        EXPECT_EQ(j.at("qubits"), 2);
        EXPECT_EQ(j.at("state").at("re").size(), 4u);
        EXPECT_EQ(j.at("theta").size(), 6u);
    }
}

TEST(Sample, CsvAndAnglesOnly) {
    RunConfig c = make("sample");
    c.n = 4;
    c.format = "csv";
    const Outcome r = run(c);
    std::istringstream is(r.out);
    std::string header, row;
    std::getline(is, header);
    EXPECT_EQ(header, csv_header(14, 8, true));
    int rows = 0;
    while (std::getline(is, row)) {
        ++rows;
        EXPECT_EQ(std::count(row.begin(), row.end(), ','), 14 + 16);
    }
    EXPECT_EQ(rows, 4);
    c.format = "jsonl";
    c.angles_only = true;
    for (const auto& j : lines_of(run(c).out)) {
        EXPECT_FALSE(j.contains("state"));
    }
}

TEST(Sample, AcceptanceReported) {
    RunConfig c = make("sample");
    c.n = 20000;
    c.angles_only = true;
    const Outcome r = run(c);
    const auto at = r.log.find('(');
    ASSERT_NE(at, std::string::npos);
    const double pct = std::stod(r.log.substr(at + 1));
    EXPECT_GE(pct, 8.0);
    EXPECT_LE(pct, 16.0);
}

TEST(Sample, UsageErrors) {
    RunConfig c = make("sample");
    c.n = 0;
    EXPECT_EQ(run(c).code, kExitUsage);
    c = make("sample");
    c.format = "xml";
    EXPECT_EQ(run(c).code, kExitUsage);
    c = make("sample");
    c.bound = 1.5;
    EXPECT_EQ(run(c).code, kExitUsage);
    EXPECT_EQ(run(make("frobnicate")).code, kExitUsage);
}

TEST(Sample, TightBoundIsAVerificationFailure) {
    RunConfig c = make("sample");
    c.n = 100;
    c.bound = 0.3;
    const Outcome r = run(c);
    EXPECT_EQ(r.code, kExitVerificationFailed);
    EXPECT_NE(r.log.find("exceeds rejection bound"), std::string::npos);
}

TEST(Sample, UnwritableOutputIsIoError) {
    RunConfig c = make("sample");
    c.output = "no/such/dir/out.jsonl";
    EXPECT_EQ(run(c).code, kExitIo);
}

TEST(Extract, EmptyInput) {
    const Outcome r = run(make("extract"), "");
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(r.out.empty());
}

TEST(Extract, MalformedLineReportsLineNumber) {
    const std::string good = R"({"re":[1,0,0,0,0,0,0,0],"im":[0,0,0,0,0,0,0,0]})";
    const Outcome r = run(make("extract"), good + "\n{not json\n");
    EXPECT_EQ(r.code, kExitData);
    EXPECT_NE(r.log.find("line 2"), std::string::npos);
    EXPECT_EQ(run(make("extract"), R"({"re":[1,0,0,0],"im":[0,0,0,0]})").code, kExitData);
    EXPECT_EQ(run(make("extract"), R"({"re":[0,0,0,0,0,0,0,0],"im":[0,0,0,0,0,0,0,0]})").code,
              kExitData);
}

TEST(Extract, PipelineRoundTrip) {
    RunConfig s = make("sample");
    s.n = 200;
    s.seed = 3;
    const Outcome sampled = run(s);
    RunConfig e = make("extract");
    e.check = true;
    const Outcome ex = run(e, sampled.out);
    ASSERT_EQ(ex.code, kExitOk) << ex.log;
    const auto in = lines_of(sampled.out);
    const auto out = lines_of(ex.out);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const StateVector psi = state_from_json(in[i].at("state"));
        const AngleSet14 a = angles_from_json<14>(out[i].at("theta"));
        EXPECT_GE(fidelity(build_state_3q(a), psi), 1 - 1e-9);
        EXPECT_EQ(out[i].at("branches"), 4);
    }
    EXPECT_NE(ex.log.find("min rebuild fidelity"), std::string::npos);

    e.branch = "uniform";
    const Outcome u1 = run(e, sampled.out), u2 = run(e, sampled.out);
    EXPECT_EQ(u1.out, u2.out);
    EXPECT_NE(u1.out, ex.out);
}

TEST(Extract, CheckFailsBelowThreshold) {
    // min-fidelity above 1 cannot be met.
    RunConfig e = make("extract");
    e.check = true;
    e.min_fidelity = 1.5;
    EXPECT_EQ(run(e, R"({"re":[0.6,0,0,0,0,0,0.8,0],"im":[0,0,0,0,0,0,0,0]})").code,
              kExitVerificationFailed);
}

TEST(Density, ReportsFactorsAndRatio) {
    RunConfig c = make("density");
    c.angles = "0.7,0.3,0.2,1.0,0.6,2.0,0.1,0.5,0.2,0.3,0.4,0.9,0.1,1.2";
    const Outcome r = run(c);
    ASSERT_EQ(r.code, kExitOk) << r.log;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("qubits"), 3);
    const double prod = j["factors"]["theta1"].get<double>() * j["factors"]["theta2"].get<double>() *
                        j["factors"]["joint_3456"].get<double>() * j["factors"]["tail"].get<double>();
    EXPECT_NEAR(j.at("density").get<double>(), prod, 1e-15);
    EXPECT_TRUE(j.at("in_range").get<bool>());

    c.angles = "[0.39269908169872414, 0, 0.7853981633974483, 0, 0.7853981633974483, 0]";
    const Json k = Json::parse(run(c).out);
    EXPECT_NEAR(k.at("density").get<double>(), std::sqrt(2.0) / 4, 1e-15);

    c.angles = "1,2,3";
    EXPECT_EQ(run(c).code, kExitUsage);
    c.angles = "1,x,3";
    EXPECT_EQ(run(c).code, kExitUsage);
}

TEST(VerifyMetric, RespectsPointsAndTol) {
    RunConfig c = make("verify-metric");
    c.points = 100;
    c.tol = 1e-8;
    c.json = true;
    const Outcome r = run(c);
    EXPECT_EQ(r.code, kExitOk) << r.out;
    const Json j = Json::parse(r.out);
    ASSERT_EQ(j.at("checks").size(), 2u);
    for (const auto& chk : j.at("checks")) {
        EXPECT_EQ(chk.at("tolerance"), 1e-8);
        EXPECT_EQ(chk.at("n_points").get<int>(), 100);
        EXPECT_LT(chk.at("rel_spread").get<double>(), 1e-8);
    }
    c.tol = 1e-30;
    EXPECT_EQ(run(c).code, kExitVerificationFailed);
    c.points = 5;
    EXPECT_EQ(run(c).code, kExitUsage);
}

TEST(VerifyHaar, MutantFailsAndArgumentsChecked) {
    RunConfig c = make("verify-haar");
    c.n = 10000;
    c.json = true;
    c.mutant = "uniform-theta8";
    const Outcome r = run(c);
    EXPECT_EQ(r.code, kExitVerificationFailed);
    EXPECT_FALSE(Json::parse(r.out).at("passed").get<bool>());
    c.n = 500;
    EXPECT_EQ(run(c).code, kExitUsage);
    c.n = 10000;
    c.qubits = 2;
    EXPECT_EQ(run(c).code, kExitUsage);
}

TEST(VerifyHaar, TwoQubitDefaultPasses) {
    RunConfig c = make("verify-haar");
    c.n = 20000;
    c.qubits = 2;
    const Outcome r = run(c);
    EXPECT_EQ(r.code, kExitOk) << r.out;
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST(Config, FileMirrorsFlags) {
    const std::string path = "cli_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"n": 5, "seed": 9, "qubits": 2, "angles-only": true})";
    }
    RunConfig c = load_config_file(path, make("sample"));
    EXPECT_EQ(c.n, 5u);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(lines_of(run(c).out).size(), 5u);
    {
        std::ofstream f(path);
        f << R"({"colour": "blue"})";
    }
    EXPECT_THROW(load_config_file(path), UsageError);
    {
        std::ofstream f(path);
        f << R"({"n": "many"})";
    }
    EXPECT_THROW(load_config_file(path), UsageError);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config_file("missing.json"), IoError);
}
