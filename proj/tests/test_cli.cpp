// Copyright 2026 The tdesign Authors
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
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string &args) {
    const std::string cmd = std::string(TDESIGN_CLI) + " " + args + " 2>&1";
    Run r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("tdesign_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    void write(const std::string &name, const std::string &text) const { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, version) {
    auto r = run("version");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["name"], "tdesign");
}

TEST_F(Cli, certify_pauli) {
    auto r = run("certify --source pauli --d 2 --t 1");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_LE(Json::parse(r.out)["certificate"]["defect"].get<double>(), 1e-12);
}

TEST_F(Cli, gen_then_certify_file) {
    ASSERT_EQ(run("gen --source clifford --m 1 --out " + path("c1.json")).code, 0);
    auto r = run("certify --source file:" + path("c1.json") + " --t 2");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = Json::parse(r.out);
    EXPECT_LE(j["certificate"]["defect"].get<double>(), 1e-10);
    EXPECT_EQ(j["size"], 24);
}

TEST_F(Cli, error_exit_codes) {
    auto missing = run("scale --config " + path("missing.json"));
    EXPECT_EQ(missing.code, 1);
    auto unknown = run("certify --bogus");
    EXPECT_EQ(unknown.code, 1);
    EXPECT_NE(unknown.out.find("Usage"), std::string::npos);
    EXPECT_EQ(run("").code, 1);
    write("bad.json", R"J({"kind": "scaling-u-ubar", "n_grid": [4, 2], "seeds": [0]})J");
    EXPECT_EQ(run("scale --config " + path("bad.json")).code, 1);
    EXPECT_EQ(run("crypto --source pauli --d 2 --mode sideways").code, 1);
    // gap tolerance 1e-31 cannot be met in double precision.
    write("hard.json",
          R"J({"kind": "scaling-crypto", "d": 2, "n_grid": [3], "seeds": [0], "restarts": 2,
               "tolerances": {"diamond_tol": 1e-30}, "source": "clifford"})J");
    EXPECT_EQ(run("scale --config " + path("hard.json")).code, 2);
}

TEST_F(Cli, scale_is_deterministic) {
    write("cfg.json", R"J({"kind": "scaling-u-ubar", "d": 2, "n_grid": [2, 4, 8], "seeds": [3, 4],
                          "restarts": 4, "source": "clifford"})J");
    ASSERT_EQ(run("scale --config " + path("cfg.json") + " --out " + path("a.json")).code, 0);
    ASSERT_EQ(run("scale --config " + path("cfg.json") + " --out " + path("b.json")).code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    auto j = Json::parse(slurp(path("a.json")));
    EXPECT_EQ(j["rows"].size(), 6u);
    ASSERT_EQ(run("scale --config " + path("cfg.json") + " --out " + path("a.csv")).code, 0);
    auto csv = slurp(path("a.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,d,t,n,seed,value,norm_kind,wall_ms");
}

TEST_F(Cli, crypto_report) {
    auto r = run("crypto --source pauli --d 2 --restarts 4");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["key_bits"], 2.0);
    EXPECT_LE(j["indist_defect"]["value"].get<double>(), 1e-10);
    EXPECT_EQ(j["nm_defects"].size(), 6u);
    auto k = run("crypto --source clifford --m 1 --n 8 --seed 2 --restarts 4 --mode 'k-bounded(2)'");
    ASSERT_EQ(k.code, 0) << k.out;
    EXPECT_EQ(Json::parse(k.out)["nm_defects"][0]["norm_kind"], "assembled-bound");
}
