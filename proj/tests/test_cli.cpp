#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cyclocopula/csv.hpp"

namespace fs = std::filesystem;
using namespace cyclocopula;

namespace {

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(CYCLOCOPULA_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return {-1, {}};
    }
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t k = 0;
    while ((k = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), k);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("cyclocopula_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, SimulateWritesTxy) {
    const auto r = run("simulate --n 120 -T 4 --phi 0.7 --alpha 0.7 --seed 3 --out " + path("s.csv"));
    ASSERT_EQ(r.code, 0);
    const auto t = read_csv_file(path("s.csv"));
    EXPECT_EQ(t.header(), (std::vector<std::string>{"t", "x", "y"}));
    EXPECT_EQ(t.rows(), 120u);
    EXPECT_EQ(t.column("t")[119], 120.0);
}

TEST_F(Cli, SimulateIsSeedDeterministic) {
    const auto a = run("simulate --n 48 --seed 9 --generator cholesky --error-term level");
    const auto b = run("simulate --n 48 --seed 9 --generator cholesky --error-term level");
    const auto c = run("simulate --n 48 --seed 10 --generator cholesky --error-term level");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, DetectCycleFindsPlantedPeriod) {
    ASSERT_EQ(run("simulate --n 1200 -T 4 --phi 0.7 --seed 21 --out " + path("s.csv")).code, 0);
    const auto r = run("detect-cycle " + path("s.csv"));
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc.at("estimated_T"), 4);
    EXPECT_FALSE(doc.at("line_scores").empty());
    EXPECT_EQ(doc.at("line_scores")[0].size(), 2u);
}

TEST_F(Cli, DetectCycleDumpsCoherenceMap) {
    ASSERT_EQ(run("simulate --n 96 -T 4 --seed 2 --out " + path("s.csv")).code, 0);
    const auto r = run("detect-cycle " + path("s.csv") + " -M 5 --threshold 0.5 --map-out " + path("map.csv") +
                       " --out " + path("d.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    const auto map = read_csv_file(path("map.csv"));
    EXPECT_EQ(map.header(), (std::vector<std::string>{"p", "q", "coherence"}));
    ASSERT_EQ(map.rows(), 96u * 96u);
    for (std::size_t i = 0; i < map.rows(); ++i) {
        const double g = map.column("coherence")[i];
        ASSERT_GE(g, 0.0);
        ASSERT_LE(g, 1.0);
        if (map.column("p")[i] == map.column("q")[i]) {
            ASSERT_EQ(g, 1.0);
        }
    }
    std::ifstream in(path("d.json"));
    EXPECT_TRUE(nlohmann::json::parse(in).contains("estimated_T"));
}

TEST_F(Cli, FitPredictEvaluatePipeline) {
    ASSERT_EQ(run("simulate --n 240 -T 2 --phi 0.7 --alpha 0.7 -H 0.75 --seed 5 --out " + path("s.csv")).code, 0);
    const auto fit = run("fit " + path("s.csv") + " --family frank -T 2 --model-out " + path("m.json"));
    ASSERT_EQ(fit.code, 0);
    const auto summary = nlohmann::json::parse(fit.out);
    EXPECT_EQ(summary.at("phases").size(), 2u);
    EXPECT_EQ(summary.at("family"), "frank");

    ASSERT_EQ(run("predict --model " + path("m.json") + " " + path("s.csv") + " --out " + path("p.csv")).code, 0);
    const auto sim = read_csv_file(path("s.csv"));
    const auto pred = read_csv_file(path("p.csv"));
    ASSERT_EQ(pred.rows(), 240u);
    {
        std::ofstream joined(path("j.csv"));
        joined << "y,y_hat\n";
        for (std::size_t i = 0; i < 240; ++i) {
            joined << format_double(sim.column("y")[i]) << ',' << format_double(pred.column("y_hat")[i]) << '\n';
        }
    }
    const auto eval = run("evaluate " + path("j.csv"));
    ASSERT_EQ(eval.code, 0);
    const auto m = nlohmann::json::parse(eval.out);
    EXPECT_GT(m.at("r").get<double>(), 0.5);
    EXPECT_LE(m.at("WI").get<double>(), 1.0);
    EXPECT_EQ(m.at("variant"), "standard");
}

TEST_F(Cli, FitWithoutPeriodPrintsCopulaSummary) {
    ASSERT_EQ(run("simulate --n 120 --alpha 0.7 --seed 8 --out " + path("s.csv")).code, 0);
    const auto r = run("fit " + path("s.csv") + " --family t --nu 6");
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc.at("nu"), 6.0);
    EXPECT_EQ(doc.at("m"), 120);
}

TEST_F(Cli, EvaluateHandOracle) {
    {
        std::ofstream f(path("e.csv"));
        f << "y,y_hat\n1,1\n2,2\n3,4\n";
    }
    const auto doc = nlohmann::json::parse(run("evaluate " + path("e.csv")).out);
    EXPECT_NEAR(doc.at("r").get<double>(), 0.98198, 1e-5);
    EXPECT_NEAR(doc.at("WI").get<double>(), 12.0 / 13.0, 1e-12);
    EXPECT_NEAR(doc.at("NS").get<double>(), 0.5, 1e-12);
    const auto printed = nlohmann::json::parse(run("evaluate " + path("e.csv") + " --variant paper-printed").out);
    EXPECT_EQ(printed.at("variant"), "paper-printed");
}

TEST_F(Cli, ExperimentSmallGrid) {
    {
        std::ofstream f(path("c.json"));
        f << R"({"n_list": [48], "H_list": [0.75], "T_list": [1, 2], "phi_list": [0.7],
                 "alpha_list": [0.7], "families": ["gaussian"], "replications": 3})";
    }
    const auto one = run("experiment --config " + path("c.json") + " --workers 1");
    const auto three = run("experiment --config " + path("c.json") + " --workers 3");
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, three.out);
    EXPECT_EQ(one.out.substr(0, one.out.find('\n')), "H,family,T,phi,alpha,n48_r,n48_wi,n48_ns,n48_failures,n48_flagged");
    const auto md = run("experiment --config " + path("c.json") + " --format markdown --seed 4");
    ASSERT_EQ(md.code, 0);
    EXPECT_EQ(md.out.rfind("| H | family |", 0), 0u);
    const auto js = run("experiment --config " + path("c.json") + " --format json --replications 2");
    ASSERT_EQ(js.code, 0);
    EXPECT_EQ(nlohmann::json::parse(js.out).at("cells").size(), 2u);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("simulate --bogus").code, 1);
    EXPECT_EQ(run("simulate --n 10 -T 4").code, 1);
    EXPECT_EQ(run("simulate --generator magic").code, 1);
    EXPECT_EQ(run("experiment --profile laptop").code, 1);
    EXPECT_EQ(run("evaluate --variant odd " + path("none.csv")).code, 1);
    EXPECT_EQ(run("evaluate " + path("none.csv")).code, 2);

    {
        std::ofstream f(path("x.csv"));
        f << "x\n1\n2\n3\n";
    }
    EXPECT_EQ(run("fit " + path("x.csv")).code, 2);
    EXPECT_EQ(run("detect-cycle " + path("x.csv") + " --column y").code, 2);
    {
        std::ofstream f(path("bad.csv"));
        f << "x,y\n1,abc\n";
    }
    EXPECT_EQ(run("fit " + path("bad.csv")).code, 2);

    {
        std::ofstream f(path("flat.csv"));
        f << "x\n";
        for (int i = 0; i < 64; ++i) {
            f << "5\n";
        }
    }
    EXPECT_EQ(run("detect-cycle " + path("flat.csv")).code, 3);
}
