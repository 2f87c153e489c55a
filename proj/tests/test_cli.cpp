#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <set>
#include <sys/wait.h>
#include <unistd.h>

#include <levy3d/csv.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / ("levy3d_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run cli(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt";
    const std::string cmd = std::string(LEVY3D_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST(Cli, SimulateWritesOneRow) {
    const fs::path csv = scratch() / "sim.csv";
    const auto r = cli("simulate --n 262144 --mu 2.0 --target ball --size 8 --trials 200 --seed 42 --out " +
                       csv.string());
    ASSERT_EQ(r.code, 0);
    std::ifstream in(csv);
    std::vector<std::string> prov;
    const auto records = levy3d::read_csv(in, &prov);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].trials, 200u);
    EXPECT_EQ(records[0].p1, 8.0);
    EXPECT_FALSE(prov.empty());
}

TEST(Cli, SimulateIsByteDeterministic) {
    const fs::path a = scratch() / "a.csv";
    const fs::path b = scratch() / "b.csv";
    const std::string args = "simulate --n 32768 --mu 2.5 --target line --size 10 --trials 50 --seed 7 --out ";
    ASSERT_EQ(cli(args + a.string()).code, 0);
    ASSERT_EQ(cli(args + b.string()).code, 0);
    // Paths differ, so compare everything but the provenance lines.
    auto body = [](const std::string& s) { return s.substr(s.find("scenario,")); };
    EXPECT_EQ(body(slurp(a)), body(slurp(b)));
    ASSERT_EQ(cli(args + a.string()).code, 0);
    const auto first = slurp(a);
    ASSERT_EQ(cli(args + a.string()).code, 0);
    EXPECT_EQ(slurp(a), first);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("simulate --mu 3.5 --target ball --size 4").code, 2);
    EXPECT_EQ(cli("simulate --mu 2 --target cube --size 4").code, 2);
    EXPECT_EQ(cli("simulate --mu 2 --target rect --size 4").code, 2);
    EXPECT_EQ(cli("simulate --mu 2 --target ball --size 40").code, 2);
    EXPECT_EQ(cli("simulate --mu 2 --target ball").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("validate --level medium").code, 2);
}

TEST(Cli, UnknownScenarioListsNames) {
    const fs::path err = scratch() / "err.txt";
    const int status =
        std::system((std::string(LEVY3D_CLI_PATH) + " scenario nope 2> " + err.string() + " >/dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(status), 2);
    EXPECT_NE(slurp(err).find("relative-ball"), std::string::npos);
}

TEST(Cli, AllTruncatedIsDegenerate) {
    EXPECT_EQ(cli("simulate --n 262144 --mu 2 --target ball --size 1 --trials 3 --step-cap 1").code, 3);
}

TEST(Cli, ScenarioSweep) {
    const auto r = cli("scenario relative-ball --n 4096 --trials 5");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    const auto records = levy3d::read_csv(in);
    ASSERT_FALSE(records.empty());
    std::set<double> mus;
    for (const auto& rec : records) {
        mus.insert(rec.mu);
        EXPECT_FALSE(std::isnan(rec.overhead));
    }
    EXPECT_EQ(mus.size(), 10u);
    EXPECT_EQ(*mus.begin(), 1.2);
    EXPECT_EQ(*mus.rbegin(), 3.0);
}

TEST(Cli, BoundsJson) {
    const auto r = cli("bounds --n 134217728 --mu 2 --target ball --size 4");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["universal_lb"]["value"].get<double>(), 2097152.0);
    EXPECT_TRUE(j["diffusive_lb"]["value"].is_null());
    EXPECT_EQ(j["diffusive_lb"]["reason"], "regime mu=2");
    EXPECT_FALSE(j["disclaimer"].get<std::string>().empty());
}

TEST(Cli, DiscreteJson) {
    const auto r = cli("discrete --side 5 --mu 2.5 --length 3 --trials 200 --exact");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["mean_steps"].get<double>(), 0.0);
    EXPECT_GT(j["exact_mean_steps"].get<double>(), 0.0);
}

TEST(Cli, ValidateQuickAndNegativeControl) {
    const auto good = cli("validate --level quick");
    EXPECT_EQ(good.code, 0) << good.out;
    const auto bad = cli("validate --level quick --corrupt-normalization 1.05");
    EXPECT_EQ(bad.code, 4);
    EXPECT_NE(bad.out.find("FAIL sampler"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path ini = scratch() / "run.ini";
    {
        std::ofstream f(ini);
        f << "[simulate]\nn = 32768\nmu = 2.5\ntarget = ball\nsize = 3\ntrials = 17\nseed = 3\n";
    }
    const auto r = cli("--config " + ini.string() + " simulate --trials 9");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    const auto rec = levy3d::read_csv(in).front();
    EXPECT_EQ(rec.trials, 9u);
    EXPECT_EQ(rec.mu, 2.5);
    EXPECT_EQ(rec.n, 32768.0);
}
