#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct CliRun {
    int status;
    std::string out;
};

CliRun faw(const std::string& args) {
    const std::string cmd = std::string(FAW_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun r{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

const std::string kBlock = R"('{"type":"finite","blocks":[1.0]}')";

} // namespace

TEST(Cli, NcCount) {
    const CliRun r = faw("nc-count 4");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "14\n");
}

TEST(Cli, NcListHasCatalanRows) {
    const CliRun r = faw("nc-list 3 --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(csv_rows(r.out).size(), 1u + 5u);
}

TEST(Cli, SemicircleTable) {
    const CliRun r = faw("semicircle-table 3 --format csv");
    ASSERT_EQ(r.status, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    const double expected[] = {0.25, 0.125, 0.078125};
    for (int p = 1; p <= 3; ++p) EXPECT_NEAR(std::stod(rows[p].back()), expected[p - 1], 1e-15);
}

TEST(Cli, FourierScanMatchesSinc) {
    const CliRun r = faw("fourier-scan 'bernoulli(2)' 0 50 1000");
    ASSERT_EQ(r.status, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 1u + 1001u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "re", "abs"}));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        const double sinc = t == 0.0 ? 1.0 : std::sin(t) / t;
        EXPECT_NEAR(std::stod(rows[i][2]), std::abs(sinc), 1e-12) << "t = " << t;
    }
}

TEST(Cli, MomentOfBlockPair) {
    const CliRun r = faw("moment " + kBlock + R"( '[[1,0],[1,0]]' --format json)");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at(0).at("re").get<double>(), 0.25, 1e-15);
}

TEST(Cli, SeededCommandsAreByteIdentical) {
    const std::vector<std::string> cmds{
        "transversality-test " + kBlock + " 2 0.25,0.75 10 1",
        "freeness-test " + kBlock + " 5 10 2",
        "fock-vs-formula " + kBlock + " 4 10 --seed 3",
        "--format json fock-vs-formula 'pair(1)' 4 10 4",
    };
    for (const auto& c : cmds) {
        const CliRun a = faw(c), b = faw(c);
        EXPECT_EQ(a.status, 0) << c;
        EXPECT_FALSE(a.out.empty()) << c;
        EXPECT_EQ(a.out, b.out) << c;
    }
}

TEST(Cli, DifferentSeedsDiffer) {
    EXPECT_NE(faw("fock-vs-formula " + kBlock + " 4 10 1").out, faw("fock-vs-formula " + kBlock + " 4 10 2").out);
}

TEST(Cli, ExitStatuses) {
    EXPECT_EQ(faw("nc-count 13").status, 1);
    EXPECT_EQ(faw("moment '{\"type\":\"nope\"}' '[]'").status, 1);
    EXPECT_EQ(faw("fock-vs-formula " + kBlock + " 4 10").status, 1);
    EXPECT_EQ(faw("fock-vs-formula " + kBlock + " 4 10 1 --seed 2").status, 1);
    EXPECT_EQ(faw("no-such-command").status, 1);
    EXPECT_EQ(faw("--tolerance 1e-300 fock-vs-formula " + kBlock + " 4 10 5").status, 2);
}

TEST(Cli, ConfigRejectsUnknownKeys) {
    const auto path = std::filesystem::temp_directory_path() / "faw_cli_test.cfg";
    std::ofstream(path) << "bogus_key=1\n";
    EXPECT_EQ(faw("--config " + path.string() + " nc-count 3").status, 1);
    std::ofstream(path) << "format=json\n";
    const CliRun r = faw("--config " + path.string() + " nc-count 3");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at(0).at("catalan"), 5);
    std::filesystem::remove(path);
}

TEST(Cli, DumpSpecRoundTrips) {
    const CliRun first = faw("--dump-spec moment " + kBlock + R"( '[[1,0],[0,1]]')");
    ASSERT_EQ(first.status, 0);
    const auto j = nlohmann::json::parse(first.out);
    const std::string rep = "'" + j.at("rep").dump() + "'";
    const std::string poly = "'" + j.at("polynomial").dump() + "'";
    const CliRun second = faw("--dump-spec moment " + rep + " " + poly);
    ASSERT_EQ(second.status, 0);
    EXPECT_EQ(first.out, second.out);

    const CliRun m1 = faw("--dump-spec fourier-scan 'uniform(1)' 0 1 1");
    ASSERT_EQ(m1.status, 0);
    const auto mj = nlohmann::json::parse(m1.out).at("measure");
    EXPECT_EQ(faw("--dump-spec fourier-scan '" + mj.dump() + "' 0 1 1").out, m1.out);
}

TEST(Cli, OutWritesFile) {
    const auto path = std::filesystem::temp_directory_path() / "faw_cli_test.csv";
    std::filesystem::remove(path);
    const CliRun r = faw("--out " + path.string() + " nc-count 5");
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "42\n");
    std::filesystem::remove(path);
}
