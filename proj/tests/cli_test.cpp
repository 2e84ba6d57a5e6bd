#include "fogsim/config.hpp"
#include "fogsim/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace fogsim;

namespace {

const char* tiny_config = R"({
  "scenario": {"id": "tiny", "seed": 4},
  "fleet": {"devices_per_cluster": 5},
  "workload": {"app_count": 4, "arrival_window_s": 60}
})";

class Scratch : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("fogsim_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        config_ = dir_ / "tiny.json";
        std::ofstream(config_) << tiny_config;
    }
    void TearDown() override { fs::remove_all(dir_); }

    int fogsim(const std::string& args, const fs::path& out_env = {}) const
    {
        std::string cmd;
        if (!out_env.empty()) cmd += "FOGSIM_OUT_DIR='" + out_env.string() + "' ";
        cmd += std::string("'") + FOGSIM_BIN + "' " + args + " >'" + (dir_ / "stdout").string() + "' 2>'"
             + (dir_ / "stderr").string() + "'";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string text(const fs::path& p) const
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    fs::path config_;
};

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_F(Scratch, RunWritesCsvAndJsonPerCell)
{
    const auto out = dir_ / "a";
    ASSERT_EQ(fogsim("run '" + config_.string() + "' --out '" + out.string() + "'"), 0) << text(dir_ / "stderr");
    const auto csv = text(out / "tiny.csv");
    EXPECT_EQ(lines(csv), 5u); // header + mc/baseline x on/off
    EXPECT_TRUE(fs::exists(out / "tiny.json"));
    EXPECT_NE(csv.find("tiny,none,mc,on,4,"), std::string::npos) << csv;
    EXPECT_EQ(text(dir_ / "stdout"), csv);
}

TEST_F(Scratch, RunTwiceIsByteIdentical)
{
    ASSERT_EQ(fogsim("run '" + config_.string() + "' --out '" + (dir_ / "a").string() + "'"), 0);
    ASSERT_EQ(fogsim("run '" + config_.string() + "' --out '" + (dir_ / "b").string() + "'"), 0);
    EXPECT_EQ(text(dir_ / "a" / "tiny.csv"), text(dir_ / "b" / "tiny.csv"));
    EXPECT_EQ(text(dir_ / "a" / "tiny.json"), text(dir_ / "b" / "tiny.json"));
}

TEST_F(Scratch, OutputDirectoryFromEnvironment)
{
    const auto out = dir_ / "env";
    ASSERT_EQ(fogsim("run '" + config_.string() + "' --policy mc --reservation off", out), 0);
    EXPECT_EQ(lines(text(out / "tiny.csv")), 2u);
}

TEST_F(Scratch, MalformedConfigNamesFieldAndWritesNothing)
{
    std::ofstream(config_) << R"({"scenario": {"id": "bad"}, "fleet": {"battery_pct": [20, 120]}})";
    const auto out = dir_ / "bad";
    EXPECT_EQ(fogsim("run '" + config_.string() + "' --out '" + out.string() + "'"), 2);
    EXPECT_NE(text(dir_ / "stderr").find("battery_pct"), std::string::npos) << text(dir_ / "stderr");
    EXPECT_FALSE(fs::exists(out));

    EXPECT_EQ(fogsim("sweep '" + config_.string() + "' --axis apps --out '" + out.string() + "'"), 2);
    EXPECT_FALSE(fs::exists(out));
}

TEST_F(Scratch, UnknownAxisIsAUsageError)
{
    EXPECT_EQ(fogsim("sweep '" + config_.string() + "' --axis colour --out '" + (dir_ / "x").string() + "'"), 2);
    EXPECT_NE(text(dir_ / "stderr").find("--axis"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir_ / "x"));
}

TEST_F(Scratch, SweepResumesFinishedCells)
{
    const auto out = dir_ / "sw";
    const std::string args = "sweep '" + config_.string() + "' --axis battery --seeds 2 --workers 2 --out '"
                           + out.string() + "'";
    ASSERT_EQ(fogsim(args), 0) << text(dir_ / "stderr");
    EXPECT_NE(text(dir_ / "stderr").find("6 cells run, 0 reused"), std::string::npos) << text(dir_ / "stderr");
    const auto first = text(out / "tiny_battery.csv");
    // 6 cells x 4 pairs x (2 seeds + mean) + header
    EXPECT_EQ(lines(first), 6u * 4u * 3u + 1u);

    // drop one cell file; only it is recomputed
    std::vector<fs::path> cell_files;
    for (const auto& e : fs::directory_iterator(out / "cells")) cell_files.push_back(e.path());
    ASSERT_EQ(cell_files.size(), 6u);
    fs::remove(cell_files.front());
    ASSERT_EQ(fogsim(args), 0);
    EXPECT_NE(text(dir_ / "stderr").find("1 cells run, 5 reused"), std::string::npos) << text(dir_ / "stderr");
    EXPECT_EQ(text(out / "tiny_battery.csv"), first);
}

TEST(Sweep, CellsPerAxis)
{
    using sweep::Axis;
    const auto apps = sweep::cells(Axis::Apps);
    ASSERT_EQ(apps.size(), 8u);
    EXPECT_EQ(apps.front().label, "70");
    EXPECT_EQ(apps.back().label, "560");
    EXPECT_EQ(sweep::cells(Axis::DeadlineVariation).size(), 8u);
    EXPECT_EQ(sweep::cells(Axis::FreeResource).size(), 6u);
    EXPECT_EQ(sweep::cells(Axis::Battery).size(), 6u);
    const auto af = sweep::cells(Axis::Fluctuation);
    ASSERT_EQ(af.size(), 9u);
    EXPECT_EQ(af.front().label, "AF1");
    EXPECT_EQ(af.back().label, "AF9");
    EXPECT_FALSE(sweep::parse_axis("colour"));
    EXPECT_EQ(sweep::parse_axis("deadline_variation"), Axis::DeadlineVariation);
}

TEST(Sweep, EveryRowCarriesSeedOrMean)
{
    const auto base = config::parse(tiny_config);
    auto small = base;
    small.fleet.devices_per_cluster = 3;
    const auto cell = sweep::cells(sweep::Axis::DeadlineVariation).front();
    const auto rows = sweep::run_cell(small, sweep::Axis::DeadlineVariation, cell, 3, {});
    ASSERT_EQ(rows.size(), 4u * 4u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto expected = i % 4 == 3 ? std::string("mean") : std::to_string(4 + i % 4);
        EXPECT_EQ(rows[i].seed, expected);
        EXPECT_EQ(rows[i].axis_value, "10");
    }
}
