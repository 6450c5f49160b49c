#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using cellseg::cli::run;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cellseg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
  }

  std::string read(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  // Writes a small synthetic image into `images`.
  void synth(std::uint64_t seed) {
    const fs::path spec = dir_ / "spec.txt";
    write(spec, "width = 200\nheight = 160\ndisks = 2\nblobs = 1\ndebris = 10\n");
    ASSERT_EQ(call({"synth", "--seed", std::to_string(seed), "--spec", spec.string(), "--out",
                    (dir_ / "images").string()}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(call({}), cellseg::cli::kUsage); }

TEST_F(Cli, RunWritesCsvMaskAndOverlay) {
  for (int seed = 1; seed <= 3; ++seed) synth(static_cast<std::uint64_t>(seed));
  ASSERT_EQ(call({"run", (dir_ / "images").string(), "--out", (dir_ / "out").string()}), 0) << err_.str();
  const std::string csv = read(dir_ / "out" / "counts.csv");
  EXPECT_EQ(csv.rfind("file,spheric,nonspheric,rejected,total\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  for (int seed = 1; seed <= 3; ++seed) {
    const std::string stem = "synth_" + std::to_string(seed);
    EXPECT_TRUE(fs::exists(dir_ / "out" / (stem + "_mask.pgm")));
    EXPECT_TRUE(fs::exists(dir_ / "out" / (stem + "_overlay.ppm")));
  }
  EXPECT_TRUE(fs::exists(dir_ / "images" / "truth" / "synth_1.csv"));
}

TEST_F(Cli, ConfigFileAndOverrides) {
  synth(1);
  const fs::path cfg = dir_ / "cfg.txt";
  write(cfg, "# test\nmin_area = 10\n");
  const std::string img = (dir_ / "images" / "synth_1.ppm").string();
  EXPECT_EQ(call({"run", img, "--out", (dir_ / "o1").string(), "--config", cfg.string(), "--set", "emphasis=square"}),
            0)
      << err_.str();
  EXPECT_EQ(call({"run", img, "--out", (dir_ / "o2").string(), "--set", "emphasis=bogus"}),
            cellseg::cli::kBadConfig);
  EXPECT_NE(err_.str().find("config error"), std::string::npos);
  write(cfg, "colour = red\n");
  EXPECT_EQ(call({"run", img, "--out", (dir_ / "o3").string(), "--config", cfg.string()}), cellseg::cli::kBadConfig);
  EXPECT_EQ(call({"run", img, "--out", (dir_ / "o4").string(), "--config", (dir_ / "none.txt").string()}),
            cellseg::cli::kBadConfig);
  EXPECT_EQ(call({"run", img, "--out", (dir_ / "o5").string(), "--set", "emphasis"}), cellseg::cli::kBadConfig);
}

TEST_F(Cli, DistinctExitCodes) {
  synth(1);
  const std::string img = (dir_ / "images" / "synth_1.ppm").string();
  EXPECT_EQ(call({"run", (dir_ / "missing").string(), "--out", (dir_ / "o").string()}),
            cellseg::cli::kUnreadableInput);
  EXPECT_NE(err_.str().find("cannot read input"), std::string::npos);

  write(dir_ / "blocker", "x");
  EXPECT_EQ(call({"run", img, "--out", (dir_ / "blocker" / "sub").string()}), cellseg::cli::kUnwritableOutput);
  EXPECT_NE(err_.str().find("output"), std::string::npos);

  fs::create_directories(dir_ / "bad");
  write(dir_ / "bad" / "broken.ppm", "P6\n4 4\n255\nxx");
  EXPECT_EQ(call({"run", (dir_ / "bad").string(), "--out", (dir_ / "o6").string()}), cellseg::cli::kUnreadableInput);
  EXPECT_EQ(read(dir_ / "o6" / "counts.csv"), "file,spheric,nonspheric,rejected,total\n");
}

TEST_F(Cli, InspectWritesOneStage) {
  synth(2);
  const std::string img = (dir_ / "images" / "synth_2.ppm").string();
  const fs::path target = dir_ / "mask.pgm";
  ASSERT_EQ(call({"inspect", img, "--stage", "mask", "--out", target.string()}), 0) << err_.str();
  EXPECT_EQ(read(target).substr(0, 3), "P5\n");
  // Per-channel masks come out as one colour image.
  ASSERT_EQ(call({"inspect", img, "--stage", "otsu_mask", "--out", (dir_ / "otsu.ppm").string()}), 0);
  EXPECT_EQ(read(dir_ / "otsu.ppm").substr(0, 3), "P6\n");
  EXPECT_EQ(call({"inspect", img, "--stage", "nonsense"}), cellseg::cli::kUsage);
  EXPECT_NE(err_.str().find("otsu_mask"), std::string::npos);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  synth(4);
  ASSERT_EQ(call({"run", (dir_ / "images").string(), "--out", (dir_ / "a").string()}), 0);
  ASSERT_EQ(call({"run", (dir_ / "images").string(), "--out", (dir_ / "b").string()}), 0);
  for (const char* name : {"counts.csv", "synth_4_mask.pgm", "synth_4_overlay.ppm"}) {
    EXPECT_EQ(read(dir_ / "a" / name), read(dir_ / "b" / name)) << name;
  }
}
