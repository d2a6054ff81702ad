#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ppgtrack/io.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;
using namespace ppgtrack;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "ppgtrack");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::size_t count_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write(dir / "clean.synth",
          "windows=6\nhr_start_bpm=96\nhr_end_bpm=104\nsnr_db=30\nseed=5\nsession_id=clean\n");
    ASSERT_EQ(run({"synth", (dir / "clean.synth").string(), "--out", session().string()}).code, 0);
  }
  fs::path session() const { return dir / "clean.csv"; }
  TempDir dir;
};

TEST_F(CliTest, SynthWritesSessionFiles) {
  EXPECT_TRUE(fs::exists(dir / "clean.csv"));
  EXPECT_TRUE(fs::exists(dir / "clean.meta"));
  EXPECT_TRUE(fs::exists(dir / "clean.truth.csv"));
  const auto s = load_session_csv(session());
  EXPECT_EQ(s.truth_bpm->size(), 6u);
}

TEST_F(CliTest, SeedFlagReproducesAndVaries) {
  ASSERT_EQ(run({"synth", (dir / "clean.synth").string(), "--out", (dir / "a.csv").string(), "--seed", "11"}).code, 0);
  ASSERT_EQ(run({"synth", (dir / "clean.synth").string(), "--out", (dir / "b.csv").string(), "--seed", "11"}).code, 0);
  ASSERT_EQ(run({"synth", (dir / "clean.synth").string(), "--out", (dir / "c.csv").string(), "--seed", "12"}).code, 0);
  EXPECT_EQ(read_text(dir / "a.csv"), read_text(dir / "b.csv"));
  EXPECT_NE(read_text(dir / "a.csv"), read_text(dir / "c.csv"));
}

TEST_F(CliTest, TrackFollowsProfile) {
  const CliResult r = run({"track", session().string(), "--out", (dir / "out" / "trace.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Trace t = load_trace(dir / "out" / "trace.csv");
  ASSERT_EQ(t.est_bpm.size(), 6u);
  ASSERT_TRUE(t.truth_bpm);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(t.est_bpm[i], (*t.truth_bpm)[i], 1.0);
  EXPECT_TRUE(fs::exists(dir / "out" / "trace.metrics"));
  EXPECT_NE(r.out.find("aae="), std::string::npos);
}

TEST_F(CliTest, IdenticalInputsGiveIdenticalTraces) {
  ASSERT_EQ(run({"track", session().string(), "--out", (dir / "t1.csv").string()}).code, 0);
  ASSERT_EQ(run({"track", session().string(), "--out", (dir / "t2.csv").string()}).code, 0);
  EXPECT_EQ(read_text(dir / "t1.csv"), read_text(dir / "t2.csv"));
}

TEST_F(CliTest, MissingSessionFails) {
  const CliResult r = run({"track", (dir / "nope.csv").string(), "--out", (dir / "t.csv").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("io:"), std::string::npos) << r.err;
}

TEST_F(CliTest, DumpSpectraOneFilePerWindow) {
  const CliResult r = run({"track", session().string(), "--out", (dir / "t.csv").string(),
                     "--dump-spectra", (dir / "spectra").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_files(dir / "spectra"), 6u);
  const std::string first = read_text(dir / "spectra" / "window_00000.csv");
  EXPECT_EQ(first.rfind("bin_hz=", 0), 0u);
}

TEST_F(CliTest, ConfigFileAppliesAndRejectsTypos) {
  write(dir / "good.cfg", "n_refs=3\n");
  EXPECT_EQ(run({"track", session().string(), "--config", (dir / "good.cfg").string(), "--out",
                 (dir / "t.csv").string()})
                .code,
            0);
  write(dir / "bad.cfg", "nrefs=3\n");
  const CliResult r = run({"track", session().string(), "--config", (dir / "bad.cfg").string(), "--out",
                     (dir / "t.csv").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("unknown key"), std::string::npos);
}

TEST_F(CliTest, SweepWithDefaultNMatchesTrack) {
  ASSERT_EQ(run({"track", session().string(), "--out", (dir / "t.csv").string()}).code, 0);
  const CliResult sweep = run({"sweep-n", session().string(), "--n", "0,100", "--out", (dir / "sweep.csv").string()});
  ASSERT_EQ(sweep.code, 0) << sweep.err;
  const auto track_report = cli::cmd_eval(dir / "t.csv", std::nullopt);
  const auto rows = cli::cmd_sweep_n({session()}, TrackerConfig{}, {0, 100});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[1].report.aae_bpm, track_report.aae_bpm, 1e-3);
  // Skipping reference extraction is never slower than running it.
  EXPECT_LE(rows[0].report.astpf_s, rows[1].report.astpf_s);
  EXPECT_NE(read_text(dir / "sweep.csv").find("session_id,n_refs,aae"), std::string::npos);
}

TEST_F(CliTest, EvalUsesTraceTruthOrTruthFile) {
  write(dir / "e.csv", "window_index,est_bpm\n0,120\n1,124\n2,130\n");
  write(dir / "truth.csv", "truth_bpm\n122\n122\n128\n");
  const CliResult r = run({"eval", (dir / "e.csv").string(), "--truth", (dir / "truth.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("aae=2\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ev=3.55556\n"), std::string::npos) << r.out;
  EXPECT_NE(run({"eval", (dir / "e.csv").string()}).code, 0);
}

TEST_F(CliTest, ManySessionsWithJobs) {
  ASSERT_EQ(run({"synth", (dir / "clean.synth").string(), "--out", (dir / "second.csv").string(), "--seed", "2"}).code, 0);
  const CliResult r = run({"track", session().string(), (dir / "second.csv").string(), "--out",
                     (dir / "many").string(), "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "many" / "clean.trace.csv"));
  EXPECT_TRUE(fs::exists(dir / "many" / "second.trace.csv"));
  // Parallel runs match a sequential one.
  ASSERT_EQ(run({"track", (dir / "second.csv").string(), "--out", (dir / "seq.csv").string()}).code, 0);
  EXPECT_EQ(read_text(dir / "many" / "second.trace.csv"), read_text(dir / "seq.csv"));
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"frobnicate"}).code, 0);
  EXPECT_NE(run({"track", "x.csv"}).code, 0);  // --out is required
  EXPECT_EQ(run({"--help"}).code, 0);
}
