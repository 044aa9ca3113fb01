#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gvfls/cli.hpp"
#include "gvfls/config.hpp"

using namespace gvfls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gvfls_test_cli" / name;
  fs::remove_all(dir);
  return dir;
}

struct Run {
  int code;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gvfls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::stringstream err;
  auto* old = std::cerr.rdbuf(err.rdbuf());
  const int code = run_cli(int(argv.size()), argv.data());
  std::cerr.rdbuf(old);
  set_thread_count(1);
  return {code, err.str()};
}

}  // namespace

TEST(Config, SerializeParseRoundTrip) {
  SegmentationConfig a;
  a.gvf.mu = 0.1234567890123;
  a.levelset.balloon_h0 = -0.25;
  a.synth.kind = ShapeKind::u_shape;
  a.io.input = "some/image.pgm";
  a.seed = 99;
  SegmentationConfig b;
  parse_config_text(b, serialize_config(a));
  EXPECT_EQ(serialize_config(a), serialize_config(b));
  EXPECT_EQ(b.gvf.mu, a.gvf.mu);
  EXPECT_EQ(b.synth.kind, ShapeKind::u_shape);
}

TEST(Config, CommentsAndWhitespace) {
  SegmentationConfig c;
  parse_config_text(c, "# header\n  edge.sigma = 1.5   # trailing\n\nlevelset.beta=0.1\n");
  EXPECT_EQ(c.edge.sigma, 1.5);
  EXPECT_EQ(c.levelset.beta, 0.1);
}

TEST(Config, ErrorsNameTheKey) {
  SegmentationConfig c;
  try {
    apply_assignment(c, "gvf.muu=1");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("gvf.muu"), std::string::npos);
  }
  try {
    apply_assignment(c, "gvf.max_steps=abc");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("gvf.max_steps"), std::string::npos);
  }
  EXPECT_THROW(apply_assignment(c, "no equals sign"), ValidationError);
}

TEST(Cli, SigmaBelowThresholdExitsOne) {
  const auto r = cli({"synth", "--set", "edge.sigma=0.1", "--out", scratch("sigma").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("H1"), std::string::npos);
}

TEST(Cli, MissingInputExitsThreeWithPath) {
  const std::string missing = (fs::temp_directory_path() / "gvfls_no_such_image.pgm").string();
  const auto r = cli({"segment", "--set", "io.input=" + missing, "--out", scratch("missing").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST(Cli, UnknownKeyAndBadUsage) {
  EXPECT_EQ(cli({"synth", "--set", "bogus.key=1"}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
}

TEST(Cli, SynthThenSegmentDisk) {
  const auto dir = scratch("disk");
  ASSERT_EQ(cli({"synth", "--set", "synth.radius=20", "--set", "grid.width=80", "--set", "grid.height=80", "--out",
                 (dir / "img").string()})
                .code,
            0);
  for (const char* f : {"image.pgm", "image.field", "ground_truth.csv", "effective.conf"})
    EXPECT_TRUE(fs::exists(dir / "img" / f)) << f;

  const auto conf = dir / "run.conf";
  std::ofstream(conf) << "grid.width = 80\ngrid.height = 80\nio.input = " << (dir / "img" / "image.pgm").string()
                      << "\nio.snapshot_stride = 50\n";
  const auto r = cli({"segment", "--config", conf.string(), "--out", (dir / "seg").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const char* f : {"contours.csv", "phi_final.field", "phi_000000.field", "phi_000050.field", "gvf_u.field",
                        "gvf_v.field", "gvf_uhat.field", "gvf_vhat.field", "energy.csv", "effective.conf"})
    EXPECT_TRUE(fs::exists(dir / "seg" / f)) << f;

  const auto truth = read_contours_csv(dir / "img" / "ground_truth.csv");
  const auto found = read_contours_csv(dir / "seg" / "contours.csv");
  EXPECT_LE(hausdorff_distance(truth, found), 2.0);

  // effective.conf reproduces the run.
  const auto eff = load_config(dir / "seg" / "effective.conf");
  EXPECT_EQ(eff.io.snapshot_stride, 50);
  EXPECT_EQ(eff.grid.width, 80u);
}

TEST(Cli, NonConvergenceExitsTwo) {
  const auto dir = scratch("nonconv");
  ASSERT_EQ(cli({"synth", "--set", "synth.radius=20", "--set", "grid.width=80", "--set", "grid.height=80", "--out",
                 (dir / "img").string()})
                .code,
            0);
  const auto r = cli({"segment", "--set", "grid.width=80", "--set", "grid.height=80", "--set",
                      "io.input=" + (dir / "img" / "image.pgm").string(), "--set", "levelset.max_steps=10", "--out",
                      (dir / "seg").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::exists(dir / "seg" / "contours.csv"));
}

TEST(Cli, GvfAndDiagnose) {
  const auto dir = scratch("gvf");
  ASSERT_EQ(cli({"synth", "--set", "synth.kind=u_shape", "--out", (dir / "img").string()}).code, 0);
  EXPECT_EQ(cli({"gvf", "--set", "io.input=" + (dir / "img" / "image.field").string(), "--out",
                 (dir / "gvf").string()})
                .code,
            0);
  std::ifstream energy(dir / "gvf" / "energy.csv");
  std::string header;
  std::getline(energy, header);
  EXPECT_EQ(header, "step,energy");

  EXPECT_EQ(cli({"diagnose", "--set", "diagnose.draws=2000", "--seed", "5", "--out", (dir / "diag").string()}).code, 0);
  std::ifstream diag(dir / "diag" / "diagnostics.csv");
  std::stringstream ss;
  ss << diag.rdbuf();
  EXPECT_NE(ss.str().find("properness,2000,0"), std::string::npos) << ss.str();
  EXPECT_NE(ss.str().find("direction_lemma,2000,0"), std::string::npos);
  EXPECT_NE(ss.str().find("lipschitz_sqrt_g[synthetic_u_shape]"), std::string::npos);
}

TEST(Cli, SegmentIsDeterministicAcrossThreads) {
  const auto dir = scratch("threads");
  ASSERT_EQ(cli({"synth", "--set", "synth.radius=20", "--set", "grid.width=80", "--set", "grid.height=80", "--out",
                 (dir / "img").string()})
                .code,
            0);
  const std::string input = "io.input=" + (dir / "img" / "image.pgm").string();
  for (const char* t : {"1", "2", "5"})
    ASSERT_EQ(cli({"segment", "--set", "grid.width=80", "--set", "grid.height=80", "--set", input, "--threads", t,
                   "--out", (dir / t).string()})
                  .code,
              0);
  auto bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const char* f : {"contours.csv", "phi_final.field", "gvf_u.field", "gvf_vhat.field"}) {
    EXPECT_EQ(bytes(dir / "1" / f), bytes(dir / "2" / f)) << f;
    EXPECT_EQ(bytes(dir / "1" / f), bytes(dir / "5" / f)) << f;
  }
}
