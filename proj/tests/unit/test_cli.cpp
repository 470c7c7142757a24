#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fsi/config.hpp"
#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/runner.hpp"
#include "generators.hpp"

using namespace fsi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fsi_unit_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string read(const std::string& name) const {
    std::ifstream is(path / name, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  }
};

std::string quick_config(const fs::path& out, const std::string& family) {
  return "[geometry]\nh = 0.5\n[time]\nT = 0.025\ndt = 0.0125\n[data]\nfamily = " + family +
         "\namplitude = 0.01\n[output]\ndirectory = " + out.string() + "\n";
}

}  // namespace

TEST(Config, ParsesAllSections) {
  const RunConfig c = parse_config(
      "; comment\n[geometry]\nfamily = shell\nh = 0.5\n[material]\nmu = 0.25\n[time]\nT = 0.2\ndt = 0.02\n"
      "[fixed_point]\ninterface_load = traction\nmax_inner = 7\ntrack_energy = false\n"
      "[data]\nfamily = solid-dilation\namplitude = 0.3\n[output]\nvtk = yes\n"
      "[mms]\nh = 0.5, 0.25\n[inequalities]\nlemmas = I1,TSIGMA\np = inf\n[run]\nseed = 17\ndeterministic = 0\n");
  EXPECT_EQ(c.geometry.family, GeometrySpec::Family::Shell);
  EXPECT_DOUBLE_EQ(c.material.mu, 0.25);
  EXPECT_DOUBLE_EQ(c.fixed_point.T, 0.2);
  EXPECT_EQ(c.fixed_point.interface_load, InterfaceLoad::Traction);
  EXPECT_EQ(c.fixed_point.max_inner, 7);
  EXPECT_FALSE(c.fixed_point.track_energy);
  EXPECT_EQ(c.data.family, "solid-dilation");
  EXPECT_TRUE(c.output.vtk);
  EXPECT_EQ(c.mms.h.size(), 2u);
  EXPECT_EQ(c.inequalities.lemmas.size(), 2u);
  EXPECT_TRUE(std::isinf(c.inequalities.params.p));
  EXPECT_EQ(c.seed, 17u);
  EXPECT_FALSE(c.deterministic);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("[geometry]\nradius = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[nowhere]\nh = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[geometry]\nh = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("[material]\nmu = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("[time]\nT = 0.1\ndt = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[geometry]\nh = 1\nh = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[data]\nfamily = vortex\n"), ConfigError);
  EXPECT_THROW(parse_config("[data]\nu0_file = missing.txt\nu1_file = a\nv0_file = b\n"), ConfigError);
  EXPECT_THROW(parse_config("[data]\nu0_file = only_one.txt\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Config, HashIsStableAndSensitive) {
  const RunConfig a = parse_config("[geometry]\nh = 0.25\n");
  const RunConfig b = parse_config("[geometry]\nh = 0.250\n");
  const RunConfig c = parse_config("[geometry]\nh = 0.125\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Config, Fnv1aReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Config, FieldFileRoundTripAndRelativePaths) {
  TempDir tmp;
  auto m = fsi::testing::small_annulus();
  const FieldSnapshot u = fsi::testing::random_field(solid_space(m), 2);
  write_field_file((tmp.path / "u.txt").string(), u);
  const FieldSnapshot back = read_field_file((tmp.path / "u.txt").string(), solid_space(m), 2);
  EXPECT_LT((back.values - u.values).norm(), 1e-15 * (1 + u.values.norm()));
  EXPECT_THROW(read_field_file((tmp.path / "u.txt").string(), fluid_velocity_space(m), 2), ShapeError);
  tmp.write("w.txt", "0\n");
  const RunConfig c =
      parse_config("[data]\nu0_file = u.txt\nu1_file = u.txt\nv0_file = w.txt\n", tmp.path.string());
  EXPECT_TRUE(c.data.from_files());
  EXPECT_TRUE(fs::exists(c.data.u0_file));
}

TEST(Runner, ZeroFamilySimulatesInOneIteration) {
  TempDir tmp;
  const std::string cfg = tmp.write("zero.ini", quick_config(tmp.path / "out", "zero") + "vtk = true\n");
  std::ostringstream out, err;
  ASSERT_EQ(run("simulate", cfg, out, err), kExitOk) << err.str();
  const std::string csv = tmp.read("out/iterations.csv");
  EXPECT_EQ(csv, "outer_k,inner_k,inner_increment,ratio,Jmin,Jmax,energy_residual\n"
                 "1,1,0.0000000000e+00,,1.000000000000,1.000000000000,0.0000000000e+00\n");
  EXPECT_TRUE(fs::exists(tmp.path / "out/energy.csv"));
  EXPECT_TRUE(fs::exists(tmp.path / "out/fields_final.vtk"));
  const std::string manifest = tmp.read("out/manifest.txt");
  EXPECT_NE(manifest.find("config_hash = " + load_config(cfg).hash()), std::string::npos);
  EXPECT_NE(manifest.find("seed = 1"), std::string::npos);
  EXPECT_NE(manifest.find("code_version = "), std::string::npos);
}

TEST(Runner, FluxFixtureExitsWithCompatibilityCode) {
  TempDir tmp;
  const std::string cfg = tmp.write("flux.ini", quick_config(tmp.path / "out", "flux-violating"));
  std::ostringstream out, err;
  EXPECT_EQ(run("compat", cfg, out, err), kExitCompat);
  EXPECT_NE(tmp.read("out/compat.txt").find("failed = (iv)"), std::string::npos);
}

TEST(Runner, CompatiblePassesAndUsageErrorsMapToOne) {
  TempDir tmp;
  const std::string cfg = tmp.write("ok.ini", quick_config(tmp.path / "out", "tangential-swirl"));
  std::ostringstream out, err;
  EXPECT_EQ(run("compat", cfg, out, err), kExitOk);
  EXPECT_EQ(run("explode", cfg, out, err), kExitUsage);
  EXPECT_EQ(run("simulate", tmp.write("bad.ini", "[geometry]\nh = x\n"), out, err), kExitUsage);
}

TEST(Runner, StarvedIterationExitsWithNonConvergence) {
  TempDir tmp;
  const std::string cfg = tmp.write(
      "starve.ini", quick_config(tmp.path / "out", "tangential-swirl") + "[fixed_point]\nmax_inner = 1\n");
  std::ostringstream out, err;
  EXPECT_EQ(run("simulate", cfg, out, err), kExitNonConvergence);
  EXPECT_NE(tmp.read("out/manifest.txt").find("exit_code = 3"), std::string::npos);
}

TEST(Runner, VerifyAndInequalitiesWriteArtifacts) {
  TempDir tmp;
  const std::string cfg = tmp.write(
      "v.ini", quick_config(tmp.path / "out", "zero") + "[inequalities]\nsamples = 5\nlemmas = I1, HOLDER_ST\n");
  std::ostringstream out, err;
  EXPECT_EQ(run("verify", cfg, out, err), kExitOk);
  EXPECT_NE(tmp.read("out/verify.txt").find("status = pass"), std::string::npos);
  EXPECT_EQ(run("inequalities", cfg, out, err), kExitOk);
  const std::string csv = tmp.read("out/inequalities.csv");
  EXPECT_EQ(csv.rfind("lemma,params,T,max_ratio,fitted_exponent,seed\n", 0), 0u);
  EXPECT_NE(csv.find("HOLDER_ST"), std::string::npos);
}

TEST(Runner, MmsWritesConvergenceTable) {
  TempDir tmp;
  const std::string cfg =
      tmp.write("m.ini", quick_config(tmp.path / "out", "zero") + "[mms]\nh = 0.5, 0.25\nT = 0.25\n");
  std::ostringstream out, err;
  ASSERT_EQ(run("mms", cfg, out, err), kExitOk) << err.str();
  const std::string csv = tmp.read("out/convergence.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "solver,h,dt,error,secondary_error,order,secondary_order");
  EXPECT_NE(csv.find("elastic"), std::string::npos);
  EXPECT_NE(csv.find("stokes"), std::string::npos);
}

TEST(Runner, RepeatedRunsAreByteIdentical) {
  TempDir tmp;
  std::string csv[2];
  for (int k = 0; k < 2; ++k) {
    const std::string cfg = tmp.write("r" + std::to_string(k) + ".ini",
                                      quick_config(tmp.path / ("o" + std::to_string(k)), "tangential-swirl"));
    std::ostringstream out, err;
    ASSERT_EQ(run("simulate", cfg, out, err), kExitOk) << err.str();
    csv[k] = tmp.read("o" + std::to_string(k) + "/iterations.csv") + tmp.read("o" + std::to_string(k) + "/energy.csv");
  }
  EXPECT_EQ(csv[0], csv[1]);
}
