#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Run the CLI binary with the given arguments, capturing exit code and both
/// streams through temp files.
RunResult run_cli(const std::string& args) {
  static int seq = 0;
  fs::path dir = fs::temp_directory_path() / "sievesim_cli_test";
  fs::create_directories(dir);
  fs::path so = dir / ("out" + std::to_string(seq) + ".txt");
  fs::path se = dir / ("err" + std::to_string(seq) + ".txt");
  ++seq;
  std::string cmd = std::string(SIEVESIM_BIN) + " " + args + " > " + so.string() + " 2> " +
                    se.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

std::string config(const char* name) {
  return (fs::path(CONFIG_DIR) / name).string();
}

fs::path fresh_dir(const char* name) {
  fs::path d = fs::temp_directory_path() / "sievesim_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

std::string write_config(const char* name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / "sievesim_cli_test" / name;
  fs::create_directories(p.parent_path());
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("verify-selection agrees with the closed form") {
  RunResult r = run_cli("verify-selection");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("max_residual") != std::string::npos);
  RunResult one = run_cli("verify-selection --m-list 1 --ell-max 5");
  CHECK(one.exit_code == 0);
}

TEST_CASE("mask subcommand writes the pinhole table") {
  fs::path out = fresh_dir("mask5");
  RunResult r =
      run_cli("--config " + config("five_pinhole.json") + " --out " + out.string() + " mask");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("pinholes=5") != std::string::npos);
  std::string csv = slurp(out / "pinholes.csv");
  CHECK(csv.rfind("x_m,y_m,radius_m", 0) == 0);
  CHECK(count_lines(csv) == 6);  // header + 5 rows
  CHECK(fs::exists(out / "mask.pgm"));
  CHECK(fs::exists(out / "mask.cvf1"));
}

TEST_CASE("simulate writes images and the field container") {
  fs::path out = fresh_dir("sim5");
  RunResult r =
      run_cli("--config " + config("five_pinhole.json") + " --out " + out.string() + " simulate");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "intensity.pgm"));
  CHECK(fs::exists(out / "phase.pgm"));
  CHECK(fs::exists(out / "field.cvf1"));
}

TEST_CASE("spectrum outputs are deterministic across runs and thread counts") {
  fs::path o1 = fresh_dir("spec1"), o2 = fresh_dir("spec2");
  RunResult r1 = run_cli("--config " + config("five_pinhole.json") + " --out " + o1.string() +
                         " --threads 1 spectrum");
  RunResult r2 = run_cli("--config " + config("five_pinhole.json") + " --out " + o2.string() +
                         " --threads 3 spectrum");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(o1 / "spectrum.csv") == slurp(o2 / "spectrum.csv"));
  CHECK(slurp(o1 / "coeffs.csv") == slurp(o2 / "coeffs.csv"));
  CHECK(!slurp(o1 / "spectrum.csv").empty());
  CHECK(r1.out == r2.out);
}

TEST_CASE("astig requires astig parameters") {
  fs::path out = fresh_dir("astig5");
  RunResult r =
      run_cli("--config " + config("five_pinhole.json") + " --out " + out.string() + " astig");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error_code=config") != std::string::npos);
}

TEST_CASE("zstack writes one manifest row per slice") {
  std::string cfg = write_config("zstack_small.json", R"({
    "mask": {
      "motifs": [
        { "kind": "explicit", "N": 1, "params": { "points_m": [[1.0e-5, 0.0]] },
          "pinhole_radius_m": 3.0e-7, "handedness": 1 }
      ],
      "replications": [5],
      "compound": false
    },
    "setup": { "lambda_m": 2.5e-12, "model": { "lens": { "f_m": 0.015, "delta_f_m": -33.6e-6 } } },
    "obs": { "nx": 64, "ny": 64, "window_m": 1.0e-8 },
    "outputs": "unused",
    "analysis": { "zstack": { "delta_f_min_m": -36.6e-6, "delta_f_max_m": -30.6e-6,
                               "n_slices": 3, "rms_cap_radius_m": 0.0 } }
  })");
  fs::path out = fresh_dir("zstack3");
  RunResult r = run_cli("--config " + cfg + " --out " + out.string() + " zstack");
  CHECK(r.exit_code == 0);
  std::string manifest = slurp(out / "manifest.csv");
  CHECK(manifest.rfind("index,delta_f_m,ring_rms_m,file", 0) == 0);
  CHECK(count_lines(manifest) == 4);
  CHECK(fs::exists(out / "slice_000.pgm"));
  CHECK(fs::exists(out / "slice_002.pgm"));
  CHECK(r.out.find("slices=3") != std::string::npos);
}

TEST_CASE("config schema violations exit 2 with a machine-readable code") {
  std::string cfg = write_config("unknown_field.json", R"({
    "mask": {
      "motifs": [
        { "kind": "explicit", "N": 1, "params": { "points_m": [[1.0e-5, 0.0]] },
          "pinhole_radius_m": 3.0e-7, "handedness": 1 }
      ],
      "replications": [1],
      "compound": false
    },
    "setup": { "lambda_m": 2.5e-12, "model": { "lens": { "f_m": 0.015, "delta_f_m": -33.6e-6 } } },
    "obs": { "nx": 64, "ny": 64, "window_m": 1.0e-8 },
    "outputs": "unused",
    "wavelength": 1.0
  })");
  RunResult r = run_cli("--config " + cfg + " mask");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error_code=config") != std::string::npos);
  CHECK(r.err.find("wavelength") != std::string::npos);

  RunResult missing = run_cli("mask");
  CHECK(missing.exit_code == 2);

  RunResult nofile = run_cli("--config /nonexistent.json mask");
  CHECK(nofile.exit_code == 2);

  RunResult badflag = run_cli("--definitely-not-a-flag");
  CHECK(badflag.exit_code == 2);
  CHECK(badflag.err.find("error_code=cli") != std::string::npos);
}

TEST_CASE("construction failures exit 3 and name the offending pinholes") {
  std::string cfg = write_config("overlap.json", R"({
    "mask": {
      "motifs": [
        { "kind": "explicit", "N": 2,
          "params": { "points_m": [[1.0e-5, 0.0], [1.01e-5, 0.0]] },
          "pinhole_radius_m": 3.0e-7, "handedness": 1 }
      ],
      "replications": [1],
      "compound": false
    },
    "setup": { "lambda_m": 2.5e-12, "model": { "lens": { "f_m": 0.015, "delta_f_m": -33.6e-6 } } },
    "obs": { "nx": 64, "ny": 64, "window_m": 1.0e-8 },
    "outputs": "unused"
  })");
  fs::path out = fresh_dir("overlap");
  RunResult r = run_cli("--config " + cfg + " --out " + out.string() + " mask");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("error_code=overlap") != std::string::npos);
  CHECK(r.err.find("0") != std::string::npos);  // the offending pair indices
  CHECK(r.err.find("1") != std::string::npos);
}

TEST_CASE("physics preconditions exit 4") {
  std::string cfg = write_config("fresnel.json", R"({
    "mask": {
      "motifs": [
        { "kind": "explicit", "N": 1, "params": { "points_m": [[1.0e-4, 0.0]] },
          "pinhole_radius_m": 1.0e-5, "handedness": 1 }
      ],
      "replications": [1],
      "compound": false
    },
    "setup": { "lambda_m": 2.5e-12, "model": { "lens": { "f_m": 0.015, "delta_f_m": -0.01 } } },
    "obs": { "nx": 64, "ny": 64, "window_m": 1.0e-8 },
    "outputs": "unused"
  })");
  fs::path out = fresh_dir("fresnel");
  RunResult r = run_cli("--config " + cfg + " --out " + out.string() + " simulate");
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("error_code=fresnel_number") != std::string::npos);
}

TEST_CASE("zstack without a lens model is a config error") {
  std::string cfg = write_config("zstack_freespace.json", R"({
    "mask": {
      "motifs": [
        { "kind": "explicit", "N": 1, "params": { "points_m": [[1.0e-5, 0.0]] },
          "pinhole_radius_m": 3.0e-7, "handedness": 1 }
      ],
      "replications": [1],
      "compound": false
    },
    "setup": { "lambda_m": 2.5e-12, "model": { "free_space": { "z_m": 1.0 } } },
    "obs": { "nx": 64, "ny": 64, "window_m": 1.0e-8 },
    "outputs": "unused",
    "analysis": { "zstack": { "delta_f_min_m": -1e-6, "delta_f_max_m": 1e-6, "n_slices": 2 } }
  })");
  RunResult r = run_cli("--config " + cfg + " zstack");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error_code=config") != std::string::npos);
}
