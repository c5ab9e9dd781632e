// sievesim: mask generation, propagation, and OAM analysis from JSON configs.
// Subcommands: mask, simulate, spectrum, astig, zstack, verify-selection.
// Exit codes: 0 ok, 2 config, 3 construction, 4 physics precondition,
// 5 self-check failure.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sieve/diffraction.hpp"
#include "sieve/errors.hpp"
#include "sieve/field.hpp"
#include "sieve/field_io.hpp"
#include "sieve/lg.hpp"
#include "sieve/mask.hpp"
#include "sieve/mask_recipe.hpp"
#include "sieve/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sieve;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RasterSpec {
  int nx = 0;
  int ny = 0;
  double window = 0;
};

struct ZStackSpec {
  double delta_f_min = 0;
  double delta_f_max = 0;
  int n_slices = 0;
  double rms_cap_radius = 0;  // <= 0: whole inscribed circle
};

struct AnalysisSpec {
  std::vector<double> ring_radii;
  int n_angular = 1024;
  int profile_bins = 256;
  double ring_threshold = 0.3;
  std::optional<double> stripe_orientation;
  std::optional<ZStackSpec> zstack;
};

struct RunConfig {
  MaskRecipe mask;
  OpticalSetup setup;
  int nx = 0;
  int ny = 0;
  double window = 0;
  std::optional<double> w0;  // default window / 10
  int p_max = 0;
  int ell_abs_max = 0;
  bool has_basis = false;
  std::string outputs;
  AnalysisSpec analysis;
  std::optional<RasterSpec> mask_raster;
};

void check_keys(const json& o, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (const auto& item : o.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(ctx + ": unknown field '" + item.key() + "'");
  }
}

const json& need(const json& o, const char* key, const std::string& ctx) {
  auto it = o.find(key);
  if (it == o.end()) throw ConfigError(ctx + ": missing field '" + key + "'");
  return *it;
}

double as_number(const json& v, const std::string& ctx) {
  if (!v.is_number()) throw ConfigError(ctx + ": expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& ctx) {
  if (!v.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
  return v.get<int>();
}

OpticalSetup parse_setup(const json& s) {
  if (!s.is_object()) throw ConfigError("setup: expected an object");
  check_keys(s, {"lambda_m", "model", "astig"}, "setup");
  OpticalSetup setup;
  setup.lambda = as_number(need(s, "lambda_m", "setup"), "setup.lambda_m");
  const json& model = need(s, "model", "setup");
  if (!model.is_object()) throw ConfigError("setup.model: expected an object");
  check_keys(model, {"free_space", "lens"}, "setup.model");
  if (model.contains("free_space") == model.contains("lens"))
    throw ConfigError("setup.model: exactly one of 'free_space' or 'lens' required");
  if (model.contains("free_space")) {
    const json& fsj = model["free_space"];
    check_keys(fsj, {"z_m"}, "setup.model.free_space");
    setup.model = FreeSpaceModel{as_number(need(fsj, "z_m", "setup.model.free_space"),
                                           "setup.model.free_space.z_m")};
  } else {
    const json& lj = model["lens"];
    check_keys(lj, {"f_m", "delta_f_m"}, "setup.model.lens");
    setup.model = LensModel{as_number(need(lj, "f_m", "setup.model.lens"), "setup.model.lens.f_m"),
                            as_number(need(lj, "delta_f_m", "setup.model.lens"),
                                      "setup.model.lens.delta_f_m")};
  }
  if (s.contains("astig")) {
    const json& a = s["astig"];
    check_keys(a, {"delta_fx_m", "delta_fy_m", "orientation_rad"}, "setup.astig");
    setup.astig = AstigParams{
        as_number(need(a, "delta_fx_m", "setup.astig"), "setup.astig.delta_fx_m"),
        as_number(need(a, "delta_fy_m", "setup.astig"), "setup.astig.delta_fy_m"),
        as_number(need(a, "orientation_rad", "setup.astig"), "setup.astig.orientation_rad")};
  }
  return setup;
}

AnalysisSpec parse_analysis(const json& a) {
  AnalysisSpec spec;
  check_keys(a,
             {"ring_radii_m", "n_angular", "profile_bins", "ring_threshold",
              "stripe_orientation_rad", "zstack"},
             "analysis");
  if (a.contains("ring_radii_m")) {
    const json& rr = a["ring_radii_m"];
    if (!rr.is_array()) throw ConfigError("analysis.ring_radii_m: expected an array");
    for (const json& v : rr) spec.ring_radii.push_back(as_number(v, "analysis.ring_radii_m[]"));
  }
  if (a.contains("n_angular")) spec.n_angular = as_int(a["n_angular"], "analysis.n_angular");
  if (a.contains("profile_bins"))
    spec.profile_bins = as_int(a["profile_bins"], "analysis.profile_bins");
  if (a.contains("ring_threshold"))
    spec.ring_threshold = as_number(a["ring_threshold"], "analysis.ring_threshold");
  if (a.contains("stripe_orientation_rad"))
    spec.stripe_orientation =
        as_number(a["stripe_orientation_rad"], "analysis.stripe_orientation_rad");
  if (a.contains("zstack")) {
    const json& z = a["zstack"];
    check_keys(z, {"delta_f_min_m", "delta_f_max_m", "n_slices", "rms_cap_radius_m"},
               "analysis.zstack");
    ZStackSpec zs;
    zs.delta_f_min = as_number(need(z, "delta_f_min_m", "analysis.zstack"),
                               "analysis.zstack.delta_f_min_m");
    zs.delta_f_max = as_number(need(z, "delta_f_max_m", "analysis.zstack"),
                               "analysis.zstack.delta_f_max_m");
    zs.n_slices = as_int(need(z, "n_slices", "analysis.zstack"), "analysis.zstack.n_slices");
    if (z.contains("rms_cap_radius_m"))
      zs.rms_cap_radius = as_number(z["rms_cap_radius_m"], "analysis.zstack.rms_cap_radius_m");
    if (zs.n_slices < 1) throw ConfigError("analysis.zstack.n_slices: must be >= 1");
    spec.zstack = zs;
  }
  return spec;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json root;
  try {
    root = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  check_keys(root, {"mask", "setup", "obs", "basis", "outputs", "analysis", "mask_raster"},
             "config");

  RunConfig cfg;
  cfg.mask = parse_mask_recipe(need(root, "mask", "config").dump());
  cfg.setup = parse_setup(need(root, "setup", "config"));

  const json& obs = need(root, "obs", "config");
  check_keys(obs, {"nx", "ny", "window_m"}, "obs");
  cfg.nx = as_int(need(obs, "nx", "obs"), "obs.nx");
  cfg.ny = as_int(need(obs, "ny", "obs"), "obs.ny");
  cfg.window = as_number(need(obs, "window_m", "obs"), "obs.window_m");
  if (cfg.nx < 2 || cfg.ny < 2) throw ConfigError("obs: nx and ny must be >= 2");
  if (!(cfg.window > 0)) throw ConfigError("obs.window_m: must be positive");

  if (root.contains("basis")) {
    const json& b = root["basis"];
    check_keys(b, {"w0_m", "p_max", "ell_abs_max"}, "basis");
    if (b.contains("w0_m")) cfg.w0 = as_number(b["w0_m"], "basis.w0_m");
    cfg.p_max = as_int(need(b, "p_max", "basis"), "basis.p_max");
    cfg.ell_abs_max = as_int(need(b, "ell_abs_max", "basis"), "basis.ell_abs_max");
    if (cfg.p_max < 0) throw ConfigError("basis.p_max: must be >= 0");
    if (cfg.ell_abs_max < 0) throw ConfigError("basis.ell_abs_max: must be >= 0");
    cfg.has_basis = true;
  }

  cfg.outputs = need(root, "outputs", "config").is_string()
                    ? root["outputs"].get<std::string>()
                    : throw ConfigError("outputs: expected a directory path string");

  if (root.contains("analysis")) {
    const json& a = root["analysis"];
    if (!a.is_object()) throw ConfigError("analysis: expected an object");
    cfg.analysis = parse_analysis(a);
  }
  if (root.contains("mask_raster")) {
    const json& r = root["mask_raster"];
    check_keys(r, {"nx", "ny", "window_m"}, "mask_raster");
    RasterSpec rs;
    rs.nx = as_int(need(r, "nx", "mask_raster"), "mask_raster.nx");
    rs.ny = as_int(need(r, "ny", "mask_raster"), "mask_raster.ny");
    rs.window = as_number(need(r, "window_m", "mask_raster"), "mask_raster.window_m");
    cfg.mask_raster = rs;
  }
  return cfg;
}

GridSpec square_grid(int nx, int ny, double window) {
  GridSpec g;
  g.nx = nx;
  g.ny = ny;
  g.pitch_x = window / nx;
  g.pitch_y = window / ny;
  return g;
}

GridSpec obs_grid(const RunConfig& cfg) { return square_grid(cfg.nx, cfg.ny, cfg.window); }

LGBasisSpec basis_of(const RunConfig& cfg) {
  if (!cfg.has_basis) throw ConfigError("this command requires a 'basis' section in the config");
  LGBasisSpec b;
  b.w0 = cfg.w0.value_or(cfg.window / 10.0);
  b.p_max = cfg.p_max;
  b.ell_min = -cfg.ell_abs_max;
  b.ell_max = cfg.ell_abs_max;
  b.window = cfg.window;
  return b;
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

/// Raster covering every pinhole with pitch a_min/4 when no explicit spec is
/// given. Sizes stay modest because pinholes are tiny relative to the masks.
GridSpec raster_grid(const RunConfig& cfg, const PinholeMask& mask) {
  if (cfg.mask_raster)
    return square_grid(cfg.mask_raster->nx, cfg.mask_raster->ny, cfg.mask_raster->window);
  double reach = 0, a_min = 0;
  for (const Pinhole& p : mask.pinholes) {
    reach = std::max(reach, std::hypot(p.x, p.y) + p.radius);
    a_min = a_min == 0 ? p.radius : std::min(a_min, p.radius);
  }
  if (reach == 0 || a_min == 0) throw ConfigError("mask_raster required for an empty mask");
  double window = 2.1 * reach;
  int n = static_cast<int>(std::ceil(window / (a_min / 4.0)));
  n += n % 2;
  return square_grid(n, n, window);
}

int cmd_mask(const RunConfig& cfg) {
  PinholeMask mask = build_mask(cfg.mask);
  write_pinhole_csv(out_path(cfg.outputs, "pinholes.csv"), mask);
  ComplexField raster = rasterize(mask, raster_grid(cfg, mask));
  write_pgm16_intensity(out_path(cfg.outputs, "mask.pgm"), raster);
  write_cvf1(out_path(cfg.outputs, "mask.cvf1"), raster);
  std::printf("pinholes=%zu symmetry_m=%d\n", mask.pinholes.size(), mask.symmetry_m);
  return 0;
}

ComplexField propagate(const RunConfig& cfg) {
  PinholeMask mask = build_mask(cfg.mask);
  return propagate_sieve(mask, cfg.setup, obs_grid(cfg));
}

int cmd_simulate(const RunConfig& cfg) {
  ComplexField f = propagate(cfg);
  write_pgm16_intensity(out_path(cfg.outputs, "intensity.pgm"), f);
  write_pgm16_phase(out_path(cfg.outputs, "phase.pgm"), f);
  write_cvf1(out_path(cfg.outputs, "field.cvf1"), f);
  std::printf("power=%.17g z_label=%.17g\n", field_power(f), f.z_label);
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  LGBasisSpec basis = basis_of(cfg);
  ComplexField f = propagate(cfg);
  CoeffTable coeffs = decompose(f, basis);
  OAMSpectrum spec = oam_spectrum(coeffs);
  write_coeff_csv(out_path(cfg.outputs, "coeffs.csv"), coeffs);
  write_spectrum_csv(out_path(cfg.outputs, "spectrum.csv"), spec);
  int argmax = spec.ell_min;
  for (int l = spec.ell_min; l <= spec.ell_max; ++l)
    if (spec.at(l) > spec.at(argmax)) argmax = l;
  std::printf("dominant_ell=%d dominant_power=%.6f\n", argmax, spec.at(argmax));
  if (!cfg.analysis.ring_radii.empty()) {
    std::ofstream rep(out_path(cfg.outputs, "windings.csv"), std::ios::binary);
    rep << "radius_m,winding,residual\n";
    for (double r : cfg.analysis.ring_radii) {
      WindingResult w = phase_winding(f, r, cfg.analysis.n_angular);
      char line[128];
      std::snprintf(line, sizeof line, "%.17g,%d,%.6f", r, w.winding, w.residual);
      rep << line << "\n";
      std::printf("radius_m=%.6g winding=%d residual=%.3f\n", r, w.winding, w.residual);
    }
  }
  return 0;
}

int cmd_astig(const RunConfig& cfg) {
  if (!cfg.setup.astig)
    throw ConfigError("astig command requires setup.astig in the config");
  PinholeMask mask = build_mask(cfg.mask);
  ComplexField f = astigmatic_propagate(mask, cfg.setup, obs_grid(cfg));
  write_pgm16_intensity(out_path(cfg.outputs, "astig_intensity.pgm"), f);
  double orient = cfg.analysis.stripe_orientation
                      ? *cfg.analysis.stripe_orientation
                      : cfg.setup.astig->orientation + kPi / 2.0;
  int stripes = count_dark_stripes(f, orient);
  std::printf("stripes=%d orientation_rad=%.6f\n", stripes, orient);
  return 0;
}

int cmd_zstack(const RunConfig& cfg) {
  if (!cfg.analysis.zstack)
    throw ConfigError("zstack command requires analysis.zstack in the config");
  const LensModel* lens = std::get_if<LensModel>(&cfg.setup.model);
  if (!lens) throw ConfigError("zstack command requires the lens model");
  const ZStackSpec& zs = *cfg.analysis.zstack;
  std::vector<double> dfs(zs.n_slices);
  for (int i = 0; i < zs.n_slices; ++i)
    dfs[i] = zs.n_slices == 1 ? zs.delta_f_min
                              : zs.delta_f_min + (zs.delta_f_max - zs.delta_f_min) * i /
                                                     (zs.n_slices - 1.0);
  PinholeMask mask = build_mask(cfg.mask);
  ZStackResult res =
      z_stack(mask, cfg.setup.lambda, lens->f, dfs, obs_grid(cfg), zs.rms_cap_radius);
  std::ofstream man(out_path(cfg.outputs, "manifest.csv"), std::ios::binary);
  man << "index,delta_f_m,ring_rms_m,file\n";
  size_t argmin = 0;
  for (size_t i = 0; i < res.slices.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "slice_%03zu.pgm", i);
    write_pgm16_intensity(out_path(cfg.outputs, name), res.slices[i]);
    char line[160];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%s", i, res.delta_f[i], res.ring_rms[i],
                  name);
    man << line << "\n";
    if (res.ring_rms[i] < res.ring_rms[argmin]) argmin = i;
  }
  std::printf("slices=%d argmin_index=%zu argmin_delta_f_m=%.6g\n", zs.n_slices, argmin,
              res.delta_f[argmin]);
  return 0;
}

int cmd_verify_selection(const std::vector<int>& m_list, int ell_abs_max) {
  if (m_list.empty()) throw ConfigError("verify-selection needs at least one m");
  if (ell_abs_max < 0) throw ConfigError("ell-max must be >= 0");
  double worst = 0;
  std::printf("%4s %5s %7s %22s %10s\n", "m", "ell", "factor", "complex_sum", "residual");
  for (int m : m_list) {
    if (m < 1) throw ConfigError("every m must be >= 1");
    for (int ell = -ell_abs_max; ell <= ell_abs_max; ++ell) {
      int factor = selection_factor(ell, m);
      cplx sum = selection_sum(ell, m);
      double resid = std::abs(sum - static_cast<double>(factor));
      worst = std::max(worst, resid);
      std::printf("%4d %5d %7d %11.6f%+11.6fi %10.3e\n", m, ell, factor, sum.real(), sum.imag(),
                  resid);
    }
  }
  std::printf("max_residual=%.3e\n", worst);
  if (worst > 1e-12)
    throw SelfCheckError("selection sum disagrees with the closed form beyond 1e-12");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinhole-sieve diffraction and OAM analysis"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  unsigned long long seed = 0;  // reserved, no stochastic paths yet
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (overrides config 'outputs')");
  app.add_option("--threads", threads, "worker threads (0 = hardware default)");
  app.add_option("--seed", seed, "reserved");

  CLI::App* c_mask = app.add_subcommand("mask", "build the pinhole mask; write CSV, PGM, CVF1");
  CLI::App* c_sim = app.add_subcommand("simulate", "propagate to the observation plane");
  CLI::App* c_spec = app.add_subcommand("spectrum", "modal power spectrum and ring windings");
  CLI::App* c_astig = app.add_subcommand("astig", "astigmatic transform and stripe count");
  CLI::App* c_zstack = app.add_subcommand("zstack", "defocus scan with per-slice rms radius");
  CLI::App* c_verify =
      app.add_subcommand("verify-selection", "check the rotational selection rule closed form");
  std::vector<int> m_list{2, 3, 5, 7, 11};
  int ell_abs_max = 30;
  c_verify->add_option("--m-list", m_list, "rotational orders to check");
  c_verify->add_option("--ell-max", ell_abs_max, "check |ell| up to this value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error_code=cli\nerror: %s\n", e.what());
    return 2;
  }

  try {
    set_thread_count(threads);
    if (c_verify->parsed()) return cmd_verify_selection(m_list, ell_abs_max);
    if (config_path.empty()) throw ConfigError("this command requires --config");
    RunConfig cfg = load_run_config(config_path);
    if (!out_dir.empty()) cfg.outputs = out_dir;
    if (cfg.outputs.empty()) throw ConfigError("no output directory (config 'outputs' or --out)");
    if (c_mask->parsed()) return cmd_mask(cfg);
    if (c_sim->parsed()) return cmd_simulate(cfg);
    if (c_spec->parsed()) return cmd_spectrum(cfg);
    if (c_astig->parsed()) return cmd_astig(cfg);
    if (c_zstack->parsed()) return cmd_zstack(cfg);
    throw ConfigError("unknown subcommand");
  } catch (const Error& e) {
    std::fprintf(stderr, "error_code=%s\nerror: %s\n", e.code().c_str(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error_code=internal\nerror: %s\n", e.what());
    return 1;
  }
}
