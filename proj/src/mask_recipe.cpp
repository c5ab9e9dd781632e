#include "sieve/mask_recipe.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sieve/errors.hpp"

namespace sieve {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& o, std::initializer_list<const char*> allowed, const std::string& ctx) {
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

MotifSpec parse_motif(const json& m, const std::string& ctx) {
  if (!m.is_object()) throw ConfigError(ctx + ": motif must be an object");
  check_keys(m, {"kind", "N", "params", "pinhole_radius_m", "handedness"}, ctx);
  MotifSpec spec;
  const json& kj = need(m, "kind", ctx);
  if (!kj.is_string()) throw ConfigError(ctx + ": kind must be a string");
  std::string kind = kj.get<std::string>();
  spec.pinhole_radius = as_number(need(m, "pinhole_radius_m", ctx), ctx + ".pinhole_radius_m");
  spec.handedness = as_int(need(m, "handedness", ctx), ctx + ".handedness");
  const json& params = need(m, "params", ctx);
  if (!params.is_object()) throw ConfigError(ctx + ": params must be an object");
  std::string pctx = ctx + ".params";

  if (kind == "fermat") {
    spec.kind = MotifKind::fermat;
    spec.n_points = as_int(need(m, "N", ctx), ctx + ".N");
    check_keys(params, {"r0_m", "ell_design", "lambda_m", "z_design_m"}, pctx);
    spec.r0 = as_number(need(params, "r0_m", pctx), pctx + ".r0_m");
    spec.ell_design = as_int(need(params, "ell_design", pctx), pctx + ".ell_design");
    spec.lambda = as_number(need(params, "lambda_m", pctx), pctx + ".lambda_m");
    spec.z_design = as_number(need(params, "z_design_m", pctx), pctx + ".z_design_m");
  } else if (kind == "logarithmic") {
    spec.kind = MotifKind::logarithmic;
    spec.n_points = as_int(need(m, "N", ctx), ctx + ".N");
    check_keys(params, {"r0_m", "b", "theta_span_rad"}, pctx);
    spec.r0 = as_number(need(params, "r0_m", pctx), pctx + ".r0_m");
    spec.b = as_number(need(params, "b", pctx), pctx + ".b");
    spec.theta_span = as_number(need(params, "theta_span_rad", pctx), pctx + ".theta_span_rad");
  } else if (kind == "archimedean") {
    spec.kind = MotifKind::archimedean;
    spec.n_points = as_int(need(m, "N", ctx), ctx + ".N");
    check_keys(params, {"a_m", "b_m_per_rad", "theta_span_rad"}, pctx);
    spec.r0 = as_number(need(params, "a_m", pctx), pctx + ".a_m");
    spec.b = as_number(need(params, "b_m_per_rad", pctx), pctx + ".b_m_per_rad");
    spec.theta_span = as_number(need(params, "theta_span_rad", pctx), pctx + ".theta_span_rad");
  } else if (kind == "explicit") {
    spec.kind = MotifKind::explicit_points;
    check_keys(params, {"points_m"}, pctx);
    const json& pts = need(params, "points_m", pctx);
    if (!pts.is_array() || pts.empty())
      throw ConfigError(pctx + ".points_m: expected a nonempty array");
    for (const json& pt : pts) {
      if (!pt.is_array() || pt.size() != 2)
        throw ConfigError(pctx + ".points_m: each point is [x, y]");
      spec.points.push_back({as_number(pt[0], pctx + ".points_m"),
                             as_number(pt[1], pctx + ".points_m")});
    }
    spec.n_points = static_cast<int>(spec.points.size());
  } else {
    throw ConfigError(ctx + ": unknown kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

MaskRecipe parse_mask_recipe(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("mask recipe: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("mask recipe must be a JSON object");
  check_keys(root, {"motifs", "replications", "compound"}, "recipe");

  MaskRecipe r;
  const json& motifs = need(root, "motifs", "recipe");
  if (!motifs.is_array() || motifs.empty())
    throw ConfigError("recipe.motifs: expected a nonempty array");
  for (size_t i = 0; i < motifs.size(); ++i)
    r.motifs.push_back(parse_motif(motifs[i], "recipe.motifs[" + std::to_string(i) + "]"));

  const json& reps = need(root, "replications", "recipe");
  if (!reps.is_array()) throw ConfigError("recipe.replications: expected an array");
  for (size_t i = 0; i < reps.size(); ++i)
    r.replications.push_back(as_int(reps[i], "recipe.replications[" + std::to_string(i) + "]"));
  if (r.replications.size() != r.motifs.size())
    throw ConfigError("recipe.replications: need exactly one entry per motif");

  const json& comp = need(root, "compound", "recipe");
  if (!comp.is_boolean()) throw ConfigError("recipe.compound: expected a boolean");
  r.compound = comp.get<bool>();
  if (!r.compound && r.motifs.size() != 1)
    throw ConfigError("recipe.compound = false requires exactly one motif");
  return r;
}

MaskRecipe load_mask_recipe(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open mask recipe: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_mask_recipe(ss.str());
}

std::string mask_recipe_to_json(const MaskRecipe& recipe) {
  ordered_json root;
  root["motifs"] = ordered_json::array();
  for (const MotifSpec& s : recipe.motifs) {
    ordered_json m;
    ordered_json params;
    switch (s.kind) {
      case MotifKind::fermat:
        m["kind"] = "fermat";
        m["N"] = s.n_points;
        params["r0_m"] = s.r0;
        params["ell_design"] = s.ell_design;
        params["lambda_m"] = s.lambda;
        params["z_design_m"] = s.z_design;
        break;
      case MotifKind::logarithmic:
        m["kind"] = "logarithmic";
        m["N"] = s.n_points;
        params["r0_m"] = s.r0;
        params["b"] = s.b;
        params["theta_span_rad"] = s.theta_span;
        break;
      case MotifKind::archimedean:
        m["kind"] = "archimedean";
        m["N"] = s.n_points;
        params["a_m"] = s.r0;
        params["b_m_per_rad"] = s.b;
        params["theta_span_rad"] = s.theta_span;
        break;
      case MotifKind::explicit_points: {
        m["kind"] = "explicit";
        ordered_json pts = ordered_json::array();
        for (const auto& p : s.points) pts.push_back({p[0], p[1]});
        params["points_m"] = pts;
        break;
      }
    }
    m["params"] = params;
    m["pinhole_radius_m"] = s.pinhole_radius;
    m["handedness"] = s.handedness;
    root["motifs"].push_back(m);
  }
  root["replications"] = recipe.replications;
  root["compound"] = recipe.compound;
  return root.dump(2) + "\n";
}

PinholeMask build_mask(const MaskRecipe& recipe) {
  if (recipe.motifs.empty()) throw ConfigError("recipe needs at least one motif");
  if (recipe.replications.size() != recipe.motifs.size())
    throw ConfigError("recipe needs one replication per motif");
  std::vector<PinholeMask> parts;
  for (size_t i = 0; i < recipe.motifs.size(); ++i) {
    const MotifSpec& s = recipe.motifs[i];
    Motif motif;
    switch (s.kind) {
      case MotifKind::fermat:
        motif = fermat_motif(s.n_points, s.r0, s.ell_design, s.lambda, s.z_design,
                             s.pinhole_radius, s.handedness);
        break;
      case MotifKind::logarithmic:
        motif = log_spiral_motif(s.n_points, s.r0, s.b, s.theta_span, s.pinhole_radius,
                                 s.handedness);
        break;
      case MotifKind::archimedean:
        motif = archimedean_motif(s.n_points, s.r0, s.b, s.theta_span, s.pinhole_radius,
                                  s.handedness);
        break;
      case MotifKind::explicit_points:
        motif = explicit_motif(s.points, s.pinhole_radius);
        break;
    }
    parts.push_back(replicate(motif, recipe.replications[i]));
  }
  return parts.size() == 1 ? parts[0] : compound_mask(parts);
}

}  // namespace sieve
