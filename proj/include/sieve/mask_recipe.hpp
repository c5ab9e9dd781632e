#pragma once

#include <string>
#include <vector>

#include "sieve/mask.hpp"

namespace sieve {

/// JSON-serializable mask description:
/// {
///   "motifs": [ { "kind": "fermat" | "logarithmic" | "archimedean" | "explicit",
///                 "N": int, "params": { ... }, "pinhole_radius_m": double,
///                 "handedness": +1 | -1 } ],
///   "replications": [ m, ... ],   // one per motif
///   "compound": bool              // false requires exactly one motif
/// }
/// params by kind:
///   fermat:      r0_m, ell_design, lambda_m, z_design_m
///   logarithmic: r0_m, b, theta_span_rad
///   archimedean: a_m, b_m_per_rad, theta_span_rad
///   explicit:    points_m = [[x, y], ...] (N ignored, taken from the list)
/// Unknown fields anywhere are ConfigErrors.
struct MaskRecipe {
  std::vector<MotifSpec> motifs;
  std::vector<int> replications;
  bool compound = false;
};

MaskRecipe parse_mask_recipe(const std::string& json_text);
MaskRecipe load_mask_recipe(const std::string& path);
std::string mask_recipe_to_json(const MaskRecipe& recipe);

/// Build motifs, replicate each, and combine.
PinholeMask build_mask(const MaskRecipe& recipe);

}  // namespace sieve
