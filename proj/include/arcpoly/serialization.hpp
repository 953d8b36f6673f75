#pragma once

// JSON views of library types, for experiment manifests.

#include <arcpoly/arc_geometry.hpp>

#include <json.hpp>

namespace arcpoly {

inline void to_json(nlohmann::json& j, const ArcParams& p) {
  j = nlohmann::json{{"alpha", p.alpha()}, {"beta_im", p.beta_im()}, {"gamma", p.gamma()},
                     {"K", p.big_k()}};
}

/// Only alpha is read back; the derived constants are recomputed.
inline ArcParams arc_params_from_json(const nlohmann::json& j) {
  return ArcParams(j.at("alpha").get<double>());
}

} // namespace arcpoly
