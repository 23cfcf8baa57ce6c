#pragma once

#include "json.hpp"

#include "giv/lattice.hpp"
#include "giv/phantom.hpp"
#include "giv/psf.hpp"
#include "giv/weight_function.hpp"

namespace giv {

using Json = nlohmann::json;

Json vec_to_json(const Vec& v, int dim);
/// Reads an array of exactly `dim` numbers.
Vec vec_from_json(const Json& j, int dim, const char* what);

Json to_json(const Psf& psf);
/// {"kind": "ball_indicator" | "box_indicator" | "gaussian" | "bump" |
/// "tabulated_radial", ...}; tabulated densities come inline
/// ("radii", "density") or from a CSV ("file").
Psf psf_from_json(const Json& j, int dim);

Json to_json(const Phantom& phantom);
/// {"kind": "ball" | "box" | "half_space", ...}; 2D boxes accept "angle_deg".
Phantom phantom_from_json(const Json& j, int dim);

Json to_json(const WeightFunction& f);
WeightFunction weight_function_from_json(const Json& j);

Json to_json(const Lattice& lattice);
Lattice lattice_from_json(const Json& j);

Json to_json(const Window& window);
Window window_from_json(const Json& j, int dim);

Json to_json(const IndexBox& box);
IndexBox index_box_from_json(const Json& j);

}  // namespace giv
