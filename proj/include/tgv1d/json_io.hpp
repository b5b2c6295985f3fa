// JSON forms:
//   SparseFunction   {T, alpha, beta, a, b, jumps:[{x,sign,weight}], kinks:[...]}
//   MeasurementSetup {T, frequencies:[...], data:[{re,im}, ...]}
// An atom entry may give "coef" (signed factor of S_x or K_x) instead of
// sign and weight.
#pragma once

#include <json.hpp>

#include "tgv1d/fourier_fidelity.hpp"
#include "tgv1d/function_space.hpp"

namespace tgv1d {

nlohmann::json to_json(const SparseFunction& u);
SparseFunction sparse_function_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MeasurementSetup& s);
MeasurementSetup measurement_setup_from_json(const nlohmann::json& j);

}  // namespace tgv1d
