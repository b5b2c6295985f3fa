#include "tgv1d/json_io.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tgv1d {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw std::invalid_argument(std::string("missing or non-numeric field '") + key + "'");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::vector<AtomTerm> terms_from(const json& j, const char* key, double scale) {
  std::vector<AtomTerm> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw std::invalid_argument(std::string("'") + key + "' must be an array");
  for (const auto& e : j.at(key)) {
    AtomTerm t;
    t.position = number(e, "x");
    if (e.contains("coef")) {
      const double c = number(e, "coef");
      t.sign = c < 0.0 ? -1 : 1;
      t.weight = std::abs(c) * scale;
    } else {
      const double s = number(e, "sign");
      if (s != 1.0 && s != -1.0) throw std::invalid_argument("atom sign must be -1 or 1");
      t.sign = int(s);
      t.weight = number(e, "weight");
    }
    out.push_back(t);
  }
  return out;
}

json terms_to(const std::vector<AtomTerm>& terms) {
  json a = json::array();
  for (const auto& t : terms) a.push_back({{"x", t.position}, {"sign", t.sign}, {"weight", t.weight}});
  return a;
}

}  // namespace

json to_json(const SparseFunction& u) {
  return {{"T", u.T()},        {"alpha", u.alpha()},          {"beta", u.beta()},
          {"a", u.slope()},    {"b", u.offset()},             {"jumps", terms_to(u.jumps())},
          {"kinks", terms_to(u.kinks())}};
}

SparseFunction sparse_function_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("sparse function must be a JSON object");
  TgvParams p{number(j, "alpha"), number(j, "beta"), number(j, "T")};
  p.validate();
  return SparseFunction(p, terms_from(j, "jumps", p.alpha), terms_from(j, "kinks", p.beta),
                        number_or(j, "a", 0.0), number_or(j, "b", 0.0));
}

json to_json(const MeasurementSetup& s) {
  json data = json::array();
  for (const auto& z : s.data) data.push_back({{"re", z.real()}, {"im", z.imag()}});
  return {{"T", s.T}, {"frequencies", s.frequencies}, {"data", data}};
}

MeasurementSetup measurement_setup_from_json(const json& j) {
  MeasurementSetup s;
  s.T = number(j, "T");
  if (!j.contains("frequencies") || !j.at("frequencies").is_array())
    throw std::invalid_argument("missing 'frequencies' array");
  s.frequencies = j.at("frequencies").get<std::vector<double>>();
  if (!j.contains("data") || !j.at("data").is_array()) throw std::invalid_argument("missing 'data' array");
  for (const auto& e : j.at("data")) s.data.emplace_back(number(e, "re"), number(e, "im"));
  s.validate();
  return s;
}

}  // namespace tgv1d
