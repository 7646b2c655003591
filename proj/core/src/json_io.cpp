#include "specheck/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "specheck/errors.hpp"

namespace specheck {

nlohmann::json matrix_to_json(const MatrixC& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& z : m.entries())
    entries.push_back(nlohmann::json::array({z.real(), z.imag()}));
  return {{"n", m.n()}, {"entries", entries}};
}

MatrixC matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw InvalidInput("matrix json: expected {\"n\", \"entries\"}");
  if (!j["n"].is_number_integer()) throw InvalidInput("matrix json: n must be an integer");
  const int n = j["n"].get<int>();
  if (n < 1) throw InvalidInput("matrix json: n must be >= 1");
  const auto& entries = j["entries"];
  if (!entries.is_array() || entries.size() != static_cast<size_t>(n) * n)
    throw InvalidInput("matrix json: entries must have length n^2");
  MatrixC m(n);
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw InvalidInput("matrix json: each entry must be [re, im]");
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw InvalidInput("matrix json: non-finite entry");
    m.entries()[i] = {re, im};
  }
  return m;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace specheck
