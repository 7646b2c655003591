#pragma once

#include <string>

#include <json.hpp>

#include "specheck/matrix.hpp"

namespace specheck {

// Wire format: {"n": int, "entries": [[re, im], ...]} row-major, length n^2.
nlohmann::json matrix_to_json(const MatrixC& m);
MatrixC matrix_from_json(const nlohmann::json& j);

// Numeric formatting shared by the CSV emitters: round-trip precision.
std::string format_double(double v);

}  // namespace specheck
