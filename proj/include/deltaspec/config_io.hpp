#pragma once

#include <istream>
#include <string>

#include <json.hpp>

#include "deltaspec/geometry.hpp"

namespace deltaspec {

struct Problem {
    Geometry geometry;
    Configuration config;
};

/// {"mu": [..], "dist": [[..]], "geometry": {"kind": "h3", "kappa": 1, "m": 1}}.
/// Shape errors throw std::invalid_argument; the configuration itself is not
/// validated here.
Problem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const Problem& p);

/// Square comma-separated matrix, one row per line; blank lines and lines
/// starting with '#' are skipped.
Matrix read_distance_csv(std::istream& in);

}  // namespace deltaspec
