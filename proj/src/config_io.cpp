#include "deltaspec/config_io.hpp"

#include <sstream>
#include <stdexcept>

namespace deltaspec {

namespace {

double number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) throw std::invalid_argument(std::string("config: ") + what + " must be a number");
    return j.get<double>();
}

}  // namespace

Problem problem_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    for (const char* key : {"mu", "dist", "geometry"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("config: missing \"") + key + "\"");

    const nlohmann::json& g = j.at("geometry");
    if (!g.is_object() || !g.contains("kind") || !g.at("kind").is_string())
        throw std::invalid_argument("config: geometry.kind must be a string");
    const double kappa = g.contains("kappa") ? number(g.at("kappa"), "geometry.kappa") : 0.0;
    const double mass = g.contains("m") ? number(g.at("m"), "geometry.m") : 0.0;
    Geometry geom = Geometry::from_name(g.at("kind").get<std::string>(), kappa, mass);

    const nlohmann::json& mu = j.at("mu");
    if (!mu.is_array()) throw std::invalid_argument("config: mu must be an array");
    Configuration cfg;
    for (const auto& v : mu) cfg.mu.push_back(number(v, "mu entry"));

    const nlohmann::json& dist = j.at("dist");
    if (!dist.is_array()) throw std::invalid_argument("config: dist must be an array of rows");
    const std::size_t n = dist.size();
    cfg.dist = Matrix(n);
    for (std::size_t r = 0; r < n; ++r) {
        const nlohmann::json& row = dist[r];
        if (!row.is_array() || row.size() != n)
            throw std::invalid_argument("config: dist row " + std::to_string(r) + " is not of length " +
                                        std::to_string(n));
        for (std::size_t c = 0; c < n; ++c) cfg.dist(r, c) = number(row[c], "dist entry");
    }
    return {geom, std::move(cfg)};
}

nlohmann::json problem_to_json(const Problem& p) {
    nlohmann::json g{{"kind", p.geometry.name()}};
    if (p.geometry.hyperbolic()) g["kappa"] = p.geometry.kappa();
    if (p.geometry.relativistic()) g["m"] = p.geometry.mass();
    nlohmann::json dist = nlohmann::json::array();
    for (std::size_t r = 0; r < p.config.dist.size(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < p.config.dist.size(); ++c) row.push_back(p.config.dist(r, c));
        dist.push_back(std::move(row));
    }
    return {{"mu", p.config.mu}, {"dist", std::move(dist)}, {"geometry", std::move(g)}};
}

Matrix read_distance_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("distance csv: bad number \"" + cell + "\"");
            }
            if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
                throw std::invalid_argument("distance csv: bad number \"" + cell + "\"");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("distance csv: no rows");
    Matrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n)
            throw std::invalid_argument("distance csv: row " + std::to_string(r) + " has " +
                                        std::to_string(rows[r].size()) + " entries, expected " + std::to_string(n));
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

}  // namespace deltaspec
