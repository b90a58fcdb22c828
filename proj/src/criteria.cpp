#include "deltaspec/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace deltaspec {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_count(std::size_t n) {
    if (n == 0) throw std::invalid_argument("criterion: n must be at least 1");
}

// Closed-form criteria: lhs > N − 1. A single center needs no distance.
CriterionReport threshold_report(std::string id, std::string regime, double lhs, std::size_t n) {
    const double rhs = static_cast<double>(n - 1);
    if (n == 1 && !std::isfinite(lhs)) lhs = kInf;
    CriterionReport r{std::move(id), std::move(regime), lhs, rhs, Relation::Greater, false, {}, {}, {}};
    r.satisfied = holds(lhs, rhs, r.relation);
    if (r.satisfied) r.predicted_count = n;
    return r;
}

std::vector<double> off_row_sums(const Matrix& phi) {
    const std::size_t n = phi.size();
    std::vector<double> r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) r[i] += std::abs(phi(i, j));
    return r;
}

}  // namespace

bool holds(double lhs, double rhs, Relation rel) { return rel == Relation::Less ? lhs < rhs : lhs > rhs; }

CriterionReport gerschgorin_condition(const Geometry& geom, const Configuration& cfg, double p_star,
                                      const PrincipalOptions& opts) {
    const Matrix phi = principal_matrix(geom, cfg, p_star, opts).entries;
    const std::vector<double> r = off_row_sums(phi);
    double worst = -kInf;
    for (std::size_t i = 0; i < cfg.size(); ++i) worst = std::max(worst, phi(i, i) + r[i]);
    CriterionReport rep{"gerschgorin", "", worst, 0.0, Relation::Less, worst < 0.0, p_star, {}, {}};
    if (rep.satisfied) rep.predicted_count = cfg.size();
    return rep;
}

CriterionReport cassini_condition(const Geometry& geom, const Configuration& cfg, double p_star,
                                  const PrincipalOptions& opts) {
    const std::size_t n = cfg.size();
    if (n < 2) throw std::invalid_argument("cassini_condition: needs at least two centers");
    const Matrix phi = principal_matrix(geom, cfg, p_star, opts).entries;
    const std::vector<double> r = off_row_sums(phi);
    double worst = -kInf;
    double gersh = -kInf;
    for (std::size_t i = 0; i < n; ++i) gersh = std::max(gersh, phi(i, i) + r[i]);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const double a = phi(j, j);
            const double b = phi(k, k);
            const double edge = (a + b) + std::sqrt((a - b) * (a - b) + 4.0 * r[j] * r[k]);
            worst = std::max({worst, a, b, edge});
        }
    }
    CriterionReport rep{"cassini", "", worst, 0.0, Relation::Less, worst < 0.0, p_star, {}, gersh < 0.0};
    if (rep.satisfied) rep.predicted_count = n;
    return rep;
}

std::vector<double> default_witness_grid(const Geometry& geom, const Configuration& cfg) {
    constexpr int kPoints = 64;
    std::vector<double> grid;
    grid.reserve(kPoints);
    if (geom.relativistic()) {
        const double m = geom.mass();
        const double delta = 1e-6 * m;
        const double lo = cfg.max_mu() + delta;
        const double hi = m - delta;
        if (!(lo < hi)) return grid;
        for (int k = 0; k < kPoints; ++k) grid.push_back(lo + (hi - lo) * k / (kPoints - 1));
        return grid;
    }
    const double mu = cfg.min_mu();
    for (int k = 0; k < kPoints; ++k) grid.push_back(1e-3 * mu * std::pow(1e3, static_cast<double>(k) / kPoints));
    return grid;
}

std::optional<double> gerschgorin_scan(const Geometry& geom, const Configuration& cfg, std::span<const double> grid,
                                       const PrincipalOptions& opts) {
    for (double p : grid)
        if (gerschgorin_condition(geom, cfg, p, opts).satisfied) return p;
    return std::nullopt;
}

std::optional<double> cassini_scan(const Geometry& geom, const Configuration& cfg, std::span<const double> grid,
                                   const PrincipalOptions& opts) {
    for (double p : grid)
        if (cassini_condition(geom, cfg, p, opts).satisfied) return p;
    return std::nullopt;
}

double h3_interior_lhs(double kappa, double mu_min, double d_min) {
    const double y = std::sqrt(kappa * kappa + mu_min * mu_min);
    return std::exp(d_min * y - 1.0) * std::sinh(kappa * d_min) / (kappa * d_min);
}

CriterionReport h3_criterion(double kappa, double mu_min, double d_min, std::size_t n) {
    require_positive(kappa, "h3_criterion: kappa");
    require_positive(mu_min, "h3_criterion: mu");
    require_positive(d_min, "h3_criterion: d");
    require_count(n);
    const double kd = kappa * d_min;
    // The minimiser of y + A e^{−dy}, A = (N−1)κ/sinh κd, sits above y = κ
    // only when (N−1)κd/sinh κd > e^{κd}.
    const double ad = static_cast<double>(n - 1) * kd / std::sinh(kd);
    if (ad > std::exp(kd)) return threshold_report("h3", "interior", h3_interior_lhs(kappa, mu_min, d_min), n);
    const double y = std::sqrt(kappa * kappa + mu_min * mu_min);
    const double lhs = (y - kappa) * std::exp(kd) * std::sinh(kd) / kappa;
    return threshold_report("h3", "boundary", lhs, n);
}

CriterionReport h2_criterion(double kappa, double mu_min, double d_min, std::size_t n) {
    require_positive(kappa, "h2_criterion: kappa");
    require_positive(mu_min, "h2_criterion: mu");
    require_positive(d_min, "h2_criterion: d");
    require_count(n);
    const double t = 0.5 + std::sqrt(mu_min * mu_min / (kappa * kappa) + 0.25);
    const double kd = kappa * d_min;
    if (t >= kE) return threshold_report("h2", "t>=e", kd * t / (2.0 * kE), n);
    return threshold_report("h2", "t<e", 0.5 * kd * std::log(t), n);
}

CriterionReport flat_two_center_criterion(int dimension, double mu1, double mu2, double d) {
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("flat_two_center_criterion: dimension 2 or 3");
    require_positive(mu1, "flat_two_center_criterion: mu1");
    require_positive(mu2, "flat_two_center_criterion: mu2");
    require_positive(d, "flat_two_center_criterion: d");
    const double lhs = std::sqrt(mu1 * mu2) * d;
    const double rhs = dimension == 2 ? 2.0 : 1.0;
    const bool two = lhs > rhs;
    return {"flat_two_center", dimension == 2 ? "D=2" : "D=3", lhs, rhs, Relation::Greater, two, {},
            two ? 2u : 1u, {}};
}

CriterionReport rel_flat2_criterion(double m, double mu, double d_min, std::size_t n) {
    require_positive(m, "rel_flat2_criterion: m");
    require_positive(d_min, "rel_flat2_criterion: d");
    if (!(mu > -m && mu < m)) throw std::invalid_argument("rel_flat2_criterion: mu outside (-m, m)");
    require_count(n);
    return threshold_report("rel_flat2", "", d_min * (m - mu) / kE, n);
}

CriterionReport rel_h2_criterion(double kappa, double m, double mu, double d_min, std::size_t n) {
    require_positive(kappa, "rel_h2_criterion: kappa");
    require_positive(m, "rel_h2_criterion: m");
    require_positive(d_min, "rel_h2_criterion: d");
    if (!(mu > -m && mu < m)) throw std::invalid_argument("rel_h2_criterion: mu outside (-m, m)");
    require_count(n);
    const double big_m = std::sqrt(m * m + 0.25 * kappa * kappa);
    const double c = 24.0 * std::pow(4.0 * std::numbers::pi, 1.5);
    if (big_m - mu >= kE * (big_m - m))
        return threshold_report("rel_h2", "selector>=", d_min * (big_m - mu) / (c * kE), n);
    return threshold_report("rel_h2", "selector<", d_min * (big_m - m) * std::log((big_m - mu) / (big_m - m)) / c, n);
}

std::vector<CriterionReport> evaluate_criteria(const Geometry& geom, const Configuration& cfg,
                                               const PrincipalOptions& opts) {
    require_valid(cfg, geom);
    const std::size_t n = cfg.size();
    const double d = cfg.min_distance();
    std::vector<CriterionReport> out;

    const std::vector<double> grid = default_witness_grid(geom, cfg);
    // Report at the witness if there is one, else where the test came closest.
    auto matrix_report = [&](auto&& condition) -> std::optional<CriterionReport> {
        std::optional<CriterionReport> best;
        for (double p : grid) {
            CriterionReport r = condition(p);
            if (r.satisfied) return r;
            if (!best || r.lhs < best->lhs) best = std::move(r);
        }
        return best;
    };
    if (auto g = matrix_report([&](double p) { return gerschgorin_condition(geom, cfg, p, opts); })) out.push_back(*g);
    if (n >= 2) {
        if (auto c = matrix_report([&](double p) { return cassini_condition(geom, cfg, p, opts); })) out.push_back(*c);
    }

    switch (geom.kind()) {
        case GeometryKind::Flat2:
        case GeometryKind::Flat3:
            if (n == 2) out.push_back(flat_two_center_criterion(geom.dimension(), cfg.mu[0], cfg.mu[1], d));
            break;
        case GeometryKind::Hyperbolic3:
            out.push_back(h3_criterion(geom.kappa(), cfg.min_mu(), n == 1 ? 1.0 : d, n));
            break;
        case GeometryKind::Hyperbolic2:
            out.push_back(h2_criterion(geom.kappa(), cfg.min_mu(), n == 1 ? 1.0 : d, n));
            break;
        case GeometryKind::RelFlat2:
            out.push_back(rel_flat2_criterion(geom.mass(), cfg.max_mu(), n == 1 ? 1.0 : d, n));
            break;
        case GeometryKind::RelHyperbolic2:
            out.push_back(rel_h2_criterion(geom.kappa(), geom.mass(), cfg.max_mu(), n == 1 ? 1.0 : d, n));
            break;
    }
    return out;
}

}  // namespace deltaspec
