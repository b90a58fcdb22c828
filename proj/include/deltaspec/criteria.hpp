#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltaspec/geometry.hpp"
#include "deltaspec/principal.hpp"

namespace deltaspec {

/// `lhs < rhs` or `lhs > rhs`; `satisfied` is exactly that strict inequality.
enum class Relation { Less, Greater };

struct CriterionReport {
    std::string id;
    /// Which branch of a piecewise inequality was evaluated ("" if none).
    std::string regime;
    double lhs;
    double rhs;
    Relation relation;
    bool satisfied;
    /// ν* (or E*) the matrix conditions were evaluated at.
    std::optional<double> witness;
    /// Number of bound states the criterion guarantees; empty when it says nothing.
    std::optional<std::size_t> predicted_count;
    /// Cassini only: Gerschgorin verdict at the same spectral point.
    std::optional<bool> gerschgorin_satisfied;
};

bool holds(double lhs, double rhs, Relation rel);

/// Row test Φ_ii + Σ_{j≠i} |Φ_ij| < 0 for every i at ν* (or E*).
/// lhs is the largest row value, rhs 0.
CriterionReport gerschgorin_condition(const Geometry& geom, const Configuration& cfg, double p_star,
                                      const PrincipalOptions& opts = {});

/// Brauer–Cassini ovals: for every pair j < k, Φ_jj < 0, Φ_kk < 0 and
/// (Φ_jj + Φ_kk) + sqrt((Φ_jj − Φ_kk)² + 4 R_j R_k) < 0 with R_i the
/// off-diagonal absolute row sums. lhs is the largest of those quantities.
CriterionReport cassini_condition(const Geometry& geom, const Configuration& cfg, double p_star,
                                  const PrincipalOptions& opts = {});

/// 64 log-spaced ν in [1e−3·μ_min, μ_min), or 64 evenly spaced E in
/// [max μ + δ, m − δ] with δ = 1e−6·m.
std::vector<double> default_witness_grid(const Geometry& geom, const Configuration& cfg);

/// First grid point satisfying the Gerschgorin rows.
std::optional<double> gerschgorin_scan(const Geometry& geom, const Configuration& cfg, std::span<const double> grid,
                                       const PrincipalOptions& opts = {});
std::optional<double> cassini_scan(const Geometry& geom, const Configuration& cfg, std::span<const double> grid,
                                   const PrincipalOptions& opts = {});

/// ℍ³: exists ν* with the Gerschgorin rows negative, reduced to closed form.
/// Regime "interior": e^{d√(κ²+μ²) − 1} sinh(κd)/(κd) > N − 1.
/// Regime "boundary" (when (N−1)κd/sinh κd <= e^{κd}):
/// (√(κ²+μ²) − κ) e^{κd} sinh(κd)/κ > N − 1.
CriterionReport h3_criterion(double kappa, double mu_min, double d_min, std::size_t n);
/// e^{d√(κ²+μ²) − 1} sinh(κd)/(κd), the interior-regime expression alone.
double h3_interior_lhs(double kappa, double mu_min, double d_min);

/// ℍ²: t = 1/2 + √(μ²/κ² + 1/4); t >= e needs (κd/2e) t > N − 1,
/// otherwise (κd/2) log t > N − 1.
CriterionReport h2_criterion(double kappa, double mu_min, double d_min, std::size_t n);

/// Two centers in flat space: √(μ₁μ₂) d > 2 (D = 2) or > 1 (D = 3) gives two
/// bound states, otherwise exactly one.
CriterionReport flat_two_center_criterion(int dimension, double mu1, double mu2, double d);

/// Relativistic flat plane: d (m − μ)/e > N − 1, μ the weakest binding.
CriterionReport rel_flat2_criterion(double m, double mu, double d_min, std::size_t n);

/// Relativistic ℍ², M = √(m² + κ²/4), c = 24 (4π)^{3/2}:
/// M − μ >= e (M − m) needs d (M − μ)/(c e) > N − 1,
/// otherwise d (M − m) log((M − μ)/(M − m))/c > N − 1.
CriterionReport rel_h2_criterion(double kappa, double m, double mu, double d_min, std::size_t n);

/// Every criterion that applies to the geometry, evaluated for the
/// configuration. Matrix criteria use the first witness on the default grid
/// (or the grid point closest to satisfying them).
std::vector<CriterionReport> evaluate_criteria(const Geometry& geom, const Configuration& cfg,
                                               const PrincipalOptions& opts = {});

}  // namespace deltaspec
