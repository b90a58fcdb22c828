#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "deltaspec/geometry.hpp"
#include "deltaspec/jacobi.hpp"
#include "deltaspec/principal.hpp"

namespace deltaspec {

struct SpectrumOptions {
    /// Bisection stops once the bracket in ν (or E) is this narrow.
    double tol = 1e-12;
    /// Eigenvalues of Φ at a root below this fraction of the matrix scale
    /// count toward the null space.
    double multiplicity_threshold = 1e-8;
    /// Relativistic search window is (−m(1−margin), m(1−margin)).
    double window_margin = 1e-9;
    /// Doublings allowed while looking for a ν where every branch is positive.
    int max_bracket_growth = 80;
    PrincipalOptions principal{};
};

/// Sorted branches ω_1 <= ... <= ω_N along a grid violated monotonicity.
class MonotonicityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No upper bracket where every eigenvalue of Φ is positive was found.
class BracketError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundState {
    /// ν_k for non-relativistic geometries, E_k for relativistic ones.
    double location;
    /// −ν_k² or E_k.
    double energy;
    std::size_t multiplicity;
    /// Orthonormal basis of the null space of Φ at the root; the first vector
    /// is sign-fixed to a non-negative component sum.
    std::vector<std::vector<double>> amplitudes;
    /// [Aᵀ M A]^{−1/2} for the first amplitude vector, M = −∂Φ/∂z
    /// (or −∂Φ/∂E for relativistic states).
    double normalization;
    /// |det Φ| at the root and the scale it is judged against.
    double det_abs;
    double reference_norm;
};

/// Sorted eigen-decomposition of Φ at every grid point. The grid must run
/// ascending in ν (descending in E for relativistic geometries), so that the
/// sorted branches are nondecreasing along it.
std::vector<EigenBranches> eigenvalue_branches(const Geometry& geom, const Configuration& cfg,
                                               std::span<const double> grid,
                                               const SpectrumOptions& opts = {});

/// Scale of Φ at a spectral point, max(‖Φ‖_F, ‖p ∂Φ/∂p‖_F), with p = ν or m − E.
double reference_norm(const Geometry& geom, const Configuration& cfg, double param,
                      const SpectrumOptions& opts = {});

struct SearchWindow {
    double lo;
    double hi;
};

/// Interval that brackets every root: (ν_lo, ν_hi) with all branches positive
/// at ν_hi, or the shrunken (−m, m) for relativistic geometries.
SearchWindow search_window(const Geometry& geom, const Configuration& cfg, const SpectrumOptions& opts = {});

/// Roots of det Φ, one bisection per sign-changing sorted branch, merged into
/// degenerate states where they coincide. Sorted by energy, ascending.
std::vector<BoundState> find_bound_states(const Geometry& geom, const Configuration& cfg,
                                          const SpectrumOptions& opts = {});

/// Number of bound states with multiplicity. Computed from the root search and
/// from eigenvalue signs at the window edges; a disagreement throws
/// std::logic_error.
std::size_t count_bound_states(const Geometry& geom, const Configuration& cfg, const SpectrumOptions& opts = {});

/// N(−ν₀²): bound states with energy <= −ν₀², i.e. the negative eigenvalues
/// of Φ(−ν₀²). ν₀ = 0 is evaluated at the lower search edge.
/// Non-relativistic only.
std::size_t count_states_below(const Geometry& geom, const Configuration& cfg, double nu0,
                               const SpectrumOptions& opts = {});

/// Branches whose root sits at the ν = 0 threshold; reported, never counted.
std::size_t marginal_branches(const Geometry& geom, const Configuration& cfg, const SpectrumOptions& opts = {});

/// ψ_k(x) for a non-relativistic bound state given d(x, a_i) > 0 for every center.
double eigenfunction(const Geometry& geom, const Configuration& cfg, const BoundState& state,
                     std::span<const double> dists_to_centers, const SpectrumOptions& opts = {});

}  // namespace deltaspec
