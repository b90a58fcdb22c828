#pragma once

#include <span>

#include "deltaspec/geometry.hpp"
#include "deltaspec/matrix.hpp"

namespace deltaspec {

/// Legendre index used for the ℍ² off-diagonal entries,
/// σ = ∓1/2 + sqrt(ν²/κ² + 1/4). `Shifted` (−1/2) reproduces the heat-kernel
/// Laplace transform and is the default; `Printed` (+1/2) is kept for
/// comparison.
enum class H2Index { Shifted, Printed };

struct PrincipalOptions {
    H2Index h2_index = H2Index::Shifted;
};

/// Φ at one spectral parameter. `param` is ν > 0 for non-relativistic
/// geometries (z = −ν²) and the energy E ∈ (−m, m) for relativistic ones.
struct PrincipalMatrix {
    Matrix entries;
    double param;
    Geometry geometry;
    EvaluationMethod method;
};

/// Throws std::domain_error if `param` is outside the geometry's window.
void require_spectral_param(const Geometry& geom, double param);

/// Diagonal entry Φ_ii for binding parameter mu.
double phi_diagonal(const Geometry& geom, double mu, double param, const PrincipalOptions& opts = {});
/// Off-diagonal entry Φ_ij for centers at distance d > 0 (always negative).
double phi_offdiagonal(const Geometry& geom, double d, double param, const PrincipalOptions& opts = {});

/// Closed forms (quadrature where the geometry has none: RelFlat2 off-diagonal
/// and every Relℍ² entry).
PrincipalMatrix principal_matrix(const Geometry& geom, const Configuration& cfg, double param,
                                 const PrincipalOptions& opts = {});

/// Φ from quadrature over the heat kernel alone: the Laplace-transform
/// definition for non-relativistic geometries and the (s, u) double-integral
/// form for relativistic ones. Independent of every closed form.
PrincipalMatrix principal_matrix_oracle(const Geometry& geom, const Configuration& cfg, double param);

/// Non-relativistic: M_ij = ∫₀^∞ t K_t(a_i,a_j) e^{−tν²} dt = −∂Φ_ij/∂z.
/// Relativistic: −∂Φ_ij/∂E. Analytic where Φ has a closed form, otherwise a
/// central difference in the spectral variable.
Matrix principal_matrix_derivative(const Geometry& geom, const Configuration& cfg, double param,
                                   const PrincipalOptions& opts = {});

/// ∫₀^∞ t K_t(a_i,a_j) e^{−tν²} dt by quadrature (non-relativistic only).
Matrix principal_matrix_derivative_oracle(const Geometry& geom, const Configuration& cfg, double nu);

/// Regularised bare coupling λ(ε) with 1/λ(ε) = ∫_ε^∞ K_t(a,a) e^{−tμ²} dt.
/// Relativistic geometries use the boson coupling
/// 1/g(ε) = π^{−1/2} ∫₀^∞ ds e^{−s²/4} ∫_ε^∞ du e^{sμ√u} e^{−um²} K_u(a,a).
double bare_coupling(const Geometry& geom, double mu, double epsilon);

/// Free resolvent kernel R₀(x,y|−ν²) = ∫₀^∞ e^{−ν²t} K_t(x,y) dt at distance d > 0.
double resolvent_kernel(const Geometry& geom, double d, double nu, const PrincipalOptions& opts = {});

struct ResolventCorrection {
    double value;
    /// Smallest |eigenvalue| of Φ(−ν²).
    double pole_proximity;
    bool near_pole() const noexcept { return pole_proximity < 1e-12; }
};

/// Finite-rank part of the Krein resolvent kernel,
/// Σ_ij R₀(x,a_i)[Φ^{−1}]_ij R₀(a_j,y).
ResolventCorrection krein_correction(const Geometry& geom, const Configuration& cfg, double nu,
                                     std::span<const double> dists_x, std::span<const double> dists_y,
                                     const PrincipalOptions& opts = {});

}  // namespace deltaspec
