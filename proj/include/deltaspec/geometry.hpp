#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deltaspec/matrix.hpp"

namespace deltaspec {

enum class GeometryKind { Flat2, Flat3, Hyperbolic2, Hyperbolic3, RelFlat2, RelHyperbolic2 };

/// Ambient space of the point interactions. Hyperbolic kinds have sectional
/// curvature -κ²; relativistic kinds carry the rest mass m of the field.
class Geometry {
public:
    static Geometry flat2() { return Geometry(GeometryKind::Flat2, 0.0, 0.0); }
    static Geometry flat3() { return Geometry(GeometryKind::Flat3, 0.0, 0.0); }
    static Geometry hyperbolic2(double kappa);
    static Geometry hyperbolic3(double kappa);
    static Geometry rel_flat2(double mass);
    static Geometry rel_hyperbolic2(double kappa, double mass);

    /// Parses "flat2", "flat3", "h2", "h3", "relflat2", "relh2".
    static Geometry from_name(std::string_view name, double kappa, double mass);

    GeometryKind kind() const noexcept { return kind_; }
    double kappa() const noexcept { return kappa_; }
    double mass() const noexcept { return mass_; }
    int dimension() const noexcept;
    bool relativistic() const noexcept;
    bool hyperbolic() const noexcept;
    /// The non-relativistic space whose heat kernel the geometry uses.
    Geometry spatial() const;
    std::string name() const;

    bool operator==(const Geometry&) const = default;

private:
    Geometry(GeometryKind k, double kappa, double mass) : kind_(k), kappa_(kappa), mass_(mass) {}
    GeometryKind kind_;
    double kappa_;
    double mass_;
};

/// N centers: binding parameters μᵢ and the geodesic distance matrix.
struct Configuration {
    std::vector<double> mu;
    Matrix dist;

    std::size_t size() const noexcept { return mu.size(); }
    double min_mu() const;
    double max_mu() const;
    /// Smallest off-diagonal distance; +inf for a single center.
    double min_distance() const;

    /// Centers equally spaced on one geodesic: d_ij = |i - j| * spacing.
    static Configuration collinear(std::vector<double> mu, double spacing);
};

enum class ViolationCode {
    Empty,
    SizeMismatch,
    NonFinite,
    AsymmetricDistance,
    NonzeroDiagonal,
    NegativeDistance,
    CoincidentCenters,
    NonPositiveMu,
    MuOutsideMassWindow,
};

struct Violation {
    ViolationCode code;
    std::string message;
};

std::string_view to_string(ViolationCode code);

/// Empty iff the configuration is admissible for the geometry.
std::vector<Violation> validate_configuration(const Configuration& cfg, const Geometry& geom);

/// Throws std::invalid_argument listing every violation, if any.
void require_valid(const Configuration& cfg, const Geometry& geom);

enum class EvaluationMethod { ClosedForm, Quadrature };

struct HeatKernelValue {
    double value;
    EvaluationMethod method;
};

/// K_t(x,y) at geodesic distance d. Relativistic geometries use the kernel of
/// their spatial manifold.
HeatKernelValue heat_kernel(const Geometry& geom, double d, double t);

/// Davies–Mandouvalos diagonal lower bound on ℍ²:
/// e^{-κ²t/4} / (8 (4π)^{3/2} t sqrt(1 + κ²t)).
double heat_kernel_diag_lower_h2(double t, double kappa);

/// Upper bound on ℍ²: (3/t) exp(-d²/4t - κ²t/4).
double heat_kernel_upper_h2(double d, double t, double kappa);

/// Lower comparison K_t(x,y) >= K_t^{comparison}(d). Defaults to the
/// geometry itself, where the two agree within quadrature tolerance.
bool cheeger_yau_check(const Geometry& geom, double d, double t,
                       std::optional<Geometry> comparison = std::nullopt);

}  // namespace deltaspec
