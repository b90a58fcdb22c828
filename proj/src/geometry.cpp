#include "deltaspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "deltaspec/quadrature.hpp"

namespace deltaspec {
namespace {

constexpr double kPi = std::numbers::pi;
// Below κd this small the hyperbolic kernels use their d -> 0 forms.
constexpr double kSeriesThreshold = 1e-6;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

double h3_kernel(double kappa, double d, double t) {
    const double x = kappa * d;
    const double ratio = x < kSeriesThreshold ? 1.0 - x * x / 6.0 : x / std::sinh(x);
    return ratio * std::pow(4.0 * kPi * t, -1.5) * std::exp(-kappa * kappa * t - d * d / (4.0 * t));
}

double h2_kernel(double kappa, double d, double t) {
    double a = kappa * d;
    if (a < kSeriesThreshold) a = 0.0;
    const double k2t = kappa * kappa * t;
    // s = a + w; cosh s - cosh a = e^{a+w/2}(1 - e^{-(2a+w)}) sinh(w/2) / 1,
    // with e^{-a/2} and e^{-a²/4κ²t} moved into the prefactor.
    auto g = [a, k2t](double w) -> double {
        if (w <= 0.0) return 0.0;
        const double edge = -std::expm1(-(2.0 * a + w));
        const double denom = std::sqrt(edge * std::sinh(0.5 * w));
        return (a + w) * std::exp(-w * (2.0 * a + w) / (4.0 * k2t) - 0.25 * w) / denom;
    };
    double scale = std::min(4.0, 2.0 * std::sqrt(k2t));
    if (a > 0.0) scale = std::min(scale, 2.0 * k2t / a);
    const QuadratureResult r =
        integrate_semiinfinite(g, 0.0, {1.0 / scale, 0.5}, {0.0, 1e-10, 4000});
    const double pref = std::sqrt(2.0) / kappa * std::pow(4.0 * kPi * t, -1.5) *
                        std::exp(-k2t / 4.0 - d * d / (4.0 * t) - 0.5 * a);
    return pref * r.value;
}

}  // namespace

Geometry Geometry::hyperbolic2(double kappa) {
    require_positive(kappa, "kappa");
    return Geometry(GeometryKind::Hyperbolic2, kappa, 0.0);
}

Geometry Geometry::hyperbolic3(double kappa) {
    require_positive(kappa, "kappa");
    return Geometry(GeometryKind::Hyperbolic3, kappa, 0.0);
}

Geometry Geometry::rel_flat2(double mass) {
    require_positive(mass, "mass");
    return Geometry(GeometryKind::RelFlat2, 0.0, mass);
}

Geometry Geometry::rel_hyperbolic2(double kappa, double mass) {
    require_positive(kappa, "kappa");
    require_positive(mass, "mass");
    return Geometry(GeometryKind::RelHyperbolic2, kappa, mass);
}

Geometry Geometry::from_name(std::string_view name, double kappa, double mass) {
    if (name == "flat2") return flat2();
    if (name == "flat3") return flat3();
    if (name == "h2") return hyperbolic2(kappa);
    if (name == "h3") return hyperbolic3(kappa);
    if (name == "relflat2") return rel_flat2(mass);
    if (name == "relh2") return rel_hyperbolic2(kappa, mass);
    throw std::invalid_argument("unknown geometry '" + std::string(name) + "'");
}

int Geometry::dimension() const noexcept { return kind_ == GeometryKind::Flat3 || kind_ == GeometryKind::Hyperbolic3 ? 3 : 2; }

bool Geometry::relativistic() const noexcept {
    return kind_ == GeometryKind::RelFlat2 || kind_ == GeometryKind::RelHyperbolic2;
}

bool Geometry::hyperbolic() const noexcept {
    return kind_ == GeometryKind::Hyperbolic2 || kind_ == GeometryKind::Hyperbolic3 ||
           kind_ == GeometryKind::RelHyperbolic2;
}

Geometry Geometry::spatial() const {
    switch (kind_) {
        case GeometryKind::RelFlat2: return flat2();
        case GeometryKind::RelHyperbolic2: return hyperbolic2(kappa_);
        default: return *this;
    }
}

std::string Geometry::name() const {
    switch (kind_) {
        case GeometryKind::Flat2: return "flat2";
        case GeometryKind::Flat3: return "flat3";
        case GeometryKind::Hyperbolic2: return "h2";
        case GeometryKind::Hyperbolic3: return "h3";
        case GeometryKind::RelFlat2: return "relflat2";
        case GeometryKind::RelHyperbolic2: return "relh2";
    }
    return "?";
}

double Configuration::min_mu() const { return *std::min_element(mu.begin(), mu.end()); }
double Configuration::max_mu() const { return *std::max_element(mu.begin(), mu.end()); }

double Configuration::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dist.size(); ++i)
        for (std::size_t j = i + 1; j < dist.size(); ++j) d = std::min(d, dist(i, j));
    return d;
}

Configuration Configuration::collinear(std::vector<double> mu, double spacing) {
    const std::size_t n = mu.size();
    Matrix dist(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dist(i, j) = spacing * static_cast<double>(i > j ? i - j : j - i);
    return {std::move(mu), std::move(dist)};
}

std::string_view to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::Empty: return "empty";
        case ViolationCode::SizeMismatch: return "size_mismatch";
        case ViolationCode::NonFinite: return "non_finite";
        case ViolationCode::AsymmetricDistance: return "asymmetric_distance";
        case ViolationCode::NonzeroDiagonal: return "nonzero_diagonal";
        case ViolationCode::NegativeDistance: return "negative_distance";
        case ViolationCode::CoincidentCenters: return "coincident_centers";
        case ViolationCode::NonPositiveMu: return "non_positive_mu";
        case ViolationCode::MuOutsideMassWindow: return "mu_outside_mass_window";
    }
    return "?";
}

std::vector<Violation> validate_configuration(const Configuration& cfg, const Geometry& geom) {
    std::vector<Violation> out;
    auto add = [&out](ViolationCode c, std::string msg) { out.push_back({c, std::move(msg)}); };
    const std::size_t n = cfg.size();
    if (n == 0) {
        add(ViolationCode::Empty, "configuration has no centers");
        return out;
    }
    if (cfg.dist.size() != n) {
        add(ViolationCode::SizeMismatch, "distance matrix is " + std::to_string(cfg.dist.size()) +
                                             "x" + std::to_string(cfg.dist.size()) + " but there are " +
                                             std::to_string(n) + " centers");
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double m = cfg.mu[i];
        std::ostringstream label;
        label << "mu[" << i << "]=" << m;
        if (!std::isfinite(m)) {
            add(ViolationCode::NonFinite, label.str() + " is not finite");
        } else if (geom.relativistic()) {
            if (!(m > -geom.mass() && m < geom.mass()))
                add(ViolationCode::MuOutsideMassWindow, label.str() + " outside (-m, m)");
        } else if (!(m > 0.0)) {
            add(ViolationCode::NonPositiveMu, label.str() + " must be positive");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (cfg.dist(i, i) != 0.0)
            add(ViolationCode::NonzeroDiagonal, "dist[" + std::to_string(i) + "][" + std::to_string(i) + "] must be 0");
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = cfg.dist(i, j);
            const double b = cfg.dist(j, i);
            const std::string where = "dist[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            if (!std::isfinite(a) || !std::isfinite(b)) {
                add(ViolationCode::NonFinite, where + " is not finite");
                continue;
            }
            if (a != b) add(ViolationCode::AsymmetricDistance, where + " differs from its transpose");
            if (a < 0.0 || b < 0.0) add(ViolationCode::NegativeDistance, where + " is negative");
            else if (a == 0.0 || b == 0.0)
                add(ViolationCode::CoincidentCenters, where + " is zero: centers must be distinct");
        }
    }
    return out;
}

void require_valid(const Configuration& cfg, const Geometry& geom) {
    const auto v = validate_configuration(cfg, geom);
    if (v.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& x : v) msg += " [" + std::string(to_string(x.code)) + "] " + x.message + ";";
    throw std::invalid_argument(msg);
}

HeatKernelValue heat_kernel(const Geometry& geom, double d, double t) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
    if (!(d >= 0.0)) throw std::domain_error("heat_kernel: d must be non-negative");
    const Geometry g = geom.spatial();
    switch (g.kind()) {
        case GeometryKind::Flat2:
            return {std::exp(-d * d / (4.0 * t)) / (4.0 * kPi * t), EvaluationMethod::ClosedForm};
        case GeometryKind::Flat3:
            return {std::pow(4.0 * kPi * t, -1.5) * std::exp(-d * d / (4.0 * t)),
                    EvaluationMethod::ClosedForm};
        case GeometryKind::Hyperbolic3:
            return {h3_kernel(g.kappa(), d, t), EvaluationMethod::ClosedForm};
        case GeometryKind::Hyperbolic2:
            return {h2_kernel(g.kappa(), d, t), EvaluationMethod::Quadrature};
        default: break;
    }
    throw std::logic_error("heat_kernel: unreachable geometry kind");
}

double heat_kernel_diag_lower_h2(double t, double kappa) {
    return std::exp(-kappa * kappa * t / 4.0) /
           (8.0 * std::pow(4.0 * kPi, 1.5) * t * std::sqrt(1.0 + kappa * kappa * t));
}

double heat_kernel_upper_h2(double d, double t, double kappa) {
    return 3.0 / t * std::exp(-d * d / (4.0 * t) - kappa * kappa * t / 4.0);
}

bool cheeger_yau_check(const Geometry& geom, double d, double t, std::optional<Geometry> comparison) {
    const Geometry cmp = comparison.value_or(geom);
    const HeatKernelValue lhs = heat_kernel(geom, d, t);
    const HeatKernelValue rhs = heat_kernel(cmp, d, t);
    const bool quad = lhs.method == EvaluationMethod::Quadrature || rhs.method == EvaluationMethod::Quadrature;
    const double slack = quad ? 1e-7 : 1e-12;
    return lhs.value >= rhs.value * (1.0 - slack);
}

}  // namespace deltaspec
