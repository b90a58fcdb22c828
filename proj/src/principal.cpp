#include "deltaspec/principal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "deltaspec/jacobi.hpp"
#include "deltaspec/quadrature.hpp"
#include "deltaspec/special_functions.hpp"

namespace deltaspec {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

// Bottom of the free spectrum, (D−1)²κ²/4; the heat kernel decays like
// e^{−gap·t} on top of any polynomial factor.
double spectral_gap(const Geometry& g) {
    switch (g.spatial().kind()) {
        case GeometryKind::Hyperbolic2: return g.kappa() * g.kappa() / 4.0;
        case GeometryKind::Hyperbolic3: return g.kappa() * g.kappa();
        default: return 0.0;
    }
}

double h2_index_root(double nu, double kappa) { return std::sqrt(nu * nu / (kappa * kappa) + 0.25); }

double h2_legendre_degree(double nu, double kappa, H2Index idx) {
    const double s = h2_index_root(nu, kappa);
    return idx == H2Index::Shifted ? s - 0.5 : s + 0.5;
}

// e^{−um²} e^{uE²} erfc(−E√u): the t-integral of e^{Et − t²/4u − um²} times
// (πu)^{−1/2}, written so nothing overflows.
double rel_weight(double energy, double mass, double u) {
    const double x = energy * std::sqrt(u);
    if (energy >= 0.0) {
        return 2.0 * std::exp(-u * (mass * mass - energy * energy)) - std::exp(-u * mass * mass) * erfcx(x);
    }
    return std::exp(-u * mass * mass) * erfcx(-x);
}

QuadratureOptions rel_opts(double rel) { return {0.0, rel, 4000}; }

double heat(const Geometry& g, double d, double t) { return heat_kernel(g, d, t).value; }

// ∫_ε^∞ f(t) dt in the variable t = ε e^x.
double log_tail_integral(const Integrand& f, double eps, double decay_rate) {
    auto g = [&](double x) {
        const double t = eps * std::exp(x);
        if (!std::isfinite(t)) return 0.0;
        const double v = f(t);
        return v == 0.0 ? 0.0 : v * t;
    };
    const double x0 = std::log(std::max(1.0, 1.0 / (decay_rate * eps)));
    return integrate_semiinfinite(g, 0.0, {1.0 / std::max(1.0, x0), 0.0}, rel_opts(1e-10)).value;
}

double nonrel_diag(const Geometry& geom, double mu, double nu) {
    switch (geom.kind()) {
        case GeometryKind::Flat2: return std::log(nu / mu) / (2.0 * kPi);
        case GeometryKind::Flat3: return (nu - mu) / (4.0 * kPi);
        case GeometryKind::Hyperbolic3: {
            const double k2 = geom.kappa() * geom.kappa();
            return (std::sqrt(k2 + nu * nu) - std::sqrt(k2 + mu * mu)) / (4.0 * kPi);
        }
        case GeometryKind::Hyperbolic2: {
            const double k = geom.kappa();
            return (digamma(0.5 + h2_index_root(nu, k)) - digamma(0.5 + h2_index_root(mu, k))) / (2.0 * kPi);
        }
        default: break;
    }
    throw std::logic_error("nonrel_diag: relativistic geometry");
}

double nonrel_off(const Geometry& geom, double d, double nu, const PrincipalOptions& opts) {
    return -resolvent_kernel(geom, d, nu, opts);
}

double relflat_off(double mass, double d, double energy) {
    // m√(s²+1) − Es = (m−E)s + m/(√(s²+1)+s), free of cancellation as E → m.
    auto f = [=](double s) {
        const double r = std::sqrt(s * s + 1.0);
        return std::exp(-d * ((mass - energy) * s + mass / (r + s))) / r;
    };
    const double rate = std::max(1e-3, d * (mass - energy));
    return -integrate_semiinfinite(f, 0.0, {rate, 0.0}, rel_opts(1e-12)).value / (2.0 * kPi);
}

double relh2_diag(const Geometry& geom, double mu, double energy) {
    const Geometry h2 = geom.spatial();
    const double m = geom.mass();
    const double top = std::max({mu, energy, 0.0});
    const double rate = m * m - top * top + spectral_gap(h2);
    auto f = [&](double u) {
        return heat(h2, 0.0, u) * (rel_weight(mu, m, u) - rel_weight(energy, m, u));
    };
    // vanishes at E = μ, so the relative target alone can chase rounding noise
    QuadratureOptions o = rel_opts(1e-8);
    o.abs_tol = 1e-14;
    return integrate_semiinfinite(f, 0.0, {rate, 0.5}, o).value;
}

double relh2_off(const Geometry& geom, double d, double energy) {
    const Geometry h2 = geom.spatial();
    const double m = geom.mass();
    const double top = std::max(energy, 0.0);
    const double rate = m * m - top * top + spectral_gap(h2);
    auto f = [&](double u) { return heat(h2, d, u) * rel_weight(energy, m, u); };
    return -integrate_semiinfinite(f, 0.0, {rate, 0.0}, rel_opts(1e-8)).value;
}

// (s, u) form of the relativistic principal matrix: the s-integral is outer,
// the u-integral over the heat kernel inner. `lead` is μ on the diagonal;
// NaN marks an off-diagonal entry.
double rel_oracle_entry(const Geometry& geom, double d, double lead, double energy) {
    const Geometry space = geom.spatial();
    const double m = geom.mass();
    const bool diag = !std::isnan(lead);
    const double gap = spectral_gap(space);
    const double top = std::max({diag ? lead : 0.0, energy, 0.0});
    const double s_scale = 2.0 / std::sqrt(1.0 - (top * top) / (m * m));
    auto inner = [&](double s) -> double {
        const double peak = std::pow(s * top / (2.0 * m * m), 2);
        const double scale = std::max(1.0 / (m * m + gap), 2.0 * peak);
        auto g = [&](double u) -> double {
            const double k = heat(space, d, u);
            const double b = s * energy * std::sqrt(u) - u * m * m;
            if (!diag) return k * std::exp(b);
            const double a = s * lead * std::sqrt(u) - u * m * m;
            if (std::abs(a - b) < 1.0) return k * std::exp(b) * std::expm1(a - b);
            return k * (std::exp(a) - std::exp(b));
        };
        return integrate_semiinfinite(g, 0.0, {1.0 / scale, diag ? 0.5 : 0.0}, rel_opts(1e-9)).value;
    };
    auto outer = [&](double s) {
        const double gauss = std::exp(-s * s / 4.0);
        return gauss == 0.0 ? 0.0 : gauss * inner(s);
    };
    const double value = integrate_semiinfinite(outer, 0.0, {1.0 / s_scale, 0.0}, rel_opts(1e-8)).value / kSqrtPi;
    return diag ? value : -value;
}

double nonrel_oracle_diag(const Geometry& geom, double mu, double nu) {
    const double gap = spectral_gap(geom);
    // e^{−μ²t} − e^{−ν²t}, factored on the slower exponential
    const double lo = std::min(mu, nu);
    const double gap2 = std::abs(nu * nu - mu * mu);
    const double sign = nu >= mu ? 1.0 : -1.0;
    auto f = [&](double t) {
        return sign * heat(geom, 0.0, t) * std::exp(-lo * lo * t) * -std::expm1(-gap2 * t);
    };
    const double rate = std::min(mu, nu) * std::min(mu, nu) + gap;
    const double p = geom.dimension() == 3 ? 0.5 : 0.0;
    const double rel = geom.kind() == GeometryKind::Hyperbolic2 ? 1e-8 : 1e-11;
    return integrate_semiinfinite(f, 0.0, {rate, p}, rel_opts(rel)).value;
}

double nonrel_oracle_weighted(const Geometry& geom, double d, double nu, int power) {
    const double gap = spectral_gap(geom);
    auto f = [&](double t) { return std::pow(t, power) * heat(geom, d, t) * std::exp(-nu * nu * t); };
    double rate = nu * nu + gap;
    if (d > 0.0) rate = std::min(rate, 2.0 * nu / d);
    const double p = (d == 0.0 && geom.dimension() == 3 && power == 1) ? 0.5 : 0.0;
    const double rel = geom.kind() == GeometryKind::Hyperbolic2 ? 1e-8 : 1e-11;
    return integrate_semiinfinite(f, 0.0, {rate, p}, rel_opts(rel)).value;
}

// Per-entry evaluation with memoisation on distinct μ values and distances.
template <typename Diag, typename Off>
Matrix assemble(const Configuration& cfg, Diag diag, Off off) {
    const std::size_t n = cfg.size();
    Matrix out(n);
    std::map<double, double> diag_cache;
    std::map<double, double> off_cache;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = diag_cache.find(cfg.mu[i]);
        if (it == diag_cache.end()) it = diag_cache.emplace(cfg.mu[i], diag(cfg.mu[i])).first;
        out(i, i) = it->second;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = cfg.dist(i, j);
            auto jt = off_cache.find(d);
            if (jt == off_cache.end()) jt = off_cache.emplace(d, off(d)).first;
            out(i, j) = out(j, i) = jt->second;
        }
    }
    return out;
}

}  // namespace

void require_spectral_param(const Geometry& geom, double param) {
    if (geom.relativistic()) {
        if (!(param > -geom.mass() && param < geom.mass()))
            throw std::domain_error("energy " + std::to_string(param) + " outside (-m, m)");
    } else if (!(param > 0.0) || !std::isfinite(param)) {
        throw std::domain_error("nu must be positive, got " + std::to_string(param));
    }
}

double phi_diagonal(const Geometry& geom, double mu, double param, const PrincipalOptions&) {
    require_spectral_param(geom, param);
    switch (geom.kind()) {
        case GeometryKind::RelFlat2:
            return std::log((geom.mass() - param) / (geom.mass() - mu)) / (2.0 * kPi);
        case GeometryKind::RelHyperbolic2: return relh2_diag(geom, mu, param);
        default: return nonrel_diag(geom, mu, param);
    }
}

double phi_offdiagonal(const Geometry& geom, double d, double param, const PrincipalOptions& opts) {
    require_spectral_param(geom, param);
    if (!(d > 0.0)) throw std::domain_error("phi_offdiagonal: distance must be positive");
    switch (geom.kind()) {
        case GeometryKind::RelFlat2: return relflat_off(geom.mass(), d, param);
        case GeometryKind::RelHyperbolic2: return relh2_off(geom, d, param);
        default: return nonrel_off(geom, d, param, opts);
    }
}

PrincipalMatrix principal_matrix(const Geometry& geom, const Configuration& cfg, double param,
                                 const PrincipalOptions& opts) {
    require_valid(cfg, geom);
    require_spectral_param(geom, param);
    Matrix m = assemble(
        cfg, [&](double mu) { return phi_diagonal(geom, mu, param, opts); },
        [&](double d) { return phi_offdiagonal(geom, d, param, opts); });
    const bool quad = geom.relativistic() && cfg.size() > 1;
    const bool all_quad = geom.kind() == GeometryKind::RelHyperbolic2;
    return {std::move(m), param, geom,
            quad || all_quad ? EvaluationMethod::Quadrature : EvaluationMethod::ClosedForm};
}

PrincipalMatrix principal_matrix_oracle(const Geometry& geom, const Configuration& cfg, double param) {
    require_valid(cfg, geom);
    require_spectral_param(geom, param);
    Matrix m;
    if (geom.relativistic()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        m = assemble(
            cfg, [&](double mu) { return rel_oracle_entry(geom, 0.0, mu, param); },
            [&](double d) { return rel_oracle_entry(geom, d, nan, param); });
    } else {
        m = assemble(
            cfg, [&](double mu) { return nonrel_oracle_diag(geom, mu, param); },
            [&](double d) { return -nonrel_oracle_weighted(geom, d, param, 0); });
    }
    return {std::move(m), param, geom, EvaluationMethod::Quadrature};
}

Matrix principal_matrix_derivative(const Geometry& geom, const Configuration& cfg, double param,
                                   const PrincipalOptions& opts) {
    require_valid(cfg, geom);
    require_spectral_param(geom, param);
    const double nu = param;
    const double kappa = geom.kappa();

    // Central difference of an entry in the natural spectral variable:
    // z = −ν² (returns −∂/∂z) or E (returns −∂/∂E).
    auto difference = [&](auto&& entry) {
        if (geom.relativistic()) {
            const double m = geom.mass();
            const double h = std::min({1e-5 * std::max(1.0, std::abs(param)), 0.5 * (m - param),
                                       0.5 * (param + m)});
            return -(entry(param + h) - entry(param - h)) / (2.0 * h);
        }
        const double nu2 = nu * nu;
        const double h = std::min(1e-5 * std::max(1.0, nu2), 0.5 * nu2);
        return (entry(std::sqrt(nu2 + h)) - entry(std::sqrt(nu2 - h))) / (2.0 * h);
    };

    auto diag = [&](double mu) -> double {
        switch (geom.kind()) {
            case GeometryKind::Flat2: return 1.0 / (4.0 * kPi * nu * nu);
            case GeometryKind::Flat3: return 1.0 / (8.0 * kPi * nu);
            case GeometryKind::Hyperbolic3: return 1.0 / (8.0 * kPi * std::sqrt(kappa * kappa + nu * nu));
            case GeometryKind::Hyperbolic2: {
                const double s = h2_index_root(nu, kappa);
                return trigamma(0.5 + s) / (2.0 * kPi) / (2.0 * kappa * kappa * s);
            }
            case GeometryKind::RelFlat2: return 1.0 / (2.0 * kPi * (geom.mass() - param));
            case GeometryKind::RelHyperbolic2:
                return difference([&](double p) { return phi_diagonal(geom, mu, p, opts); });
        }
        return 0.0;
    };
    auto off = [&](double d) -> double {
        switch (geom.kind()) {
            case GeometryKind::Flat2: return d * bessel_k(1, nu * d) / (4.0 * kPi * nu);
            case GeometryKind::Flat3: return std::exp(-nu * d) / (8.0 * kPi * nu);
            case GeometryKind::Hyperbolic3: {
                const double y = std::sqrt(kappa * kappa + nu * nu);
                return d / (2.0 * y) * kappa * std::exp(-d * y) / (4.0 * kPi * std::sinh(kappa * d));
            }
            default: return difference([&](double p) { return phi_offdiagonal(geom, d, p, opts); });
        }
    };
    return assemble(cfg, diag, off);
}

Matrix principal_matrix_derivative_oracle(const Geometry& geom, const Configuration& cfg, double nu) {
    if (geom.relativistic()) throw std::invalid_argument("derivative oracle: non-relativistic geometries only");
    require_valid(cfg, geom);
    require_spectral_param(geom, nu);
    return assemble(
        cfg, [&](double) { return nonrel_oracle_weighted(geom, 0.0, nu, 1); },
        [&](double d) { return nonrel_oracle_weighted(geom, d, nu, 1); });
}

double bare_coupling(const Geometry& geom, double mu, double epsilon) {
    if (!(epsilon > 0.0)) throw std::domain_error("bare_coupling: epsilon must be positive");
    const Geometry space = geom.spatial();
    const double gap = spectral_gap(space);
    double inverse = 0.0;
    if (geom.relativistic()) {
        const double m = geom.mass();
        if (!(mu > -m && mu < m)) throw std::domain_error("bare_coupling: mu outside (-m, m)");
        const double top = std::max(mu, 0.0);
        inverse = log_tail_integral([&](double u) { return heat(space, 0.0, u) * rel_weight(mu, m, u); },
                                    epsilon, m * m - top * top + gap);
    } else {
        if (!(mu > 0.0)) throw std::domain_error("bare_coupling: mu must be positive");
        inverse = log_tail_integral([&](double t) { return heat(space, 0.0, t) * std::exp(-mu * mu * t); },
                                    epsilon, mu * mu + gap);
    }
    return 1.0 / inverse;
}

double resolvent_kernel(const Geometry& geom, double d, double nu, const PrincipalOptions& opts) {
    if (geom.relativistic()) throw std::invalid_argument("resolvent_kernel: non-relativistic geometries only");
    if (!(d > 0.0)) throw std::domain_error("resolvent_kernel: distance must be positive");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::domain_error("resolvent_kernel: nu must be non-negative");
    switch (geom.kind()) {
        case GeometryKind::Flat2:
            if (nu == 0.0) throw std::domain_error("resolvent_kernel: flat2 requires nu > 0");
            return bessel_k(0, nu * d) / (2.0 * kPi);
        case GeometryKind::Flat3: return std::exp(-nu * d) / (4.0 * kPi * d);
        case GeometryKind::Hyperbolic3: {
            const double k = geom.kappa();
            return k * std::exp(-d * std::sqrt(k * k + nu * nu)) / (4.0 * kPi * std::sinh(k * d));
        }
        case GeometryKind::Hyperbolic2: {
            const double k = geom.kappa();
            return legendre_q_cosh(h2_legendre_degree(nu, k, opts.h2_index), k * d) / (2.0 * kPi);
        }
        default: break;
    }
    throw std::logic_error("resolvent_kernel: unreachable");
}

ResolventCorrection krein_correction(const Geometry& geom, const Configuration& cfg, double nu,
                                     std::span<const double> dists_x, std::span<const double> dists_y,
                                     const PrincipalOptions& opts) {
    const std::size_t n = cfg.size();
    if (dists_x.size() != n || dists_y.size() != n)
        throw std::invalid_argument("krein_correction: one distance per center required");
    const PrincipalMatrix phi = principal_matrix(geom, cfg, nu, opts);
    std::vector<double> rx(n);
    std::vector<double> ry(n);
    for (std::size_t i = 0; i < n; ++i) {
        rx[i] = resolvent_kernel(geom, dists_x[i], nu, opts);
        ry[i] = resolvent_kernel(geom, dists_y[i], nu, opts);
    }
    const EigenBranches eig = symmetric_eigen(phi.entries);
    double value = 0.0;
    double proximity = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const std::vector<double> v = eig.vector(k);
        value += dot(v, rx) * dot(v, ry) / eig.values[k];
        proximity = std::min(proximity, std::abs(eig.values[k]));
    }
    return {value, proximity};
}

}  // namespace deltaspec
