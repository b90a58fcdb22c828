#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "deltaspec/jacobi.hpp"
#include "deltaspec/principal.hpp"
#include "deltaspec/special_functions.hpp"
#include "oracles.hpp"

using namespace deltaspec;
using oracle::kPi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_rel(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, rel(a(i, j), b(i, j)));
    return worst;
}

// −∫₀^∞ K_t(d) e^{−ν²t} dt with K the flat kernel, on t = e^s.
double flat_laplace(int dim, double d, double nu) {
    auto f = [=](double s) {
        const double t = std::exp(s);
        return t * std::pow(4.0 * kPi * t, -0.5 * dim) * std::exp(-d * d / (4.0 * t) - nu * nu * t);
    };
    return oracle::gl(f, -12.0, std::log(800.0 / (nu * nu)), 600);
}

const Configuration kPair = Configuration::collinear({1.0, 1.0}, 1.0);

}  // namespace

TEST_CASE("closed-form values") {
    const Configuration one = Configuration::collinear({1.0}, 1.0);
    CHECK(principal_matrix(Geometry::flat3(), one, 2.0).entries(0, 0) == doctest::Approx(1.0 / (4.0 * kPi)));
    CHECK(principal_matrix(Geometry::flat3(), one, 2.0).entries(0, 0) == doctest::Approx(0.0795775).epsilon(1e-6));

    const Matrix h3 = principal_matrix(Geometry::hyperbolic3(1.0), kPair, 1.0).entries;
    CHECK(std::abs(h3(0, 0)) < 1e-15);
    CHECK(h3(0, 1) == doctest::Approx(-std::exp(-std::sqrt(2.0)) / (4.0 * kPi * std::sinh(1.0))).epsilon(1e-13));
    CHECK(h3(0, 1) == doctest::Approx(-0.016450).epsilon(1e-4));

    const Matrix rel2 = principal_matrix(Geometry::rel_flat2(1.0), Configuration::collinear({0.5, 0.5}, 1.0), 0.0).entries;
    CHECK(rel2(0, 1) == doctest::Approx(-oracle::bessel_k(0, 1.0) / (2.0 * kPi)).epsilon(1e-8));
    CHECK(rel2(0, 1) == doctest::Approx(-0.067005).epsilon(1e-5));
    CHECK(rel2(0, 0) == doctest::Approx(std::log(2.0) / (2.0 * kPi)).epsilon(1e-14));

    // ℍ² diagonal: difference of digammas
    const double h2 = phi_diagonal(Geometry::hyperbolic2(1.0), 1.0, 2.0);
    CHECK(h2 == doctest::Approx((oracle::digamma(0.5 + std::sqrt(4.25)) - oracle::digamma(0.5 + std::sqrt(1.25))) /
                                (2.0 * kPi))
                    .epsilon(1e-10));
}

TEST_CASE("relativistic flat off-diagonal at zero energy") {
    for (auto [m, d] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 3.0}}) {
        CAPTURE(m);
        const double v = phi_offdiagonal(Geometry::rel_flat2(m), d, 0.0);
        CHECK(rel(v, -oracle::bessel_k(0, m * d) / (2.0 * kPi)) < 1e-8);
    }
}

TEST_CASE("flat entries against direct Laplace transforms") {
    for (double nu : {0.3, 1.0, 2.5}) {
        for (double d : {0.5, 1.0, 3.0}) {
            CAPTURE(nu);
            CAPTURE(d);
            CHECK(rel(phi_offdiagonal(Geometry::flat3(), d, nu), -flat_laplace(3, d, nu)) < 1e-9);
            CHECK(rel(phi_offdiagonal(Geometry::flat2(), d, nu), -flat_laplace(2, d, nu)) < 1e-9);
            CHECK(rel(resolvent_kernel(Geometry::flat2(), d, nu), oracle::bessel_k(0, nu * d) / (2.0 * kPi)) < 1e-10);
        }
    }
}

TEST_CASE("closed forms agree with heat-kernel quadrature") {
    const std::vector<Configuration> configs = {
        Configuration::collinear({1.0, 1.0}, 1.0),
        Configuration::collinear({0.4, 1.7, 0.9}, 0.6),
    };
    for (auto geom : {Geometry::flat2(), Geometry::flat3(), Geometry::hyperbolic3(1.0), Geometry::hyperbolic3(0.3)}) {
        for (const auto& cfg : configs) {
            for (double nu : {0.2, 0.9, 1.0, 2.5, 6.0}) {
                CAPTURE(geom.name());
                CAPTURE(nu);
                CHECK(max_rel(principal_matrix(geom, cfg, nu).entries,
                              principal_matrix_oracle(geom, cfg, nu).entries) < 1e-6);
            }
        }
    }
    for (auto geom : {Geometry::hyperbolic2(1.0), Geometry::hyperbolic2(2.0)}) {
        for (const auto& cfg : configs) {
            for (double nu : {0.3, 1.0, 3.0}) {
                CAPTURE(geom.name());
                CAPTURE(nu);
                CHECK(max_rel(principal_matrix(geom, cfg, nu).entries,
                              principal_matrix_oracle(geom, cfg, nu).entries) < 1e-4);
            }
        }
    }
    const Configuration rel_cfg = Configuration::collinear({0.2, 0.5}, 1.0);
    for (double e : {-0.5, 0.6}) {
        CAPTURE(e);
        CHECK(max_rel(principal_matrix(Geometry::rel_flat2(1.0), rel_cfg, e).entries,
                      principal_matrix_oracle(Geometry::rel_flat2(1.0), rel_cfg, e).entries) < 1e-6);
    }
    const Geometry rh2 = Geometry::rel_hyperbolic2(1.0, 1.0);
    CHECK(max_rel(principal_matrix(rh2, rel_cfg, 0.7).entries, principal_matrix_oracle(rh2, rel_cfg, 0.7).entries) <
          1e-4);
}

TEST_CASE("hyperbolic plane index variants") {
    // Laplace transform of the plane kernel at ν = 2, κ = d = 1, by the test oracle.
    auto f = [](double s) {
        const double t = std::exp(s);
        return t * oracle::heat_h2(1.0, 1.0, t) * std::exp(-4.0 * t);
    };
    const double laplace = oracle::gl(f, -10.0, std::log(200.0), 300);
    const Geometry h2 = Geometry::hyperbolic2(1.0);
    const double shifted = phi_offdiagonal(h2, 1.0, 2.0, {H2Index::Shifted});
    const double printed = phi_offdiagonal(h2, 1.0, 2.0, {H2Index::Printed});
    CHECK(rel(shifted, -laplace) < 1e-6);
    CHECK(rel(printed, -laplace) > 0.5);
    CHECK(shifted == doctest::Approx(-oracle::legendre_q(-0.5 + std::sqrt(4.25), std::cosh(1.0)) / (2.0 * kPi)));
    CHECK(printed == doctest::Approx(-oracle::legendre_q(0.5 + std::sqrt(4.25), std::cosh(1.0)) / (2.0 * kPi)));
    // the diagonal does not depend on the variant
    CHECK(phi_diagonal(h2, 1.0, 2.0, {H2Index::Printed}) == phi_diagonal(h2, 1.0, 2.0));
    CHECK(PrincipalOptions{}.h2_index == H2Index::Shifted);
}

TEST_CASE("derivative matrix") {
    const Configuration one = Configuration::collinear({1.0}, 1.0);
    CHECK(principal_matrix_derivative(Geometry::flat3(), one, 1.0)(0, 0) == doctest::Approx(1.0 / (8.0 * kPi)));
    CHECK(principal_matrix_derivative(Geometry::flat3(), kPair, 1.0)(0, 1) ==
          doctest::Approx(std::exp(-1.0) / (8.0 * kPi)));
    CHECK(principal_matrix_derivative(Geometry::flat3(), kPair, 1.0)(0, 1) == doctest::Approx(0.0146367).epsilon(1e-6));

    // ∂/∂(ν²) by central differences on ℍ³
    const Geometry h3 = Geometry::hyperbolic3(1.0);
    const double nu = 1.5, h = 1e-5;
    const Matrix up = principal_matrix(h3, kPair, std::sqrt(nu * nu + h)).entries;
    const Matrix dn = principal_matrix(h3, kPair, std::sqrt(nu * nu - h)).entries;
    const Matrix an = principal_matrix_derivative(h3, kPair, nu);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(rel(an(i, j), (up(i, j) - dn(i, j)) / (2.0 * h)) < 1e-6);

    for (auto geom : {Geometry::flat2(), Geometry::flat3(), Geometry::hyperbolic2(1.0), Geometry::hyperbolic3(0.7)}) {
        CAPTURE(geom.name());
        const Configuration cfg = Configuration::collinear({0.8, 1.2}, 0.9);
        CHECK(max_rel(principal_matrix_derivative(geom, cfg, 1.1), principal_matrix_derivative_oracle(geom, cfg, 1.1)) <
              1e-6);
    }

    // relativistic: −∂Φ/∂E against differences of Φ
    const Geometry rf = Geometry::rel_flat2(1.0);
    const Configuration rc = Configuration::collinear({0.3, 0.4}, 1.0);
    const Matrix ad = principal_matrix_derivative(rf, rc, 0.5);
    const Matrix p1 = principal_matrix(rf, rc, 0.5 + 1e-5).entries;
    const Matrix p0 = principal_matrix(rf, rc, 0.5 - 1e-5).entries;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(rel(ad(i, j), -(p1(i, j) - p0(i, j)) / 2e-5) < 1e-5);
    CHECK(ad(0, 0) == doctest::Approx(1.0 / (2.0 * kPi * 0.5)));
}

TEST_CASE("bare coupling") {
    const Geometry f3 = Geometry::flat3();
    // Γ(−1/2, 1) = 2(e^{−1} − √π erfc 1)
    const double tail = std::pow(4.0 * kPi, -1.5) * 2.0 * (std::exp(-1.0) - std::sqrt(kPi) * std::erfc(1.0));
    CHECK(1.0 / bare_coupling(f3, 1.0, 1.0) == doctest::Approx(tail).epsilon(1e-9));
    CHECK(bare_coupling(f3, 1.0, 0.01) < bare_coupling(f3, 1.0, 0.1));
    CHECK(bare_coupling(f3, 1.0, 0.1) < bare_coupling(f3, 1.0, 1.0));
    CHECK(1.0 / bare_coupling(f3, 1.0, 1e-6) > 100.0 / bare_coupling(f3, 1.0, 1.0));
    CHECK(bare_coupling(Geometry::flat2(), 1.0, 1e-8) < bare_coupling(Geometry::flat2(), 1.0, 1e-2));
    CHECK(bare_coupling(Geometry::rel_flat2(1.0), 0.5, 1e-3) > 0.0);
    CHECK_THROWS_AS(bare_coupling(f3, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bare_coupling(Geometry::rel_flat2(1.0), 1.5, 0.1), std::domain_error);
}

TEST_CASE("free resolvent") {
    CHECK(resolvent_kernel(Geometry::flat3(), 1.0, 1.0) == doctest::Approx(std::exp(-1.0) / (4.0 * kPi)));
    CHECK(resolvent_kernel(Geometry::flat3(), 1.0, 1.0) == doctest::Approx(0.029276).epsilon(1e-5));
    CHECK(resolvent_kernel(Geometry::flat2(), 1.0, 1.0) == doctest::Approx(0.067005).epsilon(1e-5));
    CHECK(resolvent_kernel(Geometry::hyperbolic3(1.0), 1.0, 0.0) ==
          doctest::Approx(std::exp(-1.0) / (4.0 * kPi * std::sinh(1.0))));
    CHECK(resolvent_kernel(Geometry::hyperbolic3(1.0), 1.0, 0.0) == doctest::Approx(0.024909).epsilon(1e-4));
    for (auto geom : {Geometry::flat2(), Geometry::flat3(), Geometry::hyperbolic2(0.5), Geometry::hyperbolic3(2.0)})
        CHECK(resolvent_kernel(geom, 0.7, 1.3) == doctest::Approx(-phi_offdiagonal(geom, 0.7, 1.3)));
    CHECK_THROWS_AS(resolvent_kernel(Geometry::flat3(), 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(resolvent_kernel(Geometry::rel_flat2(1.0), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Krein correction") {
    const Configuration one = Configuration::collinear({1.0}, 1.0);
    const std::vector<double> x{1.0};
    const ResolventCorrection c = krein_correction(Geometry::flat3(), one, 2.0, x, x);
    CHECK(c.value == doctest::Approx(std::exp(-4.0) / (4.0 * kPi)));
    CHECK(c.value == doctest::Approx(0.0014573).epsilon(1e-4));
    CHECK_FALSE(c.near_pole());
    const ResolventCorrection near = krein_correction(Geometry::flat3(), one, 1.0 + 1e-8, x, x);
    CHECK(std::abs(near.value) > 1e6 * c.value);
    CHECK(near.pole_proximity < 1e-8);

    const Configuration three = Configuration::collinear({0.7, 1.0, 1.4}, 1.2);
    const std::vector<double> dx{0.5, 1.1, 2.0}, dy{1.5, 0.4, 0.9};
    for (auto geom : {Geometry::flat3(), Geometry::hyperbolic2(1.0)})
        CHECK(krein_correction(geom, three, 0.6, dx, dy).value ==
              doctest::Approx(krein_correction(geom, three, 0.6, dy, dx).value).epsilon(1e-13));
    const std::vector<double> short_list{1.0};
    CHECK_THROWS_AS(krein_correction(Geometry::flat3(), three, 0.6, short_list, dy), std::invalid_argument);
}

TEST_CASE("domain checks") {
    CHECK_THROWS_AS(principal_matrix(Geometry::flat3(), kPair, 0.0), std::domain_error);
    CHECK_THROWS_AS(principal_matrix(Geometry::flat3(), kPair, -1.0), std::domain_error);
    CHECK_THROWS_AS(principal_matrix(Geometry::rel_flat2(1.0), Configuration::collinear({0.5}, 1.0), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(principal_matrix(Geometry::flat3(), Configuration::collinear({1.0, 1.0}, 0.0), 1.0),
                    std::invalid_argument);
}

TEST_CASE("symmetry and negative couplings") {
    const Configuration cfg = Configuration::collinear({0.5, 1.0, 2.0, 0.8}, 0.7);
    for (auto geom : {Geometry::flat2(), Geometry::flat3(), Geometry::hyperbolic2(1.0), Geometry::hyperbolic3(1.0)}) {
        for (double nu : {0.1, 1.0, 4.0}) {
            const Matrix phi = principal_matrix(geom, cfg, nu).entries;
            CHECK(phi.asymmetry() == 0.0);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    if (i != j) CHECK(phi(i, j) < 0.0);
        }
    }
    const Geometry rf = Geometry::rel_flat2(1.0);
    const Matrix phi = principal_matrix(rf, Configuration::collinear({0.1, 0.3}, 1.0), -0.3).entries;
    CHECK(phi(0, 1) < 0.0);
    CHECK(phi(0, 1) == phi(1, 0));
}

TEST_CASE("zero curvature limit") {
    const Configuration cfg = Configuration::collinear({1.0, 0.8}, 1.0);
    for (auto [curved, flat] : {std::pair{0, Geometry::flat3()}, std::pair{1, Geometry::flat2()}}) {
        const Matrix target = principal_matrix(flat, cfg, 0.5).entries;
        double last = 1e300;
        for (double kappa : {1e-1, 1e-2, 1e-3}) {
            const Geometry g = curved == 0 ? Geometry::hyperbolic3(kappa) : Geometry::hyperbolic2(kappa);
            const double gap = (principal_matrix(g, cfg, 0.5).entries - target).max_abs();
            CAPTURE(kappa);
            CHECK(gap < last);
            last = gap;
        }
        CHECK(last <= 1e-2 * target.max_abs());
    }
}

TEST_CASE("diagonal lower bounds") {
    for (double kappa : {0.5, 1.0, 2.0}) {
        for (double mu : {0.3, 1.0}) {
            for (double nu : {0.5, 1.5, 5.0}) {
                if (nu <= mu) continue;
                const double h3 = phi_diagonal(Geometry::hyperbolic3(kappa), mu, nu);
                CHECK(h3 >= (std::sqrt(nu * nu + kappa * kappa) - std::sqrt(mu * mu + kappa * kappa)) / (4.0 * kPi) -
                                1e-15);
                const double h2 = phi_diagonal(Geometry::hyperbolic2(kappa), mu, nu);
                CHECK(h2 >= (erfc_scaled_phi(nu, kappa) - erfc_scaled_phi(mu, kappa)) / (32.0 * kPi));
            }
        }
    }
}

TEST_CASE("large-nu diagonal asymptotics") {
    for (double mu : {0.5, 2.0}) {
        const double kappa = 1.0;
        const double nu = 1e3 * std::max(mu, kappa);
        const double g2 = std::log(nu / mu) / (2.0 * kPi);
        const double g3 = (nu - mu) / (4.0 * kPi);
        CHECK(phi_diagonal(Geometry::hyperbolic2(kappa), mu, nu) / g2 == doctest::Approx(1.0).epsilon(0.05));
        CHECK(phi_diagonal(Geometry::hyperbolic3(kappa), mu, nu) / g3 == doctest::Approx(1.0).epsilon(0.05));
        CHECK(phi_diagonal(Geometry::flat2(), mu, nu) == doctest::Approx(g2));
    }
}

TEST_CASE("relativistic flat diagonal vanishes at the binding energy") {
    for (double mu : {-0.5, 0.0, 0.7})
        CHECK(phi_diagonal(Geometry::rel_flat2(1.0), mu, mu) == 0.0);
    CHECK(std::abs(phi_diagonal(Geometry::rel_hyperbolic2(1.0, 1.0), 0.4, 0.4)) < 1e-10);
}
