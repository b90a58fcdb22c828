#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "deltaspec/criteria.hpp"
#include "deltaspec/spectrum.hpp"
#include "oracles.hpp"

using namespace deltaspec;
using oracle::kPi;
constexpr double kE = std::numbers::e;

namespace {

Configuration pair(double mu1, double mu2, double d) { return Configuration::collinear({mu1, mu2}, d); }

// Collinear centers at spacing >= d with every μ in [lo, hi].
Configuration draw_config(std::mt19937& rng, std::size_t n, double lo, double hi, double d) {
    std::uniform_real_distribution<double> mu(lo, hi), extra(0.0, 0.5 * d);
    Configuration c{std::vector<double>(n), Matrix(n)};
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        c.mu[i] = mu(rng);
        if (i > 0) x[i] = x[i - 1] + d + extra(rng);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c.dist(i, j) = std::abs(x[i] - x[j]);
    return c;
}

// Smallest d in [lo, hi] where pred holds, by bisection (pred monotone in d).
template <class Pred>
double threshold_in_d(Pred pred, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TEST_CASE("Gerschgorin rows") {
    const Geometry h3 = Geometry::hyperbolic3(1.0);
    const CriterionReport r = gerschgorin_condition(h3, pair(1, 1, 1), 0.5);
    const double row = (std::sqrt(1.25) - std::sqrt(2.0)) / (4.0 * kPi) +
                       std::exp(-std::sqrt(1.25)) / (4.0 * kPi * std::sinh(1.0));
    CHECK(r.lhs == doctest::Approx(row).epsilon(1e-12));
    CHECK(r.satisfied);
    CHECK(r.predicted_count == std::optional<std::size_t>(2));
    CHECK(r.witness == std::optional<double>(0.5));

    const CriterionReport f = gerschgorin_condition(Geometry::flat3(), pair(1, 1, 0.1), 0.5);
    CHECK(f.lhs == doctest::Approx(-0.5 / (4.0 * kPi) + std::exp(-0.05) / (0.4 * kPi)).epsilon(1e-12));
    CHECK_FALSE(f.satisfied);
    CHECK_FALSE(f.predicted_count.has_value());

    const Configuration one = Configuration::collinear({1.0}, 1.0);
    for (double nu : {0.1, 0.5, 0.99}) CHECK(gerschgorin_condition(Geometry::flat3(), one, nu).satisfied);
    CHECK_FALSE(gerschgorin_condition(Geometry::flat3(), one, 1.01).satisfied);
}

TEST_CASE("Gerschgorin scan") {
    const Geometry h3 = Geometry::hyperbolic3(1.0);
    std::vector<double> grid;
    for (int k = 1; k <= 50; ++k) grid.push_back(k / 51.0);
    CHECK(gerschgorin_scan(h3, pair(1, 1, 1), grid).has_value());
    CHECK_FALSE(gerschgorin_scan(Geometry::flat3(), pair(1, 1, 0.1), grid).has_value());
    CHECK(count_bound_states(Geometry::flat3(), pair(1, 1, 0.1)) == 1);
    const std::vector<double> empty;
    CHECK_FALSE(gerschgorin_scan(h3, pair(1, 1, 1), empty).has_value());
    CHECK_FALSE(cassini_scan(h3, pair(1, 1, 1), empty).has_value());
}

TEST_CASE("Cassini ovals") {
    // symmetric pair: reduces to Φ₁₁ + |Φ₁₂| < 0
    for (double nu : {0.3, 0.6, 0.9}) {
        const CriterionReport g = gerschgorin_condition(Geometry::flat3(), pair(1, 1, 2.0), nu);
        const CriterionReport c = cassini_condition(Geometry::flat3(), pair(1, 1, 2.0), nu);
        CHECK(c.satisfied == g.satisfied);
        CHECK(c.lhs >= 2.0 * g.lhs - 1e-15);
    }
    // unequal pair: the first row fails, the oval still excludes zero
    const CriterionReport c = cassini_condition(Geometry::flat3(), pair(1, 3, 1.0), 0.5);
    CHECK(c.satisfied);
    CHECK(c.gerschgorin_satisfied == std::optional<bool>(false));
    CHECK_FALSE(gerschgorin_condition(Geometry::flat3(), pair(1, 3, 1.0), 0.5).satisfied);
    CHECK(count_bound_states(Geometry::flat3(), pair(1, 3, 1.0)) == 2);

    CHECK_THROWS_AS(cassini_condition(Geometry::flat3(), Configuration::collinear({1.0}, 1.0), 0.5),
                    std::invalid_argument);
}

TEST_CASE("Gerschgorin implies Cassini") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> nu(0.05, 2.0);
    int implied = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Configuration cfg = draw_config(rng, 2 + trial % 4, 0.5, 2.0, 0.5 + 0.1 * trial);
        for (auto geom : {Geometry::flat2(), Geometry::flat3(), Geometry::hyperbolic2(1.0), Geometry::hyperbolic3(1.0)}) {
            const double p = nu(rng);
            const CriterionReport g = gerschgorin_condition(geom, cfg, p);
            const CriterionReport c = cassini_condition(geom, cfg, p);
            if (g.satisfied) {
                ++implied;
                CHECK(c.satisfied);
            }
            CHECK(c.gerschgorin_satisfied == std::optional<bool>(g.satisfied));
        }
    }
    CHECK(implied > 10);
}

TEST_CASE("hyperbolic space criterion") {
    const CriterionReport r = h3_criterion(1.0, 1.0, 1.0, 2);
    CHECK(r.regime == "boundary");
    CHECK(r.lhs == doctest::Approx((std::sqrt(2.0) - 1.0) * std::exp(1.0) * std::sinh(1.0)).epsilon(1e-13));
    CHECK(r.lhs == doctest::Approx(1.3233).epsilon(1e-4));
    CHECK(r.rhs == 1.0);
    CHECK(r.satisfied);
    CHECK(h3_interior_lhs(1.0, 1.0, 1.0) == doctest::Approx(std::exp(std::sqrt(2.0) - 1.0) * std::sinh(1.0)));
    CHECK(h3_interior_lhs(1.0, 1.0, 1.0) == doctest::Approx(1.7783).epsilon(1e-4));

    const CriterionReport weak = h3_criterion(1.0, 0.1, 0.1, 5);
    CHECK(weak.regime == "interior");
    CHECK(weak.lhs == doctest::Approx(0.4075).epsilon(1e-3));
    CHECK_FALSE(weak.satisfied);

    // the interior expression alone would claim two states here; there is one
    CHECK(h3_interior_lhs(1.0, 0.1, 1.0) > 1.0);
    CHECK_FALSE(h3_criterion(1.0, 0.1, 1.0, 2).satisfied);
    CHECK(count_bound_states(Geometry::hyperbolic3(1.0), pair(0.1, 0.1, 1.0)) == 1);

    for (double mu : {0.01, 1.0}) CHECK(h3_criterion(1.0, mu, 0.01, 1).satisfied);
    CHECK_THROWS_AS(h3_criterion(0.0, 1.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(h3_criterion(1.0, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("hyperbolic plane criterion") {
    const double t10 = 0.5 + std::sqrt(100.25);
    CHECK(t10 == doctest::Approx(10.5125).epsilon(1e-5));
    const CriterionReport big = h2_criterion(1.0, 10.0, 1.0, 2);
    CHECK(big.regime == "t>=e");
    CHECK(big.lhs == doctest::Approx(t10 / (2.0 * kE)));
    CHECK(big.lhs == doctest::Approx(1.9336).epsilon(1e-4));
    CHECK(big.satisfied);

    const CriterionReport small = h2_criterion(1.0, 1.0, 1.0, 2);
    CHECK(small.regime == "t<e");
    CHECK(small.lhs == doctest::Approx(0.5 * std::log(0.5 + std::sqrt(1.25))));
    CHECK(small.lhs == doctest::Approx(0.2406).epsilon(1e-3));
    CHECK_FALSE(small.satisfied);

    CHECK(h2_criterion(1.0, 10.0, 1.0, 1).satisfied);
    CHECK(h2_criterion(1.0, 1.0, 1.0, 1).satisfied);
}

TEST_CASE("two centers in flat space") {
    const CriterionReport a = flat_two_center_criterion(2, 1.0, 1.0, 3.0);
    CHECK(a.predicted_count == std::optional<std::size_t>(2));
    const CriterionReport b = flat_two_center_criterion(3, 1.0, 2.0, 1.0);
    CHECK(b.lhs == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.predicted_count == std::optional<std::size_t>(2));
    const CriterionReport c = flat_two_center_criterion(2, 1.0, 1.0, 1.0);
    CHECK_FALSE(c.satisfied);
    CHECK(c.predicted_count == std::optional<std::size_t>(1));
    CHECK_THROWS_AS(flat_two_center_criterion(4, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("relativistic criteria") {
    const CriterionReport a = rel_flat2_criterion(1.0, 0.0, 3.0, 2);
    CHECK(a.lhs == doctest::Approx(3.0 / kE));
    CHECK(a.satisfied);
    CHECK(rel_flat2_criterion(1.0, 0.0, 3.0, 1).satisfied);
    const CriterionReport b = rel_flat2_criterion(1.0, 0.9, 1.0, 2);
    CHECK(b.lhs == doctest::Approx(0.1 / kE));
    CHECK_FALSE(b.satisfied);
    CHECK_THROWS_AS(rel_flat2_criterion(1.0, 1.0, 1.0, 2), std::invalid_argument);

    const double c = 24.0 * std::pow(4.0 * kPi, 1.5);
    const CriterionReport h = rel_h2_criterion(1.0, 1.0, 0.0, 1.0, 2);
    CHECK(h.regime == "selector>=");
    CHECK(h.lhs == doctest::Approx(std::sqrt(1.25) / (c * kE)));
    CHECK_FALSE(h.satisfied);
    CHECK(c * kE / std::sqrt(1.25) == doctest::Approx(2599.35).epsilon(1e-5));
    CHECK_FALSE(rel_h2_criterion(1.0, 1.0, 0.0, 2599.0, 2).satisfied);
    CHECK(rel_h2_criterion(1.0, 1.0, 0.0, 2600.0, 2).satisfied);
    CHECK(rel_h2_criterion(1.0, 1.0, 0.0, 1.0, 1).satisfied);

    // the two regimes meet where M − μ = e (M − m)
    const double big_m = std::sqrt(1.25);
    const double mu_b = big_m - kE * (big_m - 1.0);
    const CriterionReport at = rel_h2_criterion(1.0, 1.0, mu_b, 10.0, 2);
    const CriterionReport just = rel_h2_criterion(1.0, 1.0, mu_b + 1e-9, 10.0, 2);
    CHECK(at.regime != just.regime);
    CHECK(at.lhs == doctest::Approx(just.lhs).epsilon(1e-7));
}

TEST_CASE("satisfied criteria are sound") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> kappa(0.3, 2.0), mu(0.2, 4.0), d(0.2, 6.0);
    const std::size_t sizes[] = {2, 3, 5};
    int h3_hits = 0, h2_hits = 0;
    for (int draws = 0; h3_hits < 20 || h2_hits < 20; ++draws) {
        REQUIRE(draws < 20000);
        const std::size_t n = sizes[draws % 3];
        const double k = kappa(rng), m = mu(rng), dd = d(rng);
        CAPTURE(k);
        CAPTURE(m);
        CAPTURE(dd);
        CAPTURE(n);
        if (h3_hits < 20 && h3_criterion(k, m, dd, n).satisfied) {
            ++h3_hits;
            const Geometry g = Geometry::hyperbolic3(k);
            const Configuration cfg = draw_config(rng, n, m, 1.5 * m, dd);
            CHECK(count_bound_states(g, cfg) == n);
            std::vector<double> grid;
            for (int j = 0; j < 400; ++j) grid.push_back(1e-4 * m * std::pow(1e4, j / 400.0));
            CHECK(gerschgorin_scan(g, cfg, grid).has_value());
        }
        if (h2_hits < 20 && h2_criterion(k, m, dd, n).satisfied) {
            ++h2_hits;
            const Geometry g = Geometry::hyperbolic2(k);
            const Configuration cfg = draw_config(rng, n, m, 1.5 * m, dd);
            CHECK(count_bound_states(g, cfg) == n);
            std::vector<double> grid;
            for (int j = 0; j < 400; ++j) grid.push_back(1e-4 * m * std::pow(1e4, j / 400.0));
            CHECK(gerschgorin_scan(g, cfg, grid).has_value());
        }
    }
}

TEST_CASE("relativistic flat criterion is sound") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> mu(-0.9, 0.9), d(0.5, 20.0);
    const std::size_t sizes[] = {2, 3};
    int hits = 0;
    for (int draws = 0; hits < 8; ++draws) {
        REQUIRE(draws < 5000);
        const std::size_t n = sizes[draws % 2];
        const double top = mu(rng), dd = d(rng);
        if (!rel_flat2_criterion(1.0, top, dd, n).satisfied) continue;
        ++hits;
        Configuration cfg = draw_config(rng, n, -0.9, top, dd);
        CAPTURE(top);
        CAPTURE(dd);
        CHECK(count_bound_states(Geometry::rel_flat2(1.0), cfg) == n);
    }
}

TEST_CASE("zero curvature thresholds") {
    const double kappa = 1e-3;
    for (double mu : {0.5, 1.0, 2.0}) {
        const double d3 = threshold_in_d([&](double d) { return h3_criterion(kappa, mu, d, 2).satisfied; }, 1e-6, 1e3);
        CHECK(mu * d3 == doctest::Approx(1.0).epsilon(0.01));
        const double d2 = threshold_in_d([&](double d) { return h2_criterion(kappa, mu, d, 2).satisfied; }, 1e-6, 1e3);
        CHECK(mu * d2 == doctest::Approx(2.0 * kE).epsilon(0.01));
    }
}

TEST_CASE("criteria are monotone in distance") {
    for (std::size_t n : {2u, 3u, 5u}) {
        for (double mu : {0.1, 0.7, 3.0}) {
            bool h3 = false, h2 = false, rf = false, rh = false;
            for (int k = 0; k < 200; ++k) {
                const double d = 0.01 * std::pow(1e8, k / 199.0);
                const bool h3_now = h3_criterion(1.0, mu, d, n).satisfied;
                const bool h2_now = h2_criterion(1.0, mu, d, n).satisfied;
                const bool rf_now = rel_flat2_criterion(4.0, mu, d, n).satisfied;
                const bool rh_now = rel_h2_criterion(1.0, 4.0, mu, d, n).satisfied;
                CHECK((!h3 || h3_now));
                CHECK((!h2 || h2_now));
                CHECK((!rf || rf_now));
                CHECK((!rh || rh_now));
                h3 = h3_now;
                h2 = h2_now;
                rf = rf_now;
                rh = rh_now;
            }
            CHECK(h3);
            CHECK(h2);
            CHECK(rf);
            CHECK(rh);
        }
    }
}

TEST_CASE("witness grids") {
    const auto g = default_witness_grid(Geometry::flat3(), pair(2.0, 1.0, 1.0));
    REQUIRE(g.size() == 64);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g.back() < 1.0);
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] > g[k - 1]);
    const auto r = default_witness_grid(Geometry::rel_flat2(1.0), pair(0.2, 0.5, 1.0));
    REQUIRE(r.size() == 64);
    CHECK(r.front() == doctest::Approx(0.5 + 1e-6));
    CHECK(r.back() == doctest::Approx(1.0 - 1e-6));
}

TEST_CASE("all applicable criteria") {
    auto ids = [](const std::vector<CriterionReport>& v) {
        std::vector<std::string> out;
        for (const auto& r : v) out.push_back(r.id);
        return out;
    };
    const auto h3 = evaluate_criteria(Geometry::hyperbolic3(1.0), pair(1, 1, 1));
    CHECK(ids(h3) == std::vector<std::string>{"gerschgorin", "cassini", "h3"});
    for (const auto& r : h3) CHECK(r.satisfied);
    const auto f2 = evaluate_criteria(Geometry::flat2(), pair(1, 1, 1));
    CHECK(ids(f2) == std::vector<std::string>{"gerschgorin", "cassini", "flat_two_center"});
    CHECK(f2[2].predicted_count == std::optional<std::size_t>(1));
    CHECK_FALSE(f2[0].satisfied);
    const auto single = evaluate_criteria(Geometry::hyperbolic2(1.0), Configuration::collinear({1.0}, 1.0));
    CHECK(ids(single) == std::vector<std::string>{"gerschgorin", "h2"});
    for (const auto& r : single) CHECK(r.satisfied);
    const auto rel = evaluate_criteria(Geometry::rel_flat2(1.0), pair(0.0, 0.0, 3.0));
    CHECK(ids(rel) == std::vector<std::string>{"gerschgorin", "cassini", "rel_flat2"});
    CHECK(rel[2].satisfied);
    for (const auto& r : evaluate_criteria(Geometry::flat3(), Configuration::collinear({1, 2, 1.5}, 2.0)))
        CHECK(r.satisfied == holds(r.lhs, r.rhs, r.relation));
    CHECK_THROWS_AS(evaluate_criteria(Geometry::flat3(), pair(1, 1, 0.0)), std::invalid_argument);
}
