#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace deltaspec {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    std::size_t max_subintervals = 4000;
};

/// Thrown when the adaptive scheme exhausts its subinterval budget without
/// meeting the requested tolerance. Carries the best estimate obtained.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const QuadratureResult& partial() const noexcept { return partial_; }

private:
    QuadratureResult partial_;
};

using Integrand = std::function<double(double)>;

/// Adaptive 21-point Gauss–Kronrod over the finite interval [a, b].
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Shape information about an integrand on (lower, inf).
///
/// `decay_rate` is an exponential rate r such that |f(t)| falls off at least
/// like exp(-r t) beyond a few multiples of 1/r; it sets the panel length.
/// `singularity_power` p in [0, 1) states |f(t)| ~ (t - lower)^(-p) near the
/// lower endpoint; the first panel is then integrated in a variable that
/// removes the power.
struct SemiInfiniteHints {
    double decay_rate = 1.0;
    double singularity_power = 0.0;
};

/// Integral of f over (lower, inf). The range is split into a near panel of
/// length ~1/decay_rate, a geometric sequence of middle panels and a mapped
/// tail, all refined under one global error budget.
QuadratureResult integrate_semiinfinite(const Integrand& f, double lower,
                                        SemiInfiniteHints hints = {},
                                        const QuadratureOptions& opts = {});

}  // namespace deltaspec
