#pragma once

namespace deltaspec {

/// Digamma ψ(x) for real x > 0 (recurrence up to x >= 10, then the
/// Bernoulli asymptotic series). Throws std::domain_error for x <= 0.
double digamma(double x);

/// Trigamma ψ'(x) for real x > 0.
double trigamma(double x);

/// Legendre function of the second kind Q_λ(x) for λ > -1 and x > 1, from
///   Q_λ(cosh a) = ∫_a^∞ e^{-(λ+1/2) r} / sqrt(2 cosh r - 2 cosh a) dr.
double legendre_q(double lambda, double x);

/// Same function parametrised by a = arccosh(x) > 0. Preferred when x is close
/// to 1, where forming cosh a loses the information in a.
double legendre_q_cosh(double lambda, double a);

/// Modified Bessel function of the second kind K_0 / K_1 at x > 0.
double bessel_k(int order, double x);

/// Scaled complementary error function e^{x²} erfc(x), finite for all x >= 0.
double erfcx(double x);

/// φ(x) = sqrt(y) e^{y} erfc(sqrt(y)), y = x²/κ² + 1/4; the function entering
/// the diagonal lower bound of the principal matrix on ℍ².
double erfc_scaled_phi(double x, double kappa);

}  // namespace deltaspec
