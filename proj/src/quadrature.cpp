#include "deltaspec/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace deltaspec {
namespace {

// Gauss–Kronrod 10/21 nodes and weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// QUADPACK-style error estimate for one GK21 panel.
Segment gk21(const Integrand& f, double a, double b, std::size_t& evals) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resg = 0.0;
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    evals += 21;
    const double reskh = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double absh = std::abs(half);
    resk *= half;
    resabs *= absh;
    resasc *= absh;
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    if (resabs > tiny / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    if (!std::isfinite(resk)) {
        err = std::numeric_limits<double>::infinity();
    }
    return {a, b, resk, err};
}

// Global adaptive bisection over a set of starting panels of a smooth
// integrand g on [0, 1]-type mapped coordinates.
QuadratureResult refine(const Integrand& g, const std::vector<double>& breaks,
                        const QuadratureOptions& opts) {
    std::size_t evals = 0;
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] <= breaks[i]) continue;
        Segment s = gk21(g, breaks[i], breaks[i + 1], evals);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    std::size_t count = heap.size();
    while (!heap.empty() && total_err > tolerance()) {
        if (count >= opts.max_subintervals || !std::isfinite(total_err)) {
            QuadratureResult partial{total, total_err, evals};
            throw QuadratureError("quadrature did not converge: error estimate " +
                                      std::to_string(total_err) + " for value " +
                                      std::to_string(total),
                                  partial);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in floating point; accept it.
            total_err -= worst.error;
            worst.error = 0.0;
            heap.push(worst);
            if (heap.top().error == 0.0) break;
            continue;
        }
        Segment left = gk21(g, worst.a, mid, evals);
        Segment right = gk21(g, mid, worst.b, evals);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Recompute sums to shed accumulated rounding from incremental updates.
    double value = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, evals};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts) {
    if (a == b) return {0.0, 0.0, 1};
    if (b < a) {
        QuadratureResult r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    return refine(f, {a, 0.5 * (a + b), b}, opts);
}

QuadratureResult integrate_semiinfinite(const Integrand& f, double lower,
                                        SemiInfiniteHints hints,
                                        const QuadratureOptions& opts) {
    if (!(hints.decay_rate > 0.0) || !std::isfinite(hints.decay_rate)) {
        throw std::invalid_argument("integrate_semiinfinite: decay_rate must be positive");
    }
    if (hints.singularity_power < 0.0 || hints.singularity_power >= 1.0) {
        throw std::invalid_argument("integrate_semiinfinite: singularity_power must be in [0,1)");
    }
    const double scale = 1.0 / hints.decay_rate;
    // Near panel: t = lower + scale * y^q, y in [0,1], q = 1/(1-p).
    const double q = 1.0 / (1.0 - hints.singularity_power);
    // Middle panels [scale, 64 scale] in one coordinate x in [1, 64];
    // tail t = lower + 64 scale + scale * w/(1-w), w in [0,1).
    constexpr double kMid = 64.0;
    const Integrand mapped = [&](double x) -> double {
        if (x <= 1.0) {
            if (x <= 0.0) return 0.0;
            const double yq = std::pow(x, q);
            const double jac = scale * q * yq / x;
            return f(lower + scale * yq) * jac;
        }
        if (x <= 2.0) {
            // Geometric middle range: t = lower + scale * 64^(x-1).
            const double tau = scale * std::pow(kMid, x - 1.0);
            return f(lower + tau) * tau * std::log(kMid);
        }
        const double w = x - 2.0;
        if (w >= 1.0) return 0.0;
        const double one_minus = 1.0 - w;
        const double t = lower + kMid * scale + scale * w / one_minus;
        const double val = f(t);
        if (val == 0.0) return 0.0;
        return val * scale / (one_minus * one_minus);
    };
    std::vector<double> breaks = {0.0, 0.25, 0.5, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0};
    return refine(mapped, breaks, opts);
}

}  // namespace deltaspec
