#include "deltaspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace deltaspec {

namespace {

Matrix phi_at(const Geometry& geom, const Configuration& cfg, double p, const SpectrumOptions& opts) {
    return principal_matrix(geom, cfg, p, opts.principal).entries;
}

// Every branch increases in x, where x = ν (non-relativistic) or x = −E.
double to_param(const Geometry& geom, double x) { return geom.relativistic() ? -x : x; }

EigenBranches eigen_at_x(const Geometry& geom, const Configuration& cfg, double x, const SpectrumOptions& opts) {
    return symmetric_eigen(phi_at(geom, cfg, to_param(geom, x), opts));
}

struct XWindow {
    double lo;
    double hi;
};

XWindow x_window(const Geometry& geom, const SearchWindow& w) {
    if (geom.relativistic()) return {-w.hi, -w.lo};
    return {w.lo, w.hi};
}

double bisect_branch(const Geometry& geom, const Configuration& cfg, std::size_t k, double lo, double hi,
                     const SpectrumOptions& opts) {
    // branch k negative at lo, non-negative at hi
    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double w = eigen_at_x(geom, cfg, mid, opts).values[k];
        (w < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double scale_of(const Geometry& geom, const Configuration& cfg) { return std::max(cfg.max_mu(), geom.kappa()); }

// Branches at the lower x edge: negative ones carry a root unless they are
// within the threshold of zero (a root sitting on the edge).
struct EdgeScan {
    std::vector<double> values;
    double threshold;
};

EdgeScan edge_scan(const Geometry& geom, const Configuration& cfg, double x_lo, const SpectrumOptions& opts) {
    const Matrix phi = phi_at(geom, cfg, to_param(geom, x_lo), opts);
    return {symmetric_eigen(phi).values, opts.multiplicity_threshold * phi.frobenius()};
}

void fix_sign(std::vector<double>& v) {
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    double flip = sum < 0.0 ? -1.0 : 1.0;
    if (std::abs(sum) <= 1e-12) {
        auto it = std::find_if(v.begin(), v.end(), [](double a) { return std::abs(a) > 1e-12; });
        if (it != v.end() && *it < 0.0) flip = -1.0;
    }
    for (double& a : v) a *= flip;
}

}  // namespace

std::vector<EigenBranches> eigenvalue_branches(const Geometry& geom, const Configuration& cfg,
                                               std::span<const double> grid, const SpectrumOptions& opts) {
    require_valid(cfg, geom);
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const bool ordered = geom.relativistic() ? grid[g] < grid[g - 1] : grid[g] > grid[g - 1];
        if (!ordered) {
            throw std::invalid_argument(geom.relativistic() ? "eigenvalue_branches: energy grid must descend"
                                                            : "eigenvalue_branches: nu grid must ascend");
        }
    }
    std::vector<EigenBranches> out;
    out.reserve(grid.size());
    for (double p : grid) out.push_back(symmetric_eigen(phi_at(geom, cfg, p, opts)));
    for (std::size_t g = 1; g < out.size(); ++g) {
        for (std::size_t k = 0; k < cfg.size(); ++k) {
            const double prev = out[g - 1].values[k];
            const double cur = out[g].values[k];
            if (cur < prev - 1e-9 * std::max(1.0, std::abs(prev))) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "eigenvalue_branches: branch " << k << " drops from " << prev << " at " << grid[g - 1]
                    << " to " << cur << " at " << grid[g];
                throw MonotonicityError(msg.str());
            }
        }
    }
    return out;
}

double reference_norm(const Geometry& geom, const Configuration& cfg, double param, const SpectrumOptions& opts) {
    const Matrix phi = phi_at(geom, cfg, param, opts);
    const Matrix deriv = principal_matrix_derivative(geom, cfg, param, opts.principal);
    // ν ∂Φ/∂ν = 2ν² (−∂Φ/∂z);  (m − E)(−∂Φ/∂E)
    const double factor = geom.relativistic() ? geom.mass() - param : 2.0 * param * param;
    return std::max(phi.frobenius(), factor * deriv.frobenius());
}

SearchWindow search_window(const Geometry& geom, const Configuration& cfg, const SpectrumOptions& opts) {
    require_valid(cfg, geom);
    if (geom.relativistic()) {
        const double m = geom.mass();
        const double margin = std::max(opts.tol, opts.window_margin * m);
        return {-m + margin, m - margin};
    }
    const double scale = scale_of(geom, cfg);
    double hi = scale;
    for (int i = 0; i <= opts.max_bracket_growth; ++i) {
        if (symmetric_eigen(phi_at(geom, cfg, hi, opts)).values.front() > 0.0) return {1e-8 * scale, hi};
        hi *= 2.0;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "search_window: lowest branch still non-positive at nu = " << hi / 2.0 << " after "
        << opts.max_bracket_growth << " doublings from " << scale;
    throw BracketError(msg.str());
}

std::vector<BoundState> find_bound_states(const Geometry& geom, const Configuration& cfg,
                                          const SpectrumOptions& opts) {
    const XWindow win = x_window(geom, search_window(geom, cfg, opts));
    const std::size_t n = cfg.size();
    const EdgeScan edge = edge_scan(geom, cfg, win.lo, opts);
    const std::vector<double> top = eigen_at_x(geom, cfg, win.hi, opts).values;

    struct Root {
        double x;
        std::size_t branch;
    };
    std::vector<Root> roots;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(edge.values[k] < -edge.threshold) || top[k] < 0.0) continue;
        roots.push_back({bisect_branch(geom, cfg, k, win.lo, win.hi, opts), k});
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });

    std::vector<BoundState> states;
    std::size_t i = 0;
    while (i < roots.size()) {
        const double x = roots[i].x;
        const double param = to_param(geom, x);
        const Matrix phi = phi_at(geom, cfg, param, opts);
        const EigenBranches eig = symmetric_eigen(phi);
        const double ref = reference_norm(geom, cfg, param, opts);
        const double thr = opts.multiplicity_threshold * ref;

        // Later roots join this state if they coincide within 10·tol or their
        // branch is already numerically null here.
        std::vector<std::size_t> group{roots[i].branch};
        std::size_t j = i + 1;
        while (j < roots.size() &&
               (roots[j].x - x <= 10.0 * opts.tol || std::abs(eig.values[roots[j].branch]) <= thr)) {
            group.push_back(roots[j].branch);
            ++j;
        }
        i = j;

        BoundState st;
        st.location = param;
        st.energy = geom.relativistic() ? param : -param * param;
        st.multiplicity = group.size();
        std::sort(group.begin(), group.end());
        for (std::size_t b : group) st.amplitudes.push_back(eig.vector(b));
        fix_sign(st.amplitudes.front());

        const Matrix deriv = principal_matrix_derivative(geom, cfg, param, opts.principal);
        const std::vector<double>& a = st.amplitudes.front();
        double bracket = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) bracket += a[r] * deriv(r, c) * a[c];
        if (!(bracket > 0.0)) {
            throw std::logic_error("find_bound_states: non-positive normalization bracket " + std::to_string(bracket));
        }
        st.normalization = 1.0 / std::sqrt(bracket);

        double det = 1.0;
        for (double w : eig.values) det *= w;
        st.det_abs = std::abs(det);
        st.reference_norm = ref;
        states.push_back(std::move(st));
    }
    std::sort(states.begin(), states.end(),
              [](const BoundState& a, const BoundState& b) { return a.energy < b.energy; });
    return states;
}

std::size_t count_bound_states(const Geometry& geom, const Configuration& cfg, const SpectrumOptions& opts) {
    std::size_t from_roots = 0;
    for (const BoundState& s : find_bound_states(geom, cfg, opts)) from_roots += s.multiplicity;

    const XWindow win = x_window(geom, search_window(geom, cfg, opts));
    const EdgeScan edge = edge_scan(geom, cfg, win.lo, opts);
    const std::vector<double> top = eigen_at_x(geom, cfg, win.hi, opts).values;
    const auto below = [&](const std::vector<double>& w, double thr) {
        return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [&](double v) { return v < thr; }));
    };
    const std::size_t from_signs = below(edge.values, -edge.threshold) - below(top, 0.0);
    if (from_roots != from_signs) {
        throw std::logic_error("count_bound_states: root search found " + std::to_string(from_roots) +
                               " states, branch signs give " + std::to_string(from_signs));
    }
    return from_roots;
}

std::size_t count_states_below(const Geometry& geom, const Configuration& cfg, double nu0,
                               const SpectrumOptions& opts) {
    if (geom.relativistic()) throw std::invalid_argument("count_states_below: non-relativistic geometries only");
    if (!(nu0 >= 0.0)) throw std::domain_error("count_states_below: nu0 must be non-negative");
    const double nu = nu0 > 0.0 ? nu0 : search_window(geom, cfg, opts).lo;
    const Matrix phi = phi_at(geom, cfg, nu, opts);
    const double thr = nu0 > 0.0 ? 0.0 : opts.multiplicity_threshold * phi.frobenius();
    const std::vector<double> w = symmetric_eigen(phi).values;
    return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [&](double v) { return v < -thr; }));
}

std::size_t marginal_branches(const Geometry& geom, const Configuration& cfg, const SpectrumOptions& opts) {
    const XWindow win = x_window(geom, search_window(geom, cfg, opts));
    const EdgeScan edge = edge_scan(geom, cfg, win.lo, opts);
    return static_cast<std::size_t>(std::count_if(edge.values.begin(), edge.values.end(),
                                                  [&](double v) { return std::abs(v) <= edge.threshold; }));
}

double eigenfunction(const Geometry& geom, const Configuration& cfg, const BoundState& state,
                     std::span<const double> dists_to_centers, const SpectrumOptions& opts) {
    if (geom.relativistic()) throw std::invalid_argument("eigenfunction: non-relativistic geometries only");
    if (dists_to_centers.size() != cfg.size())
        throw std::invalid_argument("eigenfunction: one distance per center required");
    if (state.amplitudes.empty()) throw std::invalid_argument("eigenfunction: state has no amplitudes");
    const std::vector<double>& a = state.amplitudes.front();
    const Matrix deriv = principal_matrix_derivative(geom, cfg, state.location, opts.principal);
    double bracket = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < a.size(); ++c) bracket += a[r] * deriv(r, c) * a[c];
    if (!(bracket > 0.0)) throw std::logic_error("eigenfunction: non-positive normalization bracket");
    double spatial = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(dists_to_centers[i] > 0.0)) throw std::domain_error("eigenfunction: distances must be positive");
        spatial += a[i] * resolvent_kernel(geom, dists_to_centers[i], state.location, opts.principal);
    }
    return spatial / std::sqrt(bracket);
}

}  // namespace deltaspec
