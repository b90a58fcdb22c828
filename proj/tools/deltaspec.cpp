// deltaspec: bound states and counting criteria for point interactions.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "deltaspec/config_io.hpp"
#include "deltaspec/criteria.hpp"
#include "deltaspec/geometry.hpp"
#include "deltaspec/principal.hpp"
#include "deltaspec/spectrum.hpp"

using nlohmann::json;
using namespace deltaspec;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Bad input detected before any numerics ran.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Inputs {
    std::string geometry;
    double kappa = 1.0;
    double mass = 1.0;
    std::vector<double> mu;
    std::optional<double> dist_line;
    std::string dist_matrix;
    std::optional<std::size_t> n;
    std::string config;
    std::string format = "json";
    std::string output;
    double tol = 1e-12;
    std::string h2_index = "shifted";
};

void add_problem_options(CLI::App* sub, Inputs& in) {
    sub->add_option("--geometry", in.geometry, "flat2, flat3, h2, h3, relflat2 or relh2");
    sub->add_option("--kappa", in.kappa, "curvature scale of hyperbolic geometries");
    sub->add_option("--m", in.mass, "rest mass of relativistic geometries");
    sub->add_option("--mu", in.mu, "binding parameters, comma separated")->delimiter(',');
    sub->add_option("--dist-line,--d", in.dist_line, "collinear centers with this spacing");
    sub->add_option("--dist-matrix", in.dist_matrix, "CSV file with the distance matrix");
    sub->add_option("--n", in.n, "number of centers (a single --mu is repeated)");
    sub->add_option("--config", in.config, "JSON configuration file");
    sub->add_option("--format", in.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", in.output, "output file (default stdout)");
    sub->add_option("--tol", in.tol, "bisection tolerance");
    sub->add_option("--h2-index", in.h2_index, "Legendre index convention for h2")
        ->check(CLI::IsMember({"shifted", "printed"}));
}

PrincipalOptions principal_options(const Inputs& in) {
    return {in.h2_index == "printed" ? H2Index::Printed : H2Index::Shifted};
}

SpectrumOptions spectrum_options(const Inputs& in) {
    SpectrumOptions o;
    o.tol = in.tol;
    o.principal = principal_options(in);
    return o;
}

Problem load_problem(const Inputs& in) {
    Problem p{Geometry::flat3(), {}};
    try {
        if (!in.config.empty()) {
            std::ifstream f(in.config);
            if (!f) throw ValidationError("cannot open config file " + in.config);
            json j;
            try {
                j = json::parse(f);
            } catch (const json::exception& e) {
                throw ValidationError(std::string("config file is not valid JSON: ") + e.what());
            }
            p = problem_from_json(j);
        } else {
            if (in.geometry.empty()) throw ValidationError("--geometry or --config is required");
            if (in.mu.empty()) throw ValidationError("--mu is required");
            p.geometry = Geometry::from_name(in.geometry, in.kappa, in.mass);
            std::vector<double> mu = in.mu;
            if (in.n) {
                if (*in.n == 0) throw ValidationError("--n must be positive");
                if (mu.size() == 1) mu.assign(*in.n, mu.front());
                if (mu.size() != *in.n) throw ValidationError("--n does not match the number of --mu values");
            }
            if (in.dist_line && !in.dist_matrix.empty())
                throw ValidationError("--dist-line and --dist-matrix are exclusive");
            if (!in.dist_matrix.empty()) {
                std::ifstream f(in.dist_matrix);
                if (!f) throw ValidationError("cannot open distance matrix " + in.dist_matrix);
                p.config.mu = std::move(mu);
                p.config.dist = read_distance_csv(f);
            } else if (in.dist_line) {
                p.config = Configuration::collinear(std::move(mu), *in.dist_line);
            } else {
                if (mu.size() != 1) throw ValidationError("several centers need --dist-line or --dist-matrix");
                p.config = Configuration::collinear(std::move(mu), 1.0);
            }
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    const std::vector<Violation> bad = validate_configuration(p.config, p.geometry);
    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const Violation& v : bad) msg += "\n  " + std::string(to_string(v.code)) + ": " + v.message;
        throw ValidationError(msg);
    }
    return p;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const Inputs& in, const std::string& text) {
    if (in.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(in.output);
    if (!f) throw ValidationError("cannot write " + in.output);
    f << text;
}

json report_json(const CriterionReport& r) {
    json j{{"id", r.id},
           {"regime", r.regime},
           {"lhs", r.lhs},
           {"rhs", r.rhs},
           {"relation", r.relation == Relation::Less ? "<" : ">"},
           {"satisfied", r.satisfied},
           {"witness", nullptr},
           {"predicted_count", nullptr}};
    if (r.witness) j["witness"] = *r.witness;
    if (r.predicted_count) j["predicted_count"] = *r.predicted_count;
    if (r.gerschgorin_satisfied) j["gerschgorin_satisfied"] = *r.gerschgorin_satisfied;
    return j;
}

// Location of the ground state: largest ν, or lowest E.
std::optional<double> ground_location(const std::vector<BoundState>& states) {
    if (states.empty()) return std::nullopt;
    return states.front().location;
}

int run_spectrum(const Inputs& in) {
    const Problem p = load_problem(in);
    const SpectrumOptions opts = spectrum_options(in);
    const std::vector<BoundState> states = find_bound_states(p.geometry, p.config, opts);
    const std::size_t count = count_bound_states(p.geometry, p.config, opts);
    const std::size_t marginal = marginal_branches(p.geometry, p.config, opts);
    const SearchWindow win = search_window(p.geometry, p.config, opts);
    const std::size_t n = p.config.size();

    if (in.format == "csv") {
        std::ostringstream out;
        out << "index,location,energy,multiplicity,normalization,det_abs,reference_norm\n";
        for (std::size_t k = 0; k < states.size(); ++k) {
            const BoundState& s = states[k];
            out << k << ',' << num(s.location) << ',' << num(s.energy) << ',' << s.multiplicity << ','
                << num(s.normalization) << ',' << num(s.det_abs) << ',' << num(s.reference_norm) << '\n';
        }
        emit(in, out.str());
        return 0;
    }
    json js = json::array();
    for (const BoundState& s : states) {
        const double bound = 1e-9 * std::pow(s.reference_norm, static_cast<double>(n));
        js.push_back({{"location", s.location},
                      {"energy", s.energy},
                      {"multiplicity", s.multiplicity},
                      {"amplitudes", s.amplitudes},
                      {"normalization", s.normalization},
                      {"det_abs", s.det_abs},
                      {"reference_norm", s.reference_norm},
                      {"det_ok", s.det_abs <= bound}});
    }
    const PrincipalOptions popts = principal_options(in);
    const auto values_at = [&](double x) {
        return symmetric_eigen(principal_matrix(p.geometry, p.config, x, popts).entries).values;
    };
    json out{{"command", "spectrum"},
             {"problem", problem_to_json(p)},
             {"count", count},
             {"marginal", marginal},
             {"states", js},
             {"branches", {{"window", {win.lo, win.hi}}, {"at_lo", values_at(win.lo)}, {"at_hi", values_at(win.hi)}}}};
    emit(in, out.dump(2) + "\n");
    return 0;
}

int run_criteria(const Inputs& in, const std::string& only, bool verify) {
    const Problem p = load_problem(in);
    std::vector<CriterionReport> reports = evaluate_criteria(p.geometry, p.config, principal_options(in));
    if (!only.empty()) {
        auto it = std::find_if(reports.begin(), reports.end(), [&](const CriterionReport& r) { return r.id == only; });
        if (it == reports.end()) {
            throw ValidationError("criterion '" + only + "' does not apply to geometry " + p.geometry.name() +
                                  " with " + std::to_string(p.config.size()) + " centers");
        }
        reports = {*it};
    }
    std::optional<std::size_t> exact;
    bool agree = true;
    if (verify) {
        exact = count_bound_states(p.geometry, p.config, spectrum_options(in));
        for (const CriterionReport& r : reports)
            if (r.predicted_count && *r.predicted_count != *exact) agree = false;
    }
    if (in.format == "csv") {
        std::ostringstream out;
        out << "id,regime,lhs,rhs,relation,satisfied,witness,predicted_count\n";
        for (const CriterionReport& r : reports) {
            out << r.id << ',' << r.regime << ',' << num(r.lhs) << ',' << num(r.rhs) << ','
                << (r.relation == Relation::Less ? "<" : ">") << ',' << (r.satisfied ? 1 : 0) << ','
                << (r.witness ? num(*r.witness) : "") << ','
                << (r.predicted_count ? std::to_string(*r.predicted_count) : "") << '\n';
        }
        if (exact) out << "# exact_count=" << *exact << " agreement=" << (agree ? "true" : "false") << '\n';
        emit(in, out.str());
        return 0;
    }
    json js = json::array();
    for (const CriterionReport& r : reports) js.push_back(report_json(r));
    json out{{"command", "criteria"}, {"problem", problem_to_json(p)}, {"criteria", js}};
    if (exact) out["verify"] = {{"exact_count", *exact}, {"agreement", agree}};
    emit(in, out.dump(2) + "\n");
    return 0;
}

struct SweepRange {
    double start;
    double stop;
    std::size_t steps;
};

SweepRange parse_range(const std::string& text) {
    SweepRange r{};
    char c1 = 0;
    char c2 = 0;
    long long steps = 0;
    std::istringstream ss(text);
    if (!(ss >> r.start >> c1 >> r.stop >> c2 >> steps) || c1 != ':' || c2 != ':' || !ss.eof())
        throw ValidationError("range must look like start:stop:steps, got '" + text + "'");
    if (steps <= 0) throw ValidationError("range needs at least one step");
    r.steps = static_cast<std::size_t>(steps);
    return r;
}

std::vector<double> range_points(const SweepRange& r, bool log_spaced) {
    if (log_spaced && !(r.start > 0.0 && r.stop > 0.0)) throw ValidationError("--log needs positive endpoints");
    std::vector<double> pts(r.steps);
    for (std::size_t k = 0; k < r.steps; ++k) {
        const double f = r.steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(r.steps - 1);
        pts[k] = log_spaced ? r.start * std::pow(r.stop / r.start, f) : r.start + (r.stop - r.start) * f;
    }
    return pts;
}

std::size_t thread_count(std::size_t work) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECTRA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v <= 0) throw ValidationError("SPECTRA_THREADS must be a positive integer");
        n = std::min(n, static_cast<std::size_t>(v));
    }
    return std::max<std::size_t>(1, std::min(n, work));
}

struct SweepRow {
    double param = 0.0;
    std::size_t count = 0;
    std::optional<double> ground;
    std::vector<bool> verdicts;
    std::string error;
    bool numerical = false;
};

int run_sweep(const Inputs& in, const std::string& axis, const std::string& range_text, bool log_spaced) {
    const std::vector<double> pts = range_points(parse_range(range_text), log_spaced);
    Inputs base_in = in;
    // the d axis supplies the spacing itself
    if (axis == "d" && !base_in.dist_line && base_in.dist_matrix.empty() && base_in.config.empty())
        base_in.dist_line = pts.front();
    const Problem base = load_problem(base_in);
    if (axis == "d" && base.config.size() < 2) throw ValidationError("sweeping d needs at least two centers");
    if (axis == "kappa" && !base.geometry.hyperbolic()) throw ValidationError("kappa sweep needs a hyperbolic geometry");
    if (axis == "m" && !base.geometry.relativistic()) throw ValidationError("m sweep needs a relativistic geometry");

    auto problem_at = [&](double v) {
        Problem p = base;
        const Geometry& g = base.geometry;
        if (axis == "d") {
            p.config = Configuration::collinear(base.config.mu, v);
        } else if (axis == "mu") {
            std::fill(p.config.mu.begin(), p.config.mu.end(), v);
        } else if (axis == "kappa") {
            p.geometry = Geometry::from_name(g.name(), v, g.mass());
        } else if (axis == "m") {
            p.geometry = Geometry::from_name(g.name(), g.kappa(), v);
        }
        require_valid(p.config, p.geometry);
        return p;
    };
    // Criterion ids are fixed by the geometry kind and N, so one row sets the header.
    std::vector<std::string> ids;
    for (const CriterionReport& r : evaluate_criteria(base.geometry, base.config, principal_options(in)))
        ids.push_back(r.id);

    const SpectrumOptions opts = spectrum_options(in);
    std::vector<SweepRow> rows(pts.size());
    auto compute = [&](std::size_t k) {
        SweepRow& row = rows[k];
        row.param = pts[k];
        try {
            Problem p = axis == "nu" ? base : problem_at(pts[k]);
            const std::vector<BoundState> states = find_bound_states(p.geometry, p.config, opts);
            row.ground = ground_location(states);
            std::vector<CriterionReport> reports;
            if (axis == "nu") {
                // Spectral parameter axis: states below the point, matrix criteria at it.
                const std::vector<double> w =
                    symmetric_eigen(principal_matrix(p.geometry, p.config, pts[k], opts.principal).entries).values;
                row.count = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](double x) { return x < 0.0; }));
                for (const CriterionReport& r : evaluate_criteria(p.geometry, p.config, opts.principal)) {
                    if (r.id == "gerschgorin")
                        reports.push_back(gerschgorin_condition(p.geometry, p.config, pts[k], opts.principal));
                    else if (r.id == "cassini")
                        reports.push_back(cassini_condition(p.geometry, p.config, pts[k], opts.principal));
                    else
                        reports.push_back(r);
                }
            } else {
                row.count = count_bound_states(p.geometry, p.config, opts);
                reports = evaluate_criteria(p.geometry, p.config, opts.principal);
            }
            for (const CriterionReport& r : reports) row.verdicts.push_back(r.satisfied);
        } catch (const std::invalid_argument& e) {
            row.error = e.what();
        } catch (const std::domain_error& e) {
            row.error = e.what();
        } catch (const std::exception& e) {
            row.error = e.what();
            row.numerical = true;
        }
    };

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = thread_count(pts.size());
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < pts.size(); k = next++) compute(k);
        });
    }
    for (std::thread& t : pool) t.join();

    for (const SweepRow& row : rows) {
        if (row.error.empty()) continue;
        const std::string msg = "sweep point " + num(row.param) + ": " + row.error;
        if (row.numerical) throw std::runtime_error(msg);
        throw ValidationError(msg);
    }

    if (in.format == "json") {
        json js = json::array();
        for (const SweepRow& row : rows) {
            json verdicts = json::object();
            for (std::size_t c = 0; c < ids.size(); ++c) verdicts[ids[c]] = static_cast<bool>(row.verdicts[c]);
            js.push_back({{"param", row.param},
                          {"count", row.count},
                          {"nu_max", row.ground ? json(*row.ground) : json(nullptr)},
                          {"verdicts", verdicts}});
        }
        json out{{"command", "sweep"}, {"axis", axis}, {"problem", problem_to_json(base)}, {"rows", js}};
        emit(in, out.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "param,count,nu_max";
    for (const std::string& id : ids) out << ',' << id;
    out << '\n';
    for (const SweepRow& row : rows) {
        out << num(row.param) << ',' << row.count << ',' << (row.ground ? num(*row.ground) : "");
        for (bool v : row.verdicts) out << ',' << (v ? 1 : 0);
        out << '\n';
    }
    emit(in, out.str());
    return 0;
}

int run_heatkernel(const Inputs& in, double d, double t) {
    if (in.geometry.empty()) throw ValidationError("--geometry is required");
    Geometry g = Geometry::flat3();
    try {
        g = Geometry::from_name(in.geometry, in.kappa, in.mass);
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    if (!(d >= 0.0)) throw ValidationError("--dist must be non-negative");
    if (!(t > 0.0)) throw ValidationError("--t must be positive");
    const HeatKernelValue k = heat_kernel(g, d, t);
    json out{{"command", "heatkernel"},
             {"geometry", g.name()},
             {"d", d},
             {"t", t},
             {"value", k.value},
             {"method", k.method == EvaluationMethod::ClosedForm ? "closed_form" : "quadrature"}};
    if (g.spatial().kind() == GeometryKind::Hyperbolic2) {
        out["upper_bound"] = heat_kernel_upper_h2(d, t, g.kappa());
        if (d == 0.0) out["lower_bound"] = heat_kernel_diag_lower_h2(t, g.kappa());
    }
    if (in.format == "csv") {
        emit(in, "d,t,value\n" + num(d) + ',' + num(t) + ',' + num(k.value) + '\n');
        return 0;
    }
    emit(in, out.dump(2) + "\n");
    return 0;
}

int run_resolvent(const Inputs& in, double nu, std::optional<double> d, const std::vector<double>& xd,
                  const std::vector<double>& yd) {
    const PrincipalOptions popts = principal_options(in);
    if (!(nu > 0.0)) throw ValidationError("--nu must be positive");
    if (d) {
        if (in.geometry.empty()) throw ValidationError("--geometry is required");
        const Geometry g = Geometry::from_name(in.geometry, in.kappa, in.mass);
        if (g.relativistic()) throw ValidationError("resolvent: non-relativistic geometries only");
        if (!(*d > 0.0)) throw ValidationError("--dist must be positive");
        const double r = resolvent_kernel(g, *d, nu, popts);
        if (in.format == "csv") {
            emit(in, "d,nu,value\n" + num(*d) + ',' + num(nu) + ',' + num(r) + '\n');
            return 0;
        }
        json out{{"command", "resolvent"}, {"geometry", g.name()}, {"d", *d}, {"nu", nu}, {"value", r}};
        emit(in, out.dump(2) + "\n");
        return 0;
    }
    const Problem p = load_problem(in);
    if (p.geometry.relativistic()) throw ValidationError("resolvent: non-relativistic geometries only");
    if (xd.size() != p.config.size() || yd.size() != p.config.size())
        throw ValidationError("--x-dists and --y-dists need one distance per center");
    for (double v : xd)
        if (!(v > 0.0)) throw ValidationError("distances to centers must be positive");
    for (double v : yd)
        if (!(v > 0.0)) throw ValidationError("distances to centers must be positive");
    const ResolventCorrection c = krein_correction(p.geometry, p.config, nu, xd, yd, popts);
    if (in.format == "csv") {
        emit(in, "nu,value,pole_proximity\n" + num(nu) + ',' + num(c.value) + ',' + num(c.pole_proximity) + '\n');
        return 0;
    }
    json out{{"command", "resolvent"},
             {"problem", problem_to_json(p)},
             {"nu", nu},
             {"value", c.value},
             {"pole_proximity", c.pole_proximity},
             {"near_pole", c.near_pole()}};
    emit(in, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states of point interactions on flat and hyperbolic spaces"};
    app.require_subcommand(1);
    Inputs in;

    auto* spectrum = app.add_subcommand("spectrum", "bound states, multiplicities and amplitudes");
    add_problem_options(spectrum, in);

    auto* criteria = app.add_subcommand("criteria", "sufficient conditions for N bound states");
    add_problem_options(criteria, in);
    std::string only;
    bool verify = false;
    criteria->add_option("--criterion", only, "evaluate one criterion id only");
    criteria->add_flag("--verify", verify, "also compute the exact count");

    auto* sweep = app.add_subcommand("sweep", "count and criterion verdicts along one parameter");
    add_problem_options(sweep, in);
    std::string axis;
    std::string range;
    bool log_spaced = false;
    sweep->add_option("--axis", axis, "d, mu, kappa, m or nu")
        ->required()
        ->check(CLI::IsMember({"d", "mu", "kappa", "m", "nu"}));
    sweep->add_option("--range", range, "start:stop:steps")->required();
    sweep->add_flag("--log", log_spaced, "geometric spacing");

    auto* heat = app.add_subcommand("heatkernel", "heat kernel at distance d and time t");
    heat->add_option("--geometry", in.geometry)->required();
    heat->add_option("--kappa", in.kappa);
    heat->add_option("--m", in.mass);
    heat->add_option("--format", in.format)->check(CLI::IsMember({"json", "csv"}));
    heat->add_option("--output,-o", in.output);
    double hd = 0.0;
    double ht = 1.0;
    heat->add_option("--dist", hd, "geodesic distance")->required();
    heat->add_option("--t", ht, "time")->required();

    auto* resolvent = app.add_subcommand("resolvent", "free resolvent kernel or its Krein correction");
    add_problem_options(resolvent, in);
    double nu = 0.0;
    std::optional<double> rd;
    std::vector<double> xd;
    std::vector<double> yd;
    resolvent->add_option("--nu", nu, "spectral parameter, z = -nu^2")->required();
    resolvent->add_option("--dist", rd, "free kernel at this distance");
    resolvent->add_option("--x-dists", xd, "d(x, a_i) for every center")->delimiter(',');
    resolvent->add_option("--y-dists", yd, "d(y, a_i) for every center")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*spectrum) return run_spectrum(in);
        if (*criteria) return run_criteria(in, only, verify);
        if (*sweep) return run_sweep(in, axis, range, log_spaced);
        if (*heat) return run_heatkernel(in, hd, ht);
        if (*resolvent) return run_resolvent(in, nu, rd, xd, yd);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitValidation;
}
