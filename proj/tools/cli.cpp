#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qes/determinant.hpp"
#include "qes/shooting.hpp"
#include "qes/solvers.hpp"
#include "qes/verify.hpp"
#include "qes/wedges.hpp"

namespace qes::cli {

using nlohmann::ordered_json;

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

bool is_flat(const ordered_json& j) {
    return std::none_of(j.begin(), j.end(), [](const ordered_json& e) { return e.is_structured(); });
}

void emit(const ordered_json& j, std::string& s, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent) + 2, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                s += "{}";
                return;
            }
            s += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) s += ",\n";
                first = false;
                s += inner + ordered_json(it.key()).dump() + ": ";
                emit(it.value(), s, indent + 2);
            }
            s += "\n" + pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                s += "[]";
                return;
            }
            if (is_flat(j)) {
                s += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) s += ", ";
                    emit(j[i], s, indent);
                }
                s += "]";
                return;
            }
            s += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) s += ",\n";
                s += inner;
                emit(j[i], s, indent + 2);
            }
            s += "\n" + pad + "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            const double x = j.get<double>();
            s += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            s += j.dump();
    }
}

struct SpecArgs {
    double alpha = 0;
    double beta = 0;
    int big_m = 1;
    int n_states = 1;
    int dimension = 3;
    int ell = 0;

    ModelSpec spec() const {
        ModelSpec s;
        s.alpha = alpha;
        s.beta = beta;
        s.big_m = big_m;
        s.n_states = n_states;
        s.dimension = dimension;
        s.ell = ell;
        s.validate();
        return s;
    }
};

struct Tolerances {
    double real = 1e-8;
    double rank = 1e-8;
    double residual = 1e-10;

    SolverOptions options() const {
        if (!(real > 0) || !(rank > 0) || !(residual > 0)) throw UsageError("tolerances must be positive");
        SolverOptions o;
        o.real_tolerance = real;
        o.rank_tolerance = rank;
        o.residual_tolerance = residual;
        o.root.real_tolerance = real;
        return o;
    }
};

void add_spec(CLI::App* app, SpecArgs& a, bool with_m) {
    app->add_option("--alpha", a.alpha, "quartic ansatz parameter alpha")->capture_default_str();
    app->add_option("--beta", a.beta, "quadratic ansatz parameter beta")->capture_default_str();
    if (with_m) app->add_option("-M,--big-m", a.big_m, "M = L + 1/2")->capture_default_str();
    app->add_option("-N,--n-states", a.n_states, "number of series terms N")->capture_default_str();
    app->add_option("--dimension", a.dimension, "spatial dimension D")->capture_default_str();
    app->add_option("--ell", a.ell, "partial wave")->capture_default_str();
}

void add_tolerances(CLI::App* app, Tolerances& t) {
    app->add_option("--real-tol", t.real, "imaginary-part threshold for real roots")->capture_default_str();
    app->add_option("--rank-tol", t.rank, "relative singular-value threshold")->capture_default_str();
    app->add_option("--residual-tol", t.residual, "recurrence residual for validation")->capture_default_str();
}

ordered_json spec_json(const ModelSpec& s) {
    ordered_json j;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["M"] = s.big_m;
    j["N"] = s.n_states;
    j["dimension"] = s.dimension;
    j["ell"] = s.ell;
    return j;
}

ordered_json tolerance_json(const SolverOptions& o) {
    ordered_json j;
    j["real"] = o.real_tolerance;
    j["rank"] = o.rank_tolerance;
    j["residual"] = o.residual_tolerance;
    return j;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json solution_json(const ModelSpec& spec, double energy, double coupling, const Eigen::VectorXd& h,
                           double residual, bool validated) {
    ordered_json j;
    j["E"] = energy;
    j["d"] = coupling;
    j["F"] = shifted_coupling(coupling, spec);
    j["h"] = vector_json(h);
    j["residual"] = residual;
    j["validated"] = validated;
    return j;
}

ordered_json multiplet_document(const ModelSpec& spec, const Multiplet& m, const SolverOptions& o) {
    ordered_json doc;
    doc["spec"] = spec_json(spec);
    doc["solutions"] = ordered_json::array();
    for (const auto& e : m.entries)
        doc["solutions"].push_back(
            solution_json(spec, e.energy, e.coupling, e.h, e.recurrence_residual, e.validated));
    doc["tolerances"] = tolerance_json(o);
    doc["version"] = version;
    return doc;
}

ordered_json sector_json(const Sector& s) {
    return ordered_json::array({s.lo, s.hi});
}

ordered_json pair_json(const WedgePair& p) {
    ordered_json j;
    j["j"] = p.index;
    j["left"] = sector_json(p.left);
    j["right"] = sector_json(p.right);
    return j;
}

class Output {
public:
    Output(std::ostream& out, std::string path) : out_(out), path_(std::move(path)) {}

    void write(const std::string& text) const {
        if (path_.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(path_);
        if (!f) throw UsageError("cannot open output file " + path_);
        f << text;
    }

private:
    std::ostream& out_;
    std::string path_;
};

struct SweepRow {
    double alpha, beta;
    int n_real = 0;
    int validated = 0;
};

SweepRow sweep_point(const SpecArgs& base, const SolverOptions& o, double alpha, double beta) {
    SpecArgs a = base;
    a.alpha = alpha;
    a.beta = beta;
    const ModelSpec spec = a.spec();
    SweepRow row{alpha, beta};
    if (spec.big_m == 1) {
        const auto r = solve_sturmian(spec, o);
        row.n_real = static_cast<int>(r.d_values.size());
        row.validated = static_cast<int>(sturmian_multiplet(spec, r, o).entries.size());
    } else {
        const auto det = energy_polynomial_m2(spec);
        if (det.degree() >= 1) row.n_real = static_cast<int>(real_filter(roots(det, o.root), o.real_tolerance).size());
        row.validated = static_cast<int>(solve_energies_m2(spec, o).entries.size());
    }
    return row;
}

double grid_value(double lo, double hi, int steps, int i) {
    return steps == 1 ? lo : lo + i * (hi - lo) / (steps - 1);
}

}  // namespace

std::string canonical_dump(const ordered_json& doc) {
    std::string s;
    emit(doc, s, 0);
    s += "\n";
    return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact multiplets of the spiked decadic oscillator", "qes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", version);

    std::string out_path;
    app.add_option("-o,--out", out_path, "write output to PATH instead of standard output");
    Tolerances tol;
    std::function<int()> action;

    // sturmian
    SpecArgs st;
    auto* sturmian = app.add_subcommand("sturmian", "couplings d at E = 0 (M = 1)");
    add_spec(sturmian, st, false);
    add_tolerances(sturmian, tol);
    sturmian->callback([&] {
        action = [&] {
            const ModelSpec spec = st.spec();
            const auto o = tol.options();
            const auto r = solve_sturmian(spec, o);
            const auto m = sturmian_multiplet(spec, r, o);
            Output(out, out_path).write(canonical_dump(multiplet_document(spec, m, o)));
            return m.entries.empty() ? 1 : 0;
        };
    });

    // energies
    SpecArgs en;
    en.big_m = 2;
    bool keep_rejected = false;
    auto* energies = app.add_subcommand("energies", "energy multiplet with d = E^2/4 (M = 2)");
    add_spec(energies, en, true);
    add_tolerances(energies, tol);
    energies->add_flag("--keep-rejected", keep_rejected, "also emit roots that fail the rank test");
    energies->callback([&] {
        action = [&] {
            const ModelSpec spec = en.spec();
            auto o = tol.options();
            o.keep_rejected = keep_rejected;
            const auto m = solve_energies_m2(spec, o);
            Output(out, out_path).write(canonical_dump(multiplet_document(spec, m, o)));
            return m.entries.empty() ? 1 : 0;
        };
    });

    // coupled
    SpecArgs co;
    co.big_m = 3;
    auto* coupled = app.add_subcommand("coupled", "joint solutions (E, d) of both determinants (M >= 2)");
    add_spec(coupled, co, true);
    add_tolerances(coupled, tol);
    coupled->callback([&] {
        action = [&] {
            const ModelSpec spec = co.spec();
            const auto o = tol.options();
            const auto sol = solve_coupled(spec, o);
            Multiplet m;
            for (const auto& p : sol.pairs) {
                MultipletEntry e;
                e.energy = p.energy;
                e.coupling = p.coupling;
                e.h = p.h;
                e.recurrence_residual = recurrence_residual(spec, p.energy, p.coupling, p.h);
                e.validated = true;
                m.entries.push_back(e);
            }
            Output(out, out_path).write(canonical_dump(multiplet_document(spec, m, o)));
            return m.entries.empty() ? 1 : 0;
        };
    });

    // wedges
    int degree = 3;
    double delta = 0;
    auto* wedges = app.add_subcommand("wedges", "decay sectors and their PT pairing");
    auto* degree_opt = wedges->add_option("--degree", degree, "z in exp(-x^(2z)/(2z))")->capture_default_str();
    auto* delta_opt = wedges->add_option("--delta", delta, "delta of the x^2 (ix)^(2 delta) family");
    degree_opt->excludes(delta_opt);
    wedges->callback([&] {
        action = [&] {
            ordered_json doc;
            if (delta_opt->count() > 0) {
                const auto b = bender_sectors(delta);
                doc["delta"] = delta;
                doc["half_width"] = b.half_width;
                doc["first"] = pair_json(b.first);
                doc["second"] = pair_json(b.second);
                doc["second_compatible_with_real_line"] = b.second_compatible_with_real_line;
            } else {
                if (degree < 1) throw UsageError("--degree must be >= 1");
                doc["degree"] = degree;
                doc["sectors"] = ordered_json::array();
                for (const auto& s : sectors_for_degree(degree)) doc["sectors"].push_back(sector_json(s));
                const auto pairing = pt_pairs(degree);
                doc["pairs"] = ordered_json::array();
                for (const auto& p : pairing.pairs) doc["pairs"].push_back(pair_json(p));
                doc["self_symmetric"] = ordered_json::array();
                for (const auto& s : pairing.self_symmetric) doc["self_symmetric"].push_back(sector_json(s));
            }
            doc["version"] = version;
            Output(out, out_path).write(canonical_dump(doc));
            return 0;
        };
    });

    // shoot
    SpecArgs sh;
    sh.big_m = 2;
    double coupling = 0, guess = 0;
    Contour contour;
    ShootingOptions shoot_options;
    auto* shoot = app.add_subcommand("shoot", "eigenvalue by Wronskian matching along r = x - i epsilon");
    add_spec(shoot, sh, true);
    shoot->add_option("--d", coupling, "quadratic coupling d (held fixed)")->required();
    shoot->add_option("--guess", guess, "starting energy")->required();
    shoot->add_option("--epsilon", contour.epsilon, "downward shift of the contour")->capture_default_str();
    shoot->add_option("--x-max", contour.x_max, "half-length of the contour")->capture_default_str();
    shoot->add_option("--match-offset", contour.match_offset, "matching point offset")->capture_default_str();
    shoot->add_option("--window", shoot_options.window, "largest allowed |E - guess|")->capture_default_str();
    shoot->add_option("--max-iter", shoot_options.max_iterations, "secant iterations")->capture_default_str();
    shoot->add_option("--digits", shoot_options.integration.digits,
                      "decimal digits for Taylor stepping; 0 integrates in double precision")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    shoot->callback([&] {
        action = [&] {
            const ModelSpec spec = sh.spec();
            contour.validate();
            const auto r = find_eigenvalue(spec, coupling, guess, contour, shoot_options);
            ordered_json doc;
            doc["spec"] = spec_json(spec);
            doc["d"] = coupling;
            doc["contour"] = {{"epsilon", contour.epsilon}, {"x_max", contour.x_max},
                              {"match_offset", contour.match_offset}};
            doc["result"] = {{"E", r.energy}, {"wronskian_residual", r.wronskian_residual},
                             {"iterations", r.iterations}, {"converged", r.converged}};
            doc["version"] = version;
            Output(out, out_path).write(canonical_dump(doc));
            return r.converged ? 0 : 1;
        };
    });

    // verify
    SpecArgs ve;
    double v_energy = 0, v_coupling = 0;
    std::vector<double> v_h;
    auto* verify = app.add_subcommand("verify", "residual checks for a candidate (E, d, h)");
    verify->set_help_flag("--help", "print this help message and exit");
    add_spec(verify, ve, true);
    add_tolerances(verify, tol);
    verify->add_option("--E", v_energy, "energy")->required();
    verify->add_option("--d", v_coupling, "quadratic coupling")->required();
    verify->add_option("--h", v_h, "series coefficients h_0 .. h_{N-1}")->required();
    verify->callback([&] {
        action = [&] {
            const ModelSpec spec = ve.spec();
            const auto o = tol.options();
            if (static_cast<int>(v_h.size()) != spec.n_states) throw UsageError("--h needs exactly N values");
            const Eigen::VectorXd h = Eigen::Map<const Eigen::VectorXd>(v_h.data(), static_cast<Eigen::Index>(v_h.size()));
            const auto report = verify_solution(spec, v_energy, v_coupling, h, o.residual_tolerance);
            std::vector<Rational> hq;
            for (double x : v_h) hq.push_back(exact(x));
            const auto exact_res = ode_residual_poly(exact(spec), exact(v_energy), exact(v_coupling), hq);
            ordered_json doc;
            doc["spec"] = spec_json(spec);
            doc["E"] = v_energy;
            doc["d"] = v_coupling;
            doc["h"] = v_h;
            doc["recurrence_residual"] = report.recurrence_residual;
            doc["ode_residual_max_coeff"] = report.ode_residual_max_coeff;
            doc["ode_residual_exact_zero"] = exact_res.is_zero();
            doc["wedge_decay"] = ordered_json::array();
            for (const auto& [j, ok] : report.wedge_decay) doc["wedge_decay"].push_back({{"j", j}, {"decays", ok}});
            doc["passed"] = report.passed;
            doc["version"] = version;
            Output(out, out_path).write(canonical_dump(doc));
            return report.passed ? 0 : 1;
        };
    });

    // sweep
    SpecArgs sw;
    double a_min = -4, a_max = 4, b_min = -4, b_max = 4;
    int a_steps = 41, b_steps = 41;
    unsigned threads = 0;
    auto* sweep = app.add_subcommand("sweep", "count real solutions over an (alpha, beta) grid, CSV output");
    sweep->add_option("-M,--big-m", sw.big_m, "1 (couplings) or 2 (energies)")->capture_default_str();
    sweep->add_option("-N,--n-states", sw.n_states, "number of series terms N")->capture_default_str();
    sweep->add_option("--dimension", sw.dimension, "spatial dimension D")->capture_default_str();
    sweep->add_option("--ell", sw.ell, "partial wave")->capture_default_str();
    sweep->add_option("--alpha-min", a_min)->capture_default_str();
    sweep->add_option("--alpha-max", a_max)->capture_default_str();
    sweep->add_option("--alpha-steps", a_steps)->capture_default_str();
    sweep->add_option("--beta-min", b_min)->capture_default_str();
    sweep->add_option("--beta-max", b_max)->capture_default_str();
    sweep->add_option("--beta-steps", b_steps)->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->capture_default_str();
    add_tolerances(sweep, tol);
    sweep->callback([&] {
        action = [&] {
            if (sw.big_m != 1 && sw.big_m != 2) throw UsageError("sweep needs M = 1 or M = 2");
            if (a_steps < 1 || b_steps < 1) throw UsageError("grid steps must be >= 1");
            if (!std::isfinite(a_min) || !std::isfinite(a_max) || !std::isfinite(b_min) || !std::isfinite(b_max))
                throw UsageError("grid bounds must be finite");
            sw.spec();
            const auto o = tol.options();
            const std::size_t total = static_cast<std::size_t>(a_steps) * static_cast<std::size_t>(b_steps);
            std::vector<SweepRow> rows(total);
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto worker = [&] {
                for (std::size_t k = next++; k < total; k = next++) {
                    const int i = static_cast<int>(k / static_cast<std::size_t>(b_steps));
                    const int j = static_cast<int>(k % static_cast<std::size_t>(b_steps));
                    try {
                        rows[k] = sweep_point(sw, o, grid_value(a_min, a_max, a_steps, i),
                                              grid_value(b_min, b_max, b_steps, j));
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            };
            unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
            n = static_cast<unsigned>(std::min<std::size_t>(n, total));
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);

            std::ostringstream csv;
            csv << "alpha,beta,n_real,validated\n";
            char buf[128];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d,%d\n", r.alpha, r.beta, r.n_real, r.validated);
                csv << buf;
            }
            Output(out, out_path).write(csv.str());
            return 0;
        };
    });

    std::vector<const char*> argv{"qes"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    if (!action) {
        err << "error: no subcommand\n";
        return 2;
    }
    try {
        return action();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qes::cli
