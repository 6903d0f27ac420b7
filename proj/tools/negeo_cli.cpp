// negeo command-line driver. Talks to the library exclusively through the
// C API in negeo/negeo.h.
//
// Exit codes: 0 success, 1 usage/validation, 2 numerical non-convergence,
// 3 I/O, 4 estimation error (degenerate data), 5 internal error.

#include "negeo/negeo.h"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kUsage = 1, kNonConvergence = 2, kIo = 3, kEstimation = 4, kInternal = 5 };

int exit_code(negeo_status s) {
    switch (s) {
        case NEGEO_OK: return kOk;
        case NEGEO_ERR_USAGE:
        case NEGEO_ERR_VALIDATION:
        case NEGEO_ERR_DOMAIN: return kUsage;
        case NEGEO_ERR_NONCONVERGENCE: return kNonConvergence;
        case NEGEO_ERR_IO: return kIo;
        case NEGEO_ERR_ESTIMATION: return kEstimation;
        case NEGEO_ERR_INTERNAL: return kInternal;
    }
    return kInternal;
}

// Carries an exit code out of a subcommand.
struct Failure {
    int code;
    std::string message;
};

void check(negeo_status s, const std::string& context) {
    if (s != NEGEO_OK) throw Failure{exit_code(s), context + ": " + negeo_last_error()};
}

[[noreturn]] void usage(const std::string& message) { throw Failure{kUsage, message}; }

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Geography = std::unique_ptr<negeo_geography, Deleter<negeo_geography, negeo_geography_free>>;
using Equilibrium =
    std::unique_ptr<negeo_equilibrium, Deleter<negeo_equilibrium, negeo_equilibrium_free>>;
using TrajectoryPtr =
    std::unique_ptr<negeo_trajectory, Deleter<negeo_trajectory, negeo_trajectory_free>>;
using Sweep = std::unique_ptr<negeo_sweep, Deleter<negeo_sweep, negeo_sweep_free>>;
using PanelPtr = std::unique_ptr<negeo_panel, Deleter<negeo_panel, negeo_panel_free>>;
using Fit = std::unique_ptr<negeo_fit, Deleter<negeo_fit, negeo_fit_free>>;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_number(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        usage("not a number: '" + s + "'");
    return v;
}

// "start:stop:step" (inclusive of stop within half a step) or "a,b,c".
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(parse_number(item));
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
            usage("tau grid must be start:stop:step with step > 0 and stop >= start");
        const long count = std::lround(std::floor((parts[1] - parts[0]) / parts[2] + 0.5));
        for (long k = 0; k <= count; ++k) grid.push_back(parts[0] + static_cast<double>(k) * parts[2]);
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) grid.push_back(parse_number(item));
    }
    if (grid.empty()) usage("tau grid is empty");
    return grid;
}

void emit(const std::optional<std::string>& out, const std::string& text) {
    if (!out) {
        std::cout << text;
        return;
    }
    check(negeo_write_file(out->c_str(), text.data(), text.size()), "writing " + *out);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kIo, "cannot open " + path};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Common {
    std::string variant = "krugman";
    double sigma = 5.0;
    double mu = 0.4;
    double tau = 0.1;
    std::optional<std::string> distances;
    std::optional<std::string> transport;
    int regions = 2;
    double spacing = 1.0;
    std::optional<std::string> out;

    negeo_variant parsed_variant() const {
        negeo_variant v;
        check(negeo_variant_parse(variant.c_str(), &v), "--variant");
        return v;
    }
    negeo_params params() const { return {sigma, mu, tau}; }
};

void add_model_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--variant", c.variant, "krugman|thomas-housing|thomas-agri|fujita");
    cmd->add_option("--sigma", c.sigma, "elasticity of substitution (> 1)");
    cmd->add_option("--mu", c.mu, "manufacturing expenditure share (> 0)");
    cmd->add_option("--tau", c.tau, "transport cost per unit distance (>= 0)");
    cmd->add_option("--distances", c.distances, "distance edge list region_i,region_j,d");
    cmd->add_option("--transport", c.transport, "transport costs region_i,region_j,year,T");
    cmd->add_option("--regions", c.regions, "regions on a line when --distances is absent");
    cmd->add_option("--spacing", c.spacing, "line spacing when --distances is absent");
    cmd->add_option("--out", c.out, "output file (default: stdout)");
}

Geography load_geography(const Common& c, negeo_variant v) {
    if (v == NEGEO_FUJITA && !c.transport) usage("fujita variant requires --transport");
    negeo_geography* g = nullptr;
    if (c.distances) {
        check(negeo_geography_load(c.distances->c_str(), c.transport ? c.transport->c_str() : nullptr, &g),
              "loading geography");
    } else {
        if (c.transport) usage("--transport requires --distances");
        check(negeo_geography_line(c.regions, c.spacing, &g), "building geography");
    }
    return Geography(g);
}

void require_size(const std::vector<double>& v, size_t n, const char* flag) {
    if (v.size() != n)
        usage(std::string(flag) + " needs " + std::to_string(n) + " comma-separated values");
}

struct SolverFlags {
    negeo_solver_options opts{};
    SolverFlags() { negeo_solver_options_default(&opts); }
    void add(CLI::App* cmd) {
        cmd->add_option("--tol", opts.tol, "short-run relative tolerance");
        cmd->add_option("--max-iter", opts.max_iter, "short-run iteration budget");
        cmd->add_option("--damping", opts.damping, "short-run damping in (0, 1]");
    }
};

struct DynamicsFlags {
    negeo_dynamics_options opts{};
    DynamicsFlags() { negeo_dynamics_options_default(&opts); }
    void add(CLI::App* cmd) {
        cmd->add_option("--gamma", opts.gamma, "migration speed");
        cmd->add_option("--dt", opts.dt, "time step");
        cmd->add_option("--max-steps", opts.max_steps, "step budget");
        cmd->add_option("--stop-tol", opts.stop_tol, "stop when |d lambda / dt| falls below");
        cmd->add_option("--sample-every", opts.sample_every, "trajectory thinning");
    }
};

// Fixed series for dynamics: phi defaults to uniform, H to ones.
struct FixedSeries {
    std::vector<double> phi, H;
    double L = 1.0;
    void add(CLI::App* cmd, bool defaults_allowed) {
        auto* p = cmd->add_option("--phi", phi, "agricultural shares (krugman/fujita)")->delimiter(',');
        auto* h = cmd->add_option("--H", H, "housing stock or agricultural workers (thomas)")->delimiter(',');
        cmd->add_option("--L", L, "total manufacturing labour (thomas)");
        if (defaults_allowed) {
            p->description("agricultural shares (krugman/fujita; default uniform)");
            h->description("thomas H series (default ones)");
        }
    }
    void resolve(negeo_variant v, size_t n, bool defaults_allowed) {
        const bool thomas = v == NEGEO_THOMAS_HOUSING || v == NEGEO_THOMAS_AGRI;
        if (thomas) {
            if (H.empty()) {
                if (!defaults_allowed) usage("thomas variant requires --H");
                H.assign(n, 1.0);
            }
            require_size(H, n, "--H");
        } else {
            if (phi.empty()) {
                if (!defaults_allowed) usage("krugman/fujita variants require --phi");
                phi.assign(n, 1.0 / static_cast<double>(n));
            }
            require_size(phi, n, "--phi");
        }
    }
    const double* phi_ptr() const { return phi.empty() ? nullptr : phi.data(); }
    const double* H_ptr() const { return H.empty() ? nullptr : H.data(); }
};

std::string region_header(const negeo_geography* g, const char* prefix) {
    std::string s;
    for (size_t i = 0; i < negeo_geography_size(g); ++i)
        s += std::string(",") + prefix + negeo_geography_region_id(g, i);
    return s;
}

// ---------------------------------------------------------------- solve

struct SolveCmd {
    Common c;
    SolverFlags solver;
    FixedSeries fixed;
    std::vector<double> lambda;
    std::optional<int> year;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("solve", "short-run equilibrium for a fixed allocation");
        add_model_flags(cmd, c);
        solver.add(cmd);
        fixed.add(cmd, false);
        cmd->add_option("--lambda", lambda, "manufacturing shares, comma separated")
            ->delimiter(',')
            ->required();
        cmd->add_option("--year", year, "transport year (fujita; default first)");
        cmd->callback([this] { run(); });
    }

    void run() {
        const negeo_variant v = c.parsed_variant();
        Geography geo = load_geography(c, v);
        const size_t n = negeo_geography_size(geo.get());
        require_size(lambda, n, "--lambda");
        fixed.resolve(v, n, false);
        const negeo_params p = c.params();
        negeo_equilibrium* raw = nullptr;
        check(negeo_solve(v, &p, geo.get(), lambda.data(), fixed.phi_ptr(), fixed.H_ptr(), fixed.L,
                          &solver.opts, year.has_value(), year.value_or(0), &raw),
              "solve");
        Equilibrium eq(raw);
        if (!negeo_equilibrium_converged(eq.get())) {
            throw Failure{kNonConvergence,
                          "short-run solve did not converge: residual " +
                              num(negeo_equilibrium_residual(eq.get())) + " after " +
                              std::to_string(negeo_equilibrium_iterations(eq.get())) +
                              " iterations"};
        }
        const bool thomas = v == NEGEO_THOMAS_HOUSING || v == NEGEO_THOMAS_AGRI;
        std::vector<double> Y(n), w(n), G(n), P(n), omega(n);
        check(negeo_equilibrium_get(eq.get(), NEGEO_FIELD_Y, Y.data(), n), "Y");
        check(negeo_equilibrium_get(eq.get(), NEGEO_FIELD_W, w.data(), n), "w");
        check(negeo_equilibrium_get(eq.get(), NEGEO_FIELD_G, G.data(), n), "G");
        check(negeo_equilibrium_get(eq.get(), NEGEO_FIELD_OMEGA, omega.data(), n), "omega");
        if (thomas) check(negeo_equilibrium_get(eq.get(), NEGEO_FIELD_P, P.data(), n), "P");

        std::string text = "region,lambda,Y,w,G,P,omega\n";
        for (size_t i = 0; i < n; ++i) {
            text += std::string(negeo_geography_region_id(geo.get(), i)) + "," + num(lambda[i]) +
                    "," + num(Y[i]) + "," + num(w[i]) + "," + num(G[i]) + "," +
                    (thomas ? num(P[i]) : std::string("NA")) + "," + num(omega[i]) + "\n";
        }
        emit(c.out, text);
        std::cerr << "converged in " << negeo_equilibrium_iterations(eq.get())
                  << " iterations, residual " << num(negeo_equilibrium_residual(eq.get())) << "\n";
    }
};

// ------------------------------------------------------------- simulate

struct SimulateCmd {
    Common c;
    SolverFlags solver;
    DynamicsFlags dyn;
    FixedSeries fixed;
    std::vector<double> lambda0;
    double perturbation = 0.01;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("simulate", "migration dynamics toward high real wages");
        add_model_flags(cmd, c);
        solver.add(cmd);
        dyn.add(cmd);
        fixed.add(cmd, true);
        cmd->add_option("--lambda0", lambda0, "initial shares (default: perturbed symmetric)")
            ->delimiter(',');
        cmd->add_option("--perturbation", perturbation, "mass moved from region 2 to region 1");
        cmd->callback([this] { run(); });
    }

    void run() {
        const negeo_variant v = c.parsed_variant();
        Geography geo = load_geography(c, v);
        const size_t n = negeo_geography_size(geo.get());
        if (lambda0.empty()) {
            lambda0.assign(n, 1.0 / static_cast<double>(n));
            if (n >= 2) {
                lambda0[0] += perturbation;
                lambda0[1] -= perturbation;
            }
        }
        require_size(lambda0, n, "--lambda0");
        fixed.resolve(v, n, true);
        const negeo_params p = c.params();
        negeo_trajectory* raw = nullptr;
        check(negeo_simulate(v, &p, geo.get(), lambda0.data(), fixed.phi_ptr(), fixed.H_ptr(),
                             fixed.L, &dyn.opts, &solver.opts, &raw),
              "simulate");
        TrajectoryPtr traj(raw);

        std::string text = "time" + region_header(geo.get(), "lambda_") +
                           region_header(geo.get(), "omega_") + "\n";
        std::vector<double> lam(n), om(n);
        for (size_t k = 0; k < negeo_trajectory_samples(traj.get()); ++k) {
            check(negeo_trajectory_lambda(traj.get(), k, lam.data(), n), "lambda");
            check(negeo_trajectory_omega(traj.get(), k, om.data(), n), "omega");
            text += num(negeo_trajectory_time(traj.get(), k));
            for (double x : lam) text += "," + num(x);
            for (double x : om) text += "," + num(x);
            text += "\n";
        }
        emit(c.out, text);
        std::cerr << "terminal concentration " << num(negeo_trajectory_concentration(traj.get()))
                  << (negeo_trajectory_settled(traj.get()) ? " (settled)" : " (step budget exhausted)")
                  << "\n";
    }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
    Common c;
    SolverFlags solver;
    DynamicsFlags dyn;
    FixedSeries fixed;
    std::string grid;
    double perturbation = 0.01;
    unsigned threads = 1;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("sweep", "terminal concentration across a tau grid");
        add_model_flags(cmd, c);
        solver.add(cmd);
        dyn.add(cmd);
        fixed.add(cmd, true);
        cmd->add_option("--tau-grid", grid, "start:stop:step or comma list")->required();
        cmd->add_option("--perturbation", perturbation, "mass moved from region 2 to region 1");
        cmd->add_option("--threads", threads, "worker threads for grid points");
        cmd->callback([this] { run(); });
    }

    void run() {
        const negeo_variant v = c.parsed_variant();
        const std::vector<double> taus = parse_grid(grid);
        Geography geo = load_geography(c, v);
        const size_t n = negeo_geography_size(geo.get());
        fixed.resolve(v, n, true);
        const negeo_params p = c.params();
        negeo_sweep* raw = nullptr;
        check(negeo_tau_sweep(v, &p, geo.get(), taus.data(), taus.size(), perturbation,
                              fixed.phi_ptr(), fixed.H_ptr(), fixed.L, &dyn.opts, &solver.opts,
                              threads, &raw),
              "sweep");
        Sweep sweep(raw);

        std::string text = "tau,concentration,status\n";
        size_t failed = 0;
        for (size_t k = 0; k < negeo_sweep_size(sweep.get()); ++k) {
            const bool ok = negeo_sweep_ok(sweep.get(), k);
            if (!ok) {
                ++failed;
                std::cerr << "tau " << num(negeo_sweep_tau(sweep.get(), k))
                          << " failed: " << negeo_sweep_error(sweep.get(), k) << "\n";
            }
            text += num(negeo_sweep_tau(sweep.get(), k)) + "," +
                    (ok ? num(negeo_sweep_concentration(sweep.get(), k)) : std::string("nan")) +
                    "," +
                    (!ok ? "failed" : negeo_sweep_settled(sweep.get(), k) ? "ok" : "unsettled") +
                    "\n";
        }
        emit(c.out, text);
        if (!negeo_sweep_acceptable(sweep.get()))
            throw Failure{kNonConvergence, std::to_string(failed) + " of " +
                                               std::to_string(taus.size()) +
                                               " grid points failed (more than 10%)"};
    }
};

// ------------------------------------------------------------- estimate

struct EstimateCmd {
    std::string variant = "krugman";
    std::string panel;
    std::string distances;
    std::optional<std::string> transport;
    std::optional<std::string> out;
    std::string format = "table";
    negeo_fit_options opts{};
    std::optional<double> fix_mu;

    EstimateCmd() { negeo_fit_options_default(&opts); }

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("estimate", "NLS fit of the differenced wage equation");
        cmd->add_option("--variant", variant, "krugman|thomas-housing|thomas-agri|fujita");
        cmd->add_option("--panel", panel, "panel file region,year,w,Y[,H]")->required();
        cmd->add_option("--distances", distances, "distance edge list")->required();
        cmd->add_option("--transport", transport, "transport costs (fujita)");
        cmd->add_option("--format", format, "table|records");
        cmd->add_option("--out", out, "report file (default: stdout)");
        cmd->add_option("--seed", opts.seed, "multistart seed");
        cmd->add_option("--multistart", opts.multistart, "number of starting points");
        cmd->add_option("--max-iter", opts.max_iter, "Levenberg-Marquardt iteration budget");
        cmd->add_option("--sigma", opts.start.sigma, "starting sigma");
        cmd->add_option("--mu", opts.start.mu, "starting mu");
        cmd->add_option("--tau", opts.start.tau, "starting tau");
        cmd->add_option("--fix-mu", fix_mu, "pin mu to this value");
        cmd->callback([this] { run(); });
    }

    void run() {
        negeo_variant v;
        check(negeo_variant_parse(variant.c_str(), &v), "--variant");
        negeo_format f;
        check(negeo_format_parse(format.c_str(), &f), "--format");
        if (v == NEGEO_FUJITA && !transport) usage("fujita variant requires --transport");
        if (fix_mu) {
            opts.fix_mu = 1;
            opts.fixed_mu = *fix_mu;
        }

        negeo_panel* raw_panel = nullptr;
        check(negeo_panel_load(panel.c_str(), distances.c_str(),
                               transport ? transport->c_str() : nullptr, &raw_panel),
              "loading panel");
        PanelPtr pan(raw_panel);
        if ((v == NEGEO_THOMAS_HOUSING || v == NEGEO_THOMAS_AGRI) && !negeo_panel_has_housing(pan.get()))
            usage("thomas variant requires the H series: panel has no H column");

        negeo_fit* raw_fit = nullptr;
        check(negeo_fit_run(v, pan.get(), &opts, &raw_fit), "estimate");
        Fit fit(raw_fit);
        char* report = nullptr;
        check(negeo_fit_report(fit.get(), f, &report), "report");
        const std::string text(report);
        negeo_string_free(report);
        emit(out, text);

        negeo_fit_summary s;
        negeo_fit_get_summary(fit.get(), &s);
        std::cerr << "sigma/(sigma-1) = " << num(s.returns_index)
                  << ", sigma(1-mu) = " << num(s.blackhole_index) << "\n";
        if (!s.converged) throw Failure{kNonConvergence, "estimation did not converge"};
    }
};

// ---------------------------------------------------------------- synth

struct SynthCmd {
    negeo_synthetic_spec spec{};
    std::string out;
    std::string distances;
    std::optional<std::string> transport;

    SynthCmd() { negeo_synthetic_spec_default(&spec); }

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("synth", "generate a synthetic Krugman-form panel");
        cmd->add_option("--sigma", spec.truth.sigma, "true sigma");
        cmd->add_option("--mu", spec.truth.mu, "true mu");
        cmd->add_option("--tau", spec.truth.tau, "true tau");
        cmd->add_option("--regions", spec.regions, "regions on a line");
        cmd->add_option("--spacing", spec.spacing, "distance between neighbours");
        cmd->add_option("--years", spec.years, "number of years (>= 2)");
        cmd->add_option("--first-year", spec.first_year, "label of the first year");
        cmd->add_option("--noise", spec.noise_sd, "sd of measurement noise on Delta log w");
        cmd->add_option("--innovation-sd", spec.innovation_sd, "sd of log income innovations");
        cmd->add_option("--seed", spec.seed, "random seed");
        cmd->add_option("--out", out, "panel output file")->required();
        cmd->add_option("--distances", distances, "distance output file")->required();
        cmd->add_option("--transport", transport, "transport output file (optional)");
        cmd->callback([this] { run(); });
    }

    void run() {
        negeo_panel* raw = nullptr;
        check(negeo_panel_generate(&spec, &raw), "synth");
        PanelPtr pan(raw);
        check(negeo_panel_write(pan.get(), out.c_str(), distances.c_str(),
                                transport ? transport->c_str() : nullptr),
              "writing panel");
    }
};

// --------------------------------------------------------------- report

struct ReportCmd {
    std::string input;
    std::string format = "table";
    std::optional<std::string> out;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("report", "render a records file as a table");
        cmd->add_option("--input", input, "records produced by estimate --format records")->required();
        cmd->add_option("--format", format, "table|records");
        cmd->add_option("--out", out, "output file (default: stdout)");
        cmd->callback([this] { run(); });
    }

    void run() {
        negeo_format f;
        check(negeo_format_parse(format.c_str(), &f), "--format");
        const std::string text = read_text(input);
        negeo_fit* raw = nullptr;
        check(negeo_fit_parse_records(text.c_str(), &raw), "parsing " + input);
        Fit fit(raw);
        char* report = nullptr;
        check(negeo_fit_report(fit.get(), f, &report), "report");
        const std::string rendered(report);
        negeo_string_free(report);
        emit(out, rendered);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"negeo: new economic geography models, dynamics and estimation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", negeo_version());

    SolveCmd solve;
    SimulateCmd simulate;
    SweepCmd sweep;
    EstimateCmd estimate;
    SynthCmd synth;
    ReportCmd report;
    solve.add(app);
    simulate.add(app);
    sweep.add(app);
    estimate.add(app);
    synth.add(app);
    report.add(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    } catch (const Failure& f) {
        std::cerr << "negeo: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "negeo: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
