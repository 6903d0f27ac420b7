#include "negeo/negeo.h"

#include "negeo/data_io.hpp"
#include "negeo/dynamics.hpp"
#include "negeo/equilibrium.hpp"
#include "negeo/error.hpp"
#include "negeo/estimation.hpp"
#include "negeo/model.hpp"
#include "negeo/report.hpp"
#include "negeo/synthetic.hpp"

#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

struct negeo_geography {
    negeo::Geography geo;
    std::vector<std::string> ids;
};

struct negeo_equilibrium {
    negeo::equilibrium::EquilibriumResult result;
    bool thomas = false;
};

struct negeo_trajectory {
    negeo::dynamics::Trajectory traj;
};

struct negeo_sweep {
    std::vector<negeo::dynamics::SweepPoint> points;
};

struct negeo_panel {
    negeo::Panel panel;
};

struct negeo_fit {
    negeo::estimation::FitResult fit;
};

namespace {

thread_local std::string last_error;

negeo_status fail(negeo_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs `body`, translating the C++ exception hierarchy into status codes.
template <class F>
negeo_status guarded(F&& body) {
    try {
        body();
        return NEGEO_OK;
    } catch (const negeo::UsageError& e) {
        return fail(NEGEO_ERR_USAGE, e.what());
    } catch (const negeo::ValidationError& e) {
        return fail(NEGEO_ERR_VALIDATION, e.what());
    } catch (const negeo::DomainError& e) {
        return fail(NEGEO_ERR_DOMAIN, e.what());
    } catch (const negeo::NumericalError& e) {
        return fail(NEGEO_ERR_NONCONVERGENCE, e.what());
    } catch (const negeo::EstimationError& e) {
        return fail(NEGEO_ERR_ESTIMATION, e.what());
    } catch (const negeo::IoError& e) {
        return fail(NEGEO_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(NEGEO_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NEGEO_ERR_INTERNAL, e.what());
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw negeo::UsageError(what);
}

negeo::Variant to_cpp(negeo_variant v) {
    switch (v) {
        case NEGEO_KRUGMAN: return negeo::Variant::Krugman;
        case NEGEO_THOMAS_HOUSING: return negeo::Variant::ThomasHousing;
        case NEGEO_THOMAS_AGRI: return negeo::Variant::ThomasAgricultural;
        case NEGEO_FUJITA: return negeo::Variant::Fujita;
    }
    throw negeo::UsageError("invalid variant value");
}

negeo_variant to_c(negeo::Variant v) {
    switch (v) {
        case negeo::Variant::Krugman: return NEGEO_KRUGMAN;
        case negeo::Variant::ThomasHousing: return NEGEO_THOMAS_HOUSING;
        case negeo::Variant::ThomasAgricultural: return NEGEO_THOMAS_AGRI;
        case negeo::Variant::Fujita: return NEGEO_FUJITA;
    }
    return NEGEO_KRUGMAN;
}

negeo::ModelParams to_cpp(const negeo_params* p) {
    require(p != nullptr, "params must not be NULL");
    return {p->sigma, p->mu, p->tau};
}

negeo::equilibrium::SolverOptions to_cpp(const negeo_solver_options* o) {
    negeo::equilibrium::SolverOptions s;
    if (o) {
        s.tol = o->tol;
        s.max_iter = o->max_iter;
        s.damping = o->damping;
    }
    return s;
}

negeo::dynamics::DynamicsOptions to_cpp(const negeo_dynamics_options* o) {
    negeo::dynamics::DynamicsOptions d;
    if (o) {
        d.gamma = o->gamma;
        d.dt = o->dt;
        d.max_steps = o->max_steps;
        d.stop_tol = o->stop_tol;
        d.sample_every = o->sample_every;
    }
    return d;
}

negeo::Vector copy_vector(const double* data, Eigen::Index n) {
    return Eigen::Map<const negeo::Vector>(data, n);
}

negeo::equilibrium::Allocation make_allocation(negeo_variant variant, const negeo_geography* geo,
                                              const double* lambda, const double* phi,
                                              const double* H, double L) {
    const Eigen::Index n = geo->geo.size();
    negeo::equilibrium::Allocation a;
    if (lambda) a.lambda = copy_vector(lambda, n);
    const bool thomas = negeo::is_thomas(to_cpp(variant));
    if (thomas) {
        require(H != nullptr, "thomas variant requires the H series");
        a.H = copy_vector(H, n);
    } else {
        require(phi != nullptr, "krugman/fujita variants require the phi series");
        a.phi = copy_vector(phi, n);
    }
    a.L = L;
    return a;
}

std::optional<std::filesystem::path> optional_path(const char* p) {
    if (!p || !*p) return std::nullopt;
    return std::filesystem::path(p);
}

template <class Handle>
void check_handle(const Handle* h) {
    require(h != nullptr, "handle must not be NULL");
}

void copy_out(const negeo::Vector& v, double* buf, size_t n) {
    require(buf != nullptr, "output buffer must not be NULL");
    require(n == static_cast<size_t>(v.size()), "output buffer size does not match region count");
    std::memcpy(buf, v.data(), n * sizeof(double));
}

}  // namespace

extern "C" {

const char* negeo_last_error(void) { return last_error.c_str(); }

const char* negeo_version(void) { return "0.1.0"; }

negeo_status negeo_variant_parse(const char* name, negeo_variant* out) {
    return guarded([&] {
        require(name && out, "arguments must not be NULL");
        *out = to_c(negeo::parse_variant(name));
    });
}

negeo_status negeo_format_parse(const char* name, negeo_format* out) {
    return guarded([&] {
        require(name && out, "arguments must not be NULL");
        *out = negeo::report::parse_format(name) == negeo::report::Format::Table
                   ? NEGEO_FORMAT_TABLE
                   : NEGEO_FORMAT_RECORDS;
    });
}

void negeo_solver_options_default(negeo_solver_options* out) {
    const negeo::equilibrium::SolverOptions d;
    *out = {d.tol, d.max_iter, d.damping};
}

void negeo_dynamics_options_default(negeo_dynamics_options* out) {
    const negeo::dynamics::DynamicsOptions d;
    *out = {d.gamma, d.dt, d.max_steps, d.stop_tol, d.sample_every};
}

void negeo_fit_options_default(negeo_fit_options* out) {
    const negeo::estimation::FitOptions d;
    *out = {{d.start.sigma, d.start.mu, d.start.tau}, d.multistart, d.seed, d.max_iter,
            d.fd_step, d.ftol, 0, 1.0};
}

void negeo_synthetic_spec_default(negeo_synthetic_spec* out) {
    const negeo::synthetic::SyntheticSpec d;
    *out = {{d.truth.sigma, d.truth.mu, d.truth.tau},
            static_cast<int>(d.regions),
            d.years,
            d.first_year,
            1.0,
            d.noise_sd,
            d.innovation_sd,
            d.seed};
}

negeo_status negeo_returns_index(double sigma, double* out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        *out = negeo::model::returns_index(sigma);
    });
}

double negeo_blackhole_index(double sigma, double mu) {
    return negeo::model::blackhole_index(sigma, mu);
}

negeo_status negeo_geography_load(const char* distances_path, const char* transport_path,
                                  negeo_geography** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        require(distances_path && out, "arguments must not be NULL");
        auto h = std::make_unique<negeo_geography>();
        h->geo = negeo::io::load_geography(distances_path, optional_path(transport_path), h->ids);
        *out = h.release();
    });
}

negeo_status negeo_geography_line(int regions, double spacing, negeo_geography** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        require(regions >= 1, "regions must be >= 1");
        require(spacing >= 0.0, "spacing must be >= 0");
        auto h = std::make_unique<negeo_geography>();
        h->geo = negeo::Geography::line(regions, spacing);
        for (int i = 0; i < regions; ++i) h->ids.push_back("r" + std::to_string(i + 1));
        *out = h.release();
    });
}

size_t negeo_geography_size(const negeo_geography* geo) {
    return geo ? static_cast<size_t>(geo->geo.size()) : 0;
}

const char* negeo_geography_region_id(const negeo_geography* geo, size_t i) {
    if (!geo || i >= geo->ids.size()) return nullptr;
    return geo->ids[i].c_str();
}

void negeo_geography_free(negeo_geography* geo) { delete geo; }

negeo_status negeo_solve(negeo_variant variant, const negeo_params* params,
                         const negeo_geography* geo, const double* lambda, const double* phi,
                         const double* H, double L, const negeo_solver_options* opts, int has_year,
                         int year, negeo_equilibrium** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        check_handle(geo);
        require(lambda && out, "lambda and out must not be NULL");
        const auto alloc = make_allocation(variant, geo, lambda, phi, H, L);
        auto h = std::make_unique<negeo_equilibrium>();
        h->thomas = negeo::is_thomas(to_cpp(variant));
        h->result = negeo::equilibrium::solve_short_run(
            to_cpp(variant), to_cpp(params), geo->geo, alloc, to_cpp(opts),
            has_year ? std::optional<int>(year) : std::nullopt);
        *out = h.release();
    });
}

int negeo_equilibrium_converged(const negeo_equilibrium* eq) {
    return eq && eq->result.converged ? 1 : 0;
}

int negeo_equilibrium_iterations(const negeo_equilibrium* eq) {
    return eq ? eq->result.iterations : 0;
}

double negeo_equilibrium_residual(const negeo_equilibrium* eq) {
    return eq ? eq->result.residual : std::numeric_limits<double>::quiet_NaN();
}

negeo_status negeo_equilibrium_get(const negeo_equilibrium* eq, negeo_field field, double* buf,
                                   size_t n) {
    return guarded([&] {
        check_handle(eq);
        const auto& s = eq->result.state;
        switch (field) {
            case NEGEO_FIELD_Y: copy_out(s.Y, buf, n); return;
            case NEGEO_FIELD_W: copy_out(s.w, buf, n); return;
            case NEGEO_FIELD_G: copy_out(s.G, buf, n); return;
            case NEGEO_FIELD_P:
                require(eq->thomas, "housing price P exists only for the thomas variants");
                copy_out(s.P, buf, n);
                return;
            case NEGEO_FIELD_OMEGA: copy_out(s.omega, buf, n); return;
            case NEGEO_FIELD_LAMBDA: copy_out(s.lambda, buf, n); return;
        }
        throw negeo::UsageError("invalid field");
    });
}

void negeo_equilibrium_free(negeo_equilibrium* eq) { delete eq; }

negeo_status negeo_simulate(negeo_variant variant, const negeo_params* params,
                            const negeo_geography* geo, const double* lambda0, const double* phi,
                            const double* H, double L, const negeo_dynamics_options* dyn,
                            const negeo_solver_options* solver, negeo_trajectory** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        check_handle(geo);
        require(lambda0 && out, "lambda0 and out must not be NULL");
        const auto alloc = make_allocation(variant, geo, nullptr, phi, H, L);
        auto h = std::make_unique<negeo_trajectory>();
        h->traj = negeo::dynamics::simulate(to_cpp(variant), to_cpp(params), geo->geo,
                                            copy_vector(lambda0, geo->geo.size()), alloc,
                                            to_cpp(dyn), to_cpp(solver));
        *out = h.release();
    });
}

size_t negeo_trajectory_samples(const negeo_trajectory* t) {
    return t ? t->traj.samples.size() : 0;
}

double negeo_trajectory_time(const negeo_trajectory* t, size_t k) {
    if (!t || k >= t->traj.samples.size()) return std::numeric_limits<double>::quiet_NaN();
    return t->traj.samples[k].time;
}

negeo_status negeo_trajectory_lambda(const negeo_trajectory* t, size_t k, double* buf, size_t n) {
    return guarded([&] {
        check_handle(t);
        require(k < t->traj.samples.size(), "sample index out of range");
        copy_out(t->traj.samples[k].lambda, buf, n);
    });
}

negeo_status negeo_trajectory_omega(const negeo_trajectory* t, size_t k, double* buf, size_t n) {
    return guarded([&] {
        check_handle(t);
        require(k < t->traj.samples.size(), "sample index out of range");
        copy_out(t->traj.samples[k].omega, buf, n);
    });
}

double negeo_trajectory_concentration(const negeo_trajectory* t) {
    return t ? t->traj.concentration : std::numeric_limits<double>::quiet_NaN();
}

int negeo_trajectory_settled(const negeo_trajectory* t) { return t && t->traj.settled ? 1 : 0; }

void negeo_trajectory_free(negeo_trajectory* t) { delete t; }

negeo_status negeo_tau_sweep(negeo_variant variant, const negeo_params* params,
                             const negeo_geography* geo, const double* tau_grid, size_t grid_size,
                             double perturbation, const double* phi, const double* H, double L,
                             const negeo_dynamics_options* dyn, const negeo_solver_options* solver,
                             unsigned threads, negeo_sweep** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        check_handle(geo);
        require(out != nullptr, "out must not be NULL");
        require(grid_size == 0 || tau_grid != nullptr, "tau_grid must not be NULL");
        const auto alloc = make_allocation(variant, geo, nullptr, phi, H, L);
        const std::vector<double> grid(tau_grid, tau_grid + grid_size);
        auto h = std::make_unique<negeo_sweep>();
        h->points = negeo::dynamics::tau_sweep(to_cpp(variant), to_cpp(params), geo->geo, grid,
                                               perturbation, alloc, to_cpp(dyn), to_cpp(solver),
                                               threads);
        *out = h.release();
    });
}

size_t negeo_sweep_size(const negeo_sweep* s) { return s ? s->points.size() : 0; }

double negeo_sweep_tau(const negeo_sweep* s, size_t k) {
    if (!s || k >= s->points.size()) return std::numeric_limits<double>::quiet_NaN();
    return s->points[k].tau;
}

double negeo_sweep_concentration(const negeo_sweep* s, size_t k) {
    if (!s || k >= s->points.size()) return std::numeric_limits<double>::quiet_NaN();
    return s->points[k].concentration;
}

int negeo_sweep_ok(const negeo_sweep* s, size_t k) {
    return s && k < s->points.size() && s->points[k].ok ? 1 : 0;
}

int negeo_sweep_settled(const negeo_sweep* s, size_t k) {
    return s && k < s->points.size() && s->points[k].settled ? 1 : 0;
}

const char* negeo_sweep_error(const negeo_sweep* s, size_t k) {
    if (!s || k >= s->points.size()) return nullptr;
    return s->points[k].error.c_str();
}

int negeo_sweep_acceptable(const negeo_sweep* s) {
    return s && negeo::dynamics::sweep_acceptable(s->points) ? 1 : 0;
}

void negeo_sweep_free(negeo_sweep* s) { delete s; }

negeo_status negeo_panel_load(const char* panel_path, const char* distances_path,
                              const char* transport_path, negeo_panel** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        require(panel_path && distances_path && out, "arguments must not be NULL");
        auto h = std::make_unique<negeo_panel>();
        h->panel = negeo::io::load_panel(panel_path, distances_path, optional_path(transport_path));
        *out = h.release();
    });
}

negeo_status negeo_panel_generate(const negeo_synthetic_spec* spec, negeo_panel** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        require(spec && out, "arguments must not be NULL");
        require(spec->regions >= 1, "regions must be >= 1");
        negeo::synthetic::SyntheticSpec s;
        s.truth = to_cpp(&spec->truth);
        s.regions = spec->regions;
        s.years = spec->years;
        s.first_year = spec->first_year;
        s.geography = negeo::Geography::line(spec->regions, spec->spacing);
        s.noise_sd = spec->noise_sd;
        s.innovation_sd = spec->innovation_sd;
        s.seed = spec->seed;
        auto h = std::make_unique<negeo_panel>();
        h->panel = negeo::synthetic::generate(s);
        *out = h.release();
    });
}

negeo_status negeo_panel_write(const negeo_panel* panel, const char* panel_path,
                               const char* distances_path, const char* transport_path) {
    return guarded([&] {
        check_handle(panel);
        require(panel_path && distances_path, "output paths must not be NULL");
        negeo::io::write_panel(panel->panel, panel_path, distances_path,
                               optional_path(transport_path));
    });
}

size_t negeo_panel_regions(const negeo_panel* panel) {
    return panel ? static_cast<size_t>(panel->panel.regions()) : 0;
}

size_t negeo_panel_years(const negeo_panel* panel) { return panel ? panel->panel.years() : 0; }

int negeo_panel_has_housing(const negeo_panel* panel) {
    return panel && panel->panel.has_housing() ? 1 : 0;
}

int negeo_panel_has_transport(const negeo_panel* panel) {
    return panel && panel->panel.has_transport() ? 1 : 0;
}

void negeo_panel_free(negeo_panel* panel) { delete panel; }

negeo_status negeo_fit_run(negeo_variant variant, const negeo_panel* panel,
                           const negeo_fit_options* opts, negeo_fit** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        check_handle(panel);
        require(out != nullptr, "out must not be NULL");
        negeo::estimation::FitOptions o;
        if (opts) {
            o.start = to_cpp(&opts->start);
            o.multistart = opts->multistart;
            o.seed = opts->seed;
            o.max_iter = opts->max_iter;
            o.fd_step = opts->fd_step;
            o.ftol = opts->ftol;
            if (opts->fix_mu) o.fixed_mu = opts->fixed_mu;
        }
        auto h = std::make_unique<negeo_fit>();
        h->fit = negeo::estimation::nls_fit(to_cpp(variant), panel->panel, o);
        *out = h.release();
    });
}

negeo_status negeo_fit_parse_records(const char* text, negeo_fit** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        require(text && out, "arguments must not be NULL");
        auto h = std::make_unique<negeo_fit>();
        h->fit = negeo::report::parse_fit_records(text);
        *out = h.release();
    });
}

negeo_status negeo_fit_report(const negeo_fit* fit, negeo_format format, char** out) {
    if (out) *out = nullptr;
    return guarded([&] {
        check_handle(fit);
        require(out != nullptr, "out must not be NULL");
        const std::string text = negeo::report::write_fit_report(
            fit->fit, format == NEGEO_FORMAT_TABLE ? negeo::report::Format::Table
                                                   : negeo::report::Format::Records);
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void negeo_fit_get_summary(const negeo_fit* fit, negeo_fit_summary* out) {
    if (!fit || !out) return;
    const auto& f = fit->fit;
    *out = negeo_fit_summary{};
    out->sigma = f.sigma.value;
    out->sigma_se = f.sigma.se;
    out->sigma_t = f.sigma.t;
    out->mu = f.mu.value;
    out->mu_se = f.mu.se;
    out->mu_t = f.mu.t;
    out->tau = f.tau.value;
    out->tau_se = f.tau.se;
    out->tau_t = f.tau.t;
    out->has_tau = f.has_tau;
    out->mu_fixed = !f.mu.estimated;
    out->se_available = f.se_available;
    out->r2 = f.r2;
    out->dw = f.dw;
    out->see = f.see;
    out->objective = f.objective;
    out->observations = f.observations;
    out->dropped = f.dropped;
    out->iterations = f.iterations;
    out->converged = f.converged;
    out->returns_index = f.returns_index;
    out->blackhole_index = f.blackhole_index;
    out->warn_mu_above_one = f.warn_mu_above_one;
    out->warn_tau_at_bound = f.warn_tau_at_bound;
}

void negeo_fit_free(negeo_fit* fit) { delete fit; }

void negeo_string_free(char* s) { delete[] s; }

negeo_status negeo_write_file(const char* path, const char* contents, size_t size) {
    return guarded([&] {
        require(path != nullptr && (contents != nullptr || size == 0), "arguments must not be NULL");
        negeo::io::write_file_atomic(path, std::string_view(contents ? contents : "", size));
    });
}

}  // extern "C"
