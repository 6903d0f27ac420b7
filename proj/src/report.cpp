#include "negeo/report.hpp"

#include "negeo/data_io.hpp"
#include "negeo/error.hpp"
#include "negeo/model.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace negeo::report {

using estimation::FitResult;
using estimation::ParameterEstimate;

Format parse_format(std::string_view name) {
    if (name == "table") return Format::Table;
    if (name == "records") return Format::Records;
    throw UsageError("unknown format '" + std::string(name) + "' (expected table|records)");
}

namespace {

std::string fixed3(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    // snprintf honours LC_NUMERIC; force a dot separator.
    for (char& c : buf)
        if (c == ',') c = '.';
    return buf;
}

std::string parameter_row(std::string_view label, const ParameterEstimate& p) {
    std::string row = std::string(label) + " " + fixed3(p.value);
    if (!p.estimated)
        row += " (fixed)";
    else
        row += " (" + fixed3(p.t) + ")";
    return row;
}

std::string table(const FitResult& f) {
    std::ostringstream os;
    os << model_title(f.variant) << "\n";
    os << "Parameters and R² Values obtained\n";
    os << parameter_row("σ", f.sigma) << "\n";
    os << parameter_row("μ", f.mu);
    if (f.warn_mu_above_one) os << " " << model::kMuAboveOneMarker;
    os << "\n";
    if (f.has_tau) {
        os << parameter_row("τ", f.tau);
        if (f.warn_tau_at_bound) os << " [tau at bound]";
        os << "\n";
    }
    os << "R² " << fixed3(f.r2) << "\n";
    os << "DW " << fixed3(f.dw) << "\n";
    os << "SEE " << fixed3(f.see) << "\n";
    os << "N° observations " << f.observations << "\n";
    os << "σ/(σ−1) " << fixed3(f.returns_index) << "\n";
    if (f.mu.value < 1.0) os << "σ(1−μ) " << fixed3(f.blackhole_index) << "\n";
    os << "Note: Figures in brackets represent the t-statistic.";
    if (!f.se_available) os << " Standard errors unavailable (singular information matrix).";
    os << "\n";
    if (f.warn_mu_above_one)
        os << model::kMuAboveOneMarker << " estimated expenditure share exceeds one\n";
    if (f.dropped > 0) os << "Dropped observations: " << f.dropped << "\n";
    os << "Converged: " << (f.converged ? "yes" : "no") << "\n";
    return os.str();
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + io::format_double(v[k]);
    return s;
}

void put(std::ostringstream& os, std::string_view key, double v) {
    os << key << '=' << io::format_double(v) << '\n';
}
void put(std::ostringstream& os, std::string_view key, long v) { os << key << '=' << v << '\n'; }
void put(std::ostringstream& os, std::string_view key, bool v) {
    os << key << '=' << (v ? "true" : "false") << '\n';
}

void put_param(std::ostringstream& os, std::string_view name, const ParameterEstimate& p) {
    const std::string k(name);
    put(os, k, p.value);
    put(os, k + "_se", p.se);
    put(os, k + "_t", p.t);
    put(os, k + "_estimated", p.estimated);
}

std::string records(const FitResult& f) {
    std::ostringstream os;
    os << "format=negeo-fit-1\n";
    os << "variant=" << to_string(f.variant) << '\n';
    put_param(os, "sigma", f.sigma);
    put_param(os, "mu", f.mu);
    put_param(os, "tau", f.tau);
    put(os, "has_tau", f.has_tau);
    put(os, "se_available", f.se_available);
    put(os, "r2", f.r2);
    put(os, "dw", f.dw);
    put(os, "see", f.see);
    put(os, "objective", f.objective);
    put(os, "observations", f.observations);
    put(os, "dropped", f.dropped);
    put(os, "iterations", static_cast<long>(f.iterations));
    put(os, "converged", f.converged);
    put(os, "returns_index", f.returns_index);
    put(os, "blackhole_index", f.blackhole_index);
    put(os, "warn_mu_above_one", f.warn_mu_above_one);
    put(os, "warn_tau_at_bound", f.warn_tau_at_bound);
    os << "start_objectives=" << join(f.start_objectives) << '\n';
    return os.str();
}

}  // namespace

std::string write_fit_report(const FitResult& fit, Format format) {
    return format == Format::Table ? table(fit) : records(fit);
}

FitResult parse_fit_records(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("records: malformed line '" + line + "'");
        if (!kv.emplace(line.substr(0, eq), line.substr(eq + 1)).second)
            throw ValidationError("records: duplicate key '" + line.substr(0, eq) + "'");
    }
    auto take = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ValidationError("records: missing key '" + key + "'");
        std::string v = std::move(it->second);
        kv.erase(it);
        return v;
    };
    auto num = [&](const std::string& key) {
        try {
            return io::parse_double(take(key));
        } catch (const UsageError& e) {
            throw ValidationError("records: " + key + ": " + e.what());
        }
    };
    auto flag = [&](const std::string& key) {
        const std::string v = take(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw ValidationError("records: " + key + " must be true or false");
    };
    auto integer = [&](const std::string& key) {
        const double v = num(key);
        if (v != std::floor(v)) throw ValidationError("records: " + key + " must be an integer");
        return static_cast<long>(v);
    };
    auto param = [&](const std::string& name) {
        ParameterEstimate p;
        p.value = num(name);
        p.se = num(name + "_se");
        p.t = num(name + "_t");
        p.estimated = flag(name + "_estimated");
        return p;
    };

    if (take("format") != "negeo-fit-1") throw ValidationError("records: unsupported format");
    FitResult f;
    try {
        f.variant = parse_variant(take("variant"));
    } catch (const UsageError& e) {
        throw ValidationError(std::string("records: ") + e.what());
    }
    f.sigma = param("sigma");
    f.mu = param("mu");
    f.tau = param("tau");
    f.has_tau = flag("has_tau");
    f.se_available = flag("se_available");
    f.r2 = num("r2");
    f.dw = num("dw");
    f.see = num("see");
    f.objective = num("objective");
    f.observations = integer("observations");
    f.dropped = integer("dropped");
    f.iterations = static_cast<int>(integer("iterations"));
    f.converged = flag("converged");
    f.returns_index = num("returns_index");
    f.blackhole_index = num("blackhole_index");
    f.warn_mu_above_one = flag("warn_mu_above_one");
    f.warn_tau_at_bound = flag("warn_tau_at_bound");
    const std::string starts = take("start_objectives");
    std::size_t pos = 0;
    while (pos < starts.size()) {
        const auto comma = starts.find(',', pos);
        const auto item = starts.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            f.start_objectives.push_back(io::parse_double(item));
        } catch (const UsageError& e) {
            throw ValidationError(std::string("records: start_objectives: ") + e.what());
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!kv.empty()) throw ValidationError("records: unknown key '" + kv.begin()->first + "'");
    return f;
}

bool same_fit(const FitResult& a, const FitResult& b) {
    auto eq = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    auto eqp = [&](const ParameterEstimate& x, const ParameterEstimate& y) {
        return eq(x.value, y.value) && eq(x.se, y.se) && eq(x.t, y.t) && x.estimated == y.estimated;
    };
    if (a.start_objectives.size() != b.start_objectives.size()) return false;
    for (std::size_t k = 0; k < a.start_objectives.size(); ++k)
        if (!eq(a.start_objectives[k], b.start_objectives[k])) return false;
    return a.variant == b.variant && eqp(a.sigma, b.sigma) && eqp(a.mu, b.mu) &&
           eqp(a.tau, b.tau) && a.has_tau == b.has_tau && a.se_available == b.se_available &&
           eq(a.r2, b.r2) && eq(a.dw, b.dw) && eq(a.see, b.see) && eq(a.objective, b.objective) &&
           a.observations == b.observations && a.dropped == b.dropped &&
           a.iterations == b.iterations && a.converged == b.converged &&
           eq(a.returns_index, b.returns_index) && eq(a.blackhole_index, b.blackhole_index) &&
           a.warn_mu_above_one == b.warn_mu_above_one && a.warn_tau_at_bound == b.warn_tau_at_bound;
}

}  // namespace negeo::report
