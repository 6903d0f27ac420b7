#include "negeo/model.hpp"

#include "negeo/error.hpp"
#include "negeo/numeric.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace negeo {

void ModelParams::validate() const {
    if (!std::isfinite(sigma) || sigma <= 1.0)
        throw DomainError("sigma must be > 1, got " + std::to_string(sigma));
    if (!std::isfinite(mu) || mu <= 0.0)
        throw DomainError("mu must be > 0, got " + std::to_string(mu));
    if (!std::isfinite(tau) || tau < 0.0)
        throw DomainError("tau must be >= 0, got " + std::to_string(tau));
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::Krugman: return "krugman";
        case Variant::ThomasHousing: return "thomas-housing";
        case Variant::ThomasAgricultural: return "thomas-agri";
        case Variant::Fujita: return "fujita";
    }
    return "unknown";
}

Variant parse_variant(std::string_view name) {
    if (name == "krugman") return Variant::Krugman;
    if (name == "thomas-housing") return Variant::ThomasHousing;
    if (name == "thomas-agri") return Variant::ThomasAgricultural;
    if (name == "fujita") return Variant::Fujita;
    throw UsageError("unknown variant '" + std::string(name) +
                     "' (expected krugman|thomas-housing|thomas-agri|fujita)");
}

std::string_view model_title(Variant v) {
    switch (v) {
        case Variant::Krugman: return "Krugman model in differences";
        case Variant::ThomasHousing: return "Thomas model in differences (with housing stock to the H)";
        case Variant::ThomasAgricultural:
            return "Thomas model in differences (with agricultural workers to the H)";
        case Variant::Fujita: return "Fujita et al. model in differences";
    }
    return "";
}

namespace {

void check_square(const Matrix& m, Eigen::Index n, const char* what) {
    if (m.rows() != n || m.cols() != n)
        throw UsageError(std::string(what) + " must be " + std::to_string(n) + "x" +
                         std::to_string(n));
}

}  // namespace

void Geography::validate() const {
    const Eigen::Index n = size();
    if (n <= 0) throw ValidationError("geography has no regions");
    check_square(distance, n, "distance matrix");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (distance(i, i) != 0.0)
            throw ValidationError("distance d(" + std::to_string(i + 1) + "," +
                                  std::to_string(i + 1) + ") must be 0");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double a = distance(i, j), b = distance(j, i);
            if (!std::isfinite(a) || a < 0.0)
                throw ValidationError("distance d(" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") must be finite and >= 0");
            if (a != b)
                throw ValidationError("distance matrix asymmetric at pair (" +
                                      std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
    }
    for (const auto& [year, t] : transport) {
        check_square(t, n, "transport matrix");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (t(i, i) != 1.0)
                throw ValidationError("transport T(" + std::to_string(i + 1) + "," +
                                      std::to_string(i + 1) + ") must be 1 in year " +
                                      std::to_string(year));
            for (Eigen::Index j = i + 1; j < n; ++j) {
                if (!(t(i, j) >= 1.0) || !std::isfinite(t(i, j)))
                    throw ValidationError("transport T(" + std::to_string(i + 1) + "," +
                                          std::to_string(j + 1) + ") must be >= 1 in year " +
                                          std::to_string(year));
                if (t(i, j) != t(j, i))
                    throw ValidationError("transport matrix asymmetric at pair (" +
                                          std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                          ") in year " + std::to_string(year));
            }
        }
    }
}

Geography Geography::line(Eigen::Index n, double spacing) {
    Geography g;
    g.distance.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g.distance(i, j) = spacing * std::abs(static_cast<double>(i - j));
    return g;
}

}  // namespace negeo

namespace negeo::model {

double income_krugman(const ModelParams& params, double phi, double lambda, double w) {
    return (1.0 - params.mu) * phi + params.mu * lambda * w;
}

double income_thomas(double lambda, double L, double w) { return lambda * L * w; }

double housing_price(const ModelParams& params, double Y, double H) {
    if (!(H > 0.0)) throw DomainError("housing price undefined: zero housing stock");
    return (1.0 - params.mu) * Y / H;
}

Matrix iceberg_freight(double tau, const Matrix& distance) {
    return (tau * distance.array()).exp().matrix();
}

Matrix freight_for(Variant variant, const ModelParams& params, const Geography& geo,
                   std::optional<int> year) {
    if (variant != Variant::Fujita) return iceberg_freight(params.tau, geo.distance);
    if (geo.transport.empty())
        throw UsageError("fujita variant requires transport costs (T matrices)");
    if (!year) return geo.transport.begin()->second;
    auto it = geo.transport.find(*year);
    if (it == geo.transport.end())
        throw UsageError("no transport matrix for year " + std::to_string(*year));
    return it->second;
}

Vector price_index(const ModelParams& params, const Vector& lambda, const Vector& w,
                   const Matrix& freight) {
    const Eigen::Index n = lambda.size();
    if (w.size() != n || freight.rows() != n || freight.cols() != n)
        throw UsageError("price_index: dimension mismatch");
    if ((lambda.array() <= 0.0).all())
        throw DomainError("price index undefined: empty manufacturing sector");

    const double expo = 1.0 - params.sigma;
    std::vector<double> terms(static_cast<std::size_t>(n));
    Vector G(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            terms[j] = lambda(j) > 0.0
                           ? std::log(lambda(j)) + expo * (std::log(w(j)) + std::log(freight(i, j)))
                           : -std::numeric_limits<double>::infinity();
        }
        G(i) = std::exp(numeric::log_sum_exp(terms) / expo);
    }
    return G;
}

Vector nominal_wage_rhs(const ModelParams& params, const Vector& Y, const Vector& G,
                        const Matrix& freight) {
    const Eigen::Index n = Y.size();
    if (G.size() != n || freight.rows() != n || freight.cols() != n)
        throw UsageError("nominal_wage_rhs: dimension mismatch");

    const double expo = params.sigma - 1.0;
    std::vector<double> terms(static_cast<std::size_t>(n));
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            terms[j] = Y(j) > 0.0
                           ? std::log(Y(j)) + expo * (std::log(G(j)) - std::log(freight(i, j)))
                           : -std::numeric_limits<double>::infinity();
        }
        w(i) = std::exp(numeric::log_sum_exp(terms) / params.sigma);
    }
    return w;
}

double real_wage(Variant variant, const ModelParams& params, double w, double G,
                 std::optional<double> P) {
    if (!is_thomas(variant)) return w * std::pow(G, -params.mu);
    if (!P) throw UsageError("thomas real wage requires the housing price P");
    return w / (std::pow(*P, 1.0 - params.mu) * std::pow(G, params.mu));
}

double returns_index(double sigma) {
    if (!(sigma > 1.0)) throw DomainError("returns index requires sigma > 1");
    return sigma / (sigma - 1.0);
}

double blackhole_index(double sigma, double mu) { return sigma * (1.0 - mu); }

}  // namespace negeo::model
