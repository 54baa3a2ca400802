#include "risnet/spatial_rate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"

namespace risnet {

namespace {

constexpr double ln2 = std::numbers::ln2;
constexpr double pi = std::numbers::pi;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

double annulus_area_factor(const SystemParams& p) {
    return p.d_max * p.d_max - p.d_min * p.d_min;
}

void check_inputs(const SystemParams& p, const DeploymentParams& dep, double rho) {
    p.validate();
    dep.validate();
    mu(rho);
}

// Shared terms of every form: association probability, geometry and H.
SpatialRateBreakdown common_terms(const SystemParams& p, const DeploymentParams& dep, double m,
                                  const Tolerance& tol) {
    SpatialRateBreakdown b;
    const double C = p.serve_radius;
    const double lambda = dep.density;
    b.assoc_probability = association_probability(lambda, C);
    b.geometry_term =
        b.assoc_probability * (std::log2(p.snr() * p.beta_ref * p.beta_ref) -
                               p.alpha_bs_ris * expected_log2_d(p.d_min, p.d_max)) -
        p.alpha_ris_ue * expected_log2_r_truncated(lambda, C, tol);
    b.h_term = h_term(dep.elements_per_ris, m, lambda, C);
    return b;
}

void soft_checks_n(SpatialRateBreakdown& b, double n) {
    if (n < 8.0) b.warnings.push_back("elements_per_ris below 8: closed form outside its regime");
}

}  // namespace

double SpatialRateBreakdown::resum() const {
    return geometry_term + h_term + g_bar_term + g_bar_low_term.value_or(0.0) + direct_term;
}

double nearest_ris_pdf(double lambda, double r) {
    if (!(lambda > 0.0)) throw DomainError("nearest_ris_pdf: lambda must be positive");
    if (!(r >= 0.0)) throw DomainError("nearest_ris_pdf: r must be nonnegative");
    return 2.0 * pi * lambda * r * std::exp(-pi * lambda * r * r);
}

double association_probability(double lambda, double C) {
    if (!(lambda > 0.0)) throw DomainError("association_probability: lambda must be positive");
    if (!(C >= 0.0)) throw DomainError("association_probability: C must be nonnegative");
    return -std::expm1(-pi * lambda * C * C);
}

double expected_ln_d(double D1, double D2) {
    if (!(D1 > 0.0) || !(D2 > D1)) throw DomainError("expected_log2_d: need 0 < D1 < D2");
    // (D2^2 ln D2 - D1^2 ln D1)/(D2^2 - D1^2) - 1/2, rearranged to stay exact as D1 -> D2
    const double u = (D2 - D1) * (D2 + D1) / (D1 * D1);
    return std::log(D2) + 0.5 * std::log1p(u) / u - 0.5;
}

double expected_log2_d(double D1, double D2) { return expected_ln_d(D1, D2) / ln2; }

double expected_log2_r_truncated(double lambda, double C, const Tolerance& tol) {
    if (!(lambda > 0.0)) throw DomainError("expected_log2_r_truncated: lambda must be positive");
    if (!(C > 0.0)) throw DomainError("expected_log2_r_truncated: C must be positive");
    const double x = pi * lambda * C * C;
    double tail = 0.0;
    if (x < 700.0) tail = exp_integral_ei(-x, tol) - std::exp(-x) * std::log(C * C);
    return (tail - std::log(pi * lambda) - euler_constant()) / (2.0 * ln2);
}

double h_term(double n, double m, double lambda, double C) {
    return std::log2(n * array_gain_ratio(n, m)) * association_probability(lambda, C);
}

double kappa(int which, const SystemParams& p) {
    const double a1 = p.alpha_direct;
    const double a2 = p.alpha_bs_ris;
    double exponent;
    switch (which) {
        case 1: exponent = (a2 - a1) / 2.0 + 1.0; break;
        case 2: exponent = a2 - a1 + 1.0; break;
        case 3: exponent = a2 + 1.0; break;
        default: throw DomainError("kappa: which must be 1, 2 or 3");
    }
    return 2.0 * power_integral(exponent, p.d_min, p.d_max) / annulus_area_factor(p);
}

double g_bar(const SystemParams& p, double n, double m, double lambda, const Tolerance& tol) {
    const double x = pi * lambda * p.serve_radius * p.serve_radius;
    const double q = array_gain_ratio(n, m);
    const double a3 = p.alpha_ris_ue;
    const double pl = pi * lambda;
    double first = 0.0;
    if (m > 0.0)
        first = kappa(1, p) * std::sqrt(pi * p.beta_ref) * m *
                lower_incomplete_gamma(a3 / 4.0 + 1.0, x, tol) / (std::pow(pl, a3 / 4.0) * q);
    const double second =
        kappa(2, p) * lower_incomplete_gamma(a3 / 2.0 + 1.0, x, tol) / (std::pow(pl, a3 / 2.0) * n * q);
    return (first + second) / (p.beta_ref * ln2);
}

double g_bar_low(const SystemParams& p, double n, double m, double lambda, const Tolerance& tol) {
    const double x = pi * lambda * p.serve_radius * p.serve_radius;
    const double q = array_gain_ratio(n, m);
    const double a3 = p.alpha_ris_ue;
    return kappa(3, p) * lower_incomplete_gamma(a3 / 2.0 + 1.0, x, tol) /
           (p.beta_ref * ln2 * p.snr() * p.beta_ref * std::pow(pi * lambda, a3 / 2.0) * n * q);
}

SpatialRateBreakdown spatial_rate_integral(const SystemParams& p, const DeploymentParams& dep,
                                           double rho, const Tolerance& tol) {
    check_inputs(p, dep, rho);
    tol.validate();
    const double m = mu(rho);
    const double n = dep.elements_per_ris;
    const double lambda = dep.density;
    const double C = p.serve_radius;
    const double q = array_gain_ratio(n, m);
    const double area = annulus_area_factor(p);
    const double a1 = p.alpha_direct, a2 = p.alpha_bs_ris, a3 = p.alpha_ris_ue;
    const double beta = p.beta_ref;
    const double inv_snr_beta = 1.0 / (p.snr() * beta);
    const double c1 = std::sqrt(pi / beta) * m / q;
    const double c2 = 1.0 / (beta * n * q);

    SpatialRateBreakdown b = common_terms(p, dep, m, tol);
    b.method = Method::quadrature;

    const unsigned depth = 15;
    const double target = tol.rel_tol / 10.0;
    double inner_err = 0.0;

    auto inner = [&](double d) {
        const double dh = std::pow(d, (a2 - a1) / 2.0);
        const double dd = std::pow(d, a2 - a1);
        const double dl = std::pow(d, a2);
        auto f = [&](double r) {
            if (r <= 0.0) return 0.0;
            const double rh = std::pow(r, a3 / 2.0);
            const double x = c1 * dh * rh + c2 * rh * rh * (dd + inv_snr_beta * dl);
            return std::log1p(x) / ln2 * nearest_ris_pdf(lambda, r);
        };
        double err = 0.0;
        double v = Kronrod::integrate(f, 0.0, C, depth, target, &err);
        inner_err = std::max(inner_err, err);
        return v * 2.0 * d / area;
    };
    double outer_err = 0.0;
    const double g = Kronrod::integrate(inner, p.d_min, p.d_max, depth, target, &outer_err);

    auto direct = [&](double d) { return std::log2(1.0 + p.direct_snr(d)) * 2.0 * d / area; };
    double direct_err = 0.0;
    const double no_ris = std::exp(-pi * lambda * C * C);
    const double r2 = no_ris * Kronrod::integrate(direct, p.d_min, p.d_max, depth, target, &direct_err);

    b.g_bar_term = g;
    b.direct_term = r2;
    b.total = b.resum();
    b.error_estimate = outer_err + inner_err + no_ris * direct_err;
    // G and the geometry term cancel at low SNR, so scale by the integrated magnitude
    const double scale = std::max({std::abs(b.total), std::abs(g), std::abs(r2)});
    const double allowed = std::max(tol.abs_tol, tol.rel_tol * scale);
    if (!(b.error_estimate <= allowed))
        throw NumericError("spatial_rate_integral: quadrature did not reach tolerance", b.total,
                           b.error_estimate);
    return b;
}

SpatialRateBreakdown spatial_rate_high_snr(const SystemParams& p, const DeploymentParams& dep,
                                           double rho, const Tolerance& tol) {
    check_inputs(p, dep, rho);
    const double m = mu(rho);
    const double n = dep.elements_per_ris;
    SpatialRateBreakdown b = common_terms(p, dep, m, tol);
    b.g_bar_term = g_bar(p, n, m, dep.density, tol);
    const double no_ris = 1.0 - b.assoc_probability;
    b.direct_term = no_ris * (std::log2(p.snr() * p.beta_ref) -
                              p.alpha_direct * expected_log2_d(p.d_min, p.d_max));
    b.total = b.resum();
    if (p.direct_snr(p.d_max) < 10.0)
        b.warnings.push_back("cell-edge direct SNR below 10: high-SNR form outside its regime");
    soft_checks_n(b, n);
    return b;
}

SpatialRateBreakdown spatial_rate_low_snr(const SystemParams& p, const DeploymentParams& dep,
                                          double rho, const Tolerance& tol) {
    check_inputs(p, dep, rho);
    const double m = mu(rho);
    const double n = dep.elements_per_ris;
    SpatialRateBreakdown b = common_terms(p, dep, m, tol);
    b.g_bar_term = g_bar(p, n, m, dep.density, tol);
    b.g_bar_low_term = g_bar_low(p, n, m, dep.density, tol);
    const double no_ris = 1.0 - b.assoc_probability;
    b.direct_term = no_ris / ln2 * p.snr() * p.beta_ref * 2.0 *
                    power_integral(1.0 - p.alpha_direct, p.d_min, p.d_max) / annulus_area_factor(p);
    b.total = b.resum();
    if (p.direct_snr(p.d_min) > 0.5)
        b.warnings.push_back("direct SNR above 0.5 at D1: low-SNR form outside its regime");
    soft_checks_n(b, n);
    return b;
}

SpatialMethod parse_spatial_method(const std::string& s) {
    if (s == "high") return SpatialMethod::high;
    if (s == "low") return SpatialMethod::low;
    if (s == "integral") return SpatialMethod::integral;
    if (s == "auto") return SpatialMethod::automatic;
    throw DomainError("unknown regime '" + s + "' (expected high, low, auto or integral)");
}

const char* to_string(SpatialMethod m) {
    switch (m) {
        case SpatialMethod::high: return "high";
        case SpatialMethod::low: return "low";
        case SpatialMethod::integral: return "integral";
        case SpatialMethod::automatic: return "auto";
    }
    return "?";
}

SpatialMethod resolve_spatial_method(const SystemParams& p, SpatialMethod requested) {
    if (requested != SpatialMethod::automatic) return requested;
    const double s = p.direct_snr(p.d_max);
    if (s >= 10.0) return SpatialMethod::high;
    if (s <= 0.1) return SpatialMethod::low;
    return SpatialMethod::integral;
}

SpatialRateBreakdown spatial_rate(const SystemParams& p, const DeploymentParams& dep, double rho,
                                  SpatialMethod method, const Tolerance& tol) {
    switch (resolve_spatial_method(p, method)) {
        case SpatialMethod::high: return spatial_rate_high_snr(p, dep, rho, tol);
        case SpatialMethod::low: return spatial_rate_low_snr(p, dep, rho, tol);
        default: return spatial_rate_integral(p, dep, rho, tol);
    }
}

}  // namespace risnet
