#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risnet/params.hpp"
#include "risnet/special_math.hpp"

namespace risnet {

struct SpatialRateBreakdown {
    double total = 0.0;
    double assoc_probability = 0.0;
    // (1 - e^-x) [log2(P beta^2 / sigma^2) - alpha_2 E log2 d] - alpha_3 E[log2 r; r <= C]
    double geometry_term = 0.0;
    double h_term = 0.0;
    // G(N, mu) for the quadrature form, its linearization otherwise
    double g_bar_term = 0.0;
    std::optional<double> g_bar_low_term;
    // direct-link contribution when no RIS lies within C
    double direct_term = 0.0;
    Method method = Method::closed_form;
    double error_estimate = 0.0;
    std::vector<std::string> warnings;

    double resum() const;
};

double nearest_ris_pdf(double lambda, double r);
double association_probability(double lambda, double C);

// E[ln d] for d with density 2d / (D2^2 - D1^2) on [D1, D2].
double expected_ln_d(double D1, double D2);
double expected_log2_d(double D1, double D2);

// Partial expectation E[log2 r; r <= C] for the nearest-RIS distance.
double expected_log2_r_truncated(double lambda, double C, const Tolerance& tol = {});

// H(N, mu) = log2[N (mu^2 N + 1 - mu^2)] (1 - e^-x)
double h_term(double n, double m, double lambda, double C);

double kappa(int which, const SystemParams& p);

// Linearized G: kappa_1 / kappa_2 terms, and the noise term kept at low SNR.
double g_bar(const SystemParams& p, double n, double m, double lambda, const Tolerance& tol = {});
double g_bar_low(const SystemParams& p, double n, double m, double lambda,
                 const Tolerance& tol = {});

// Ratio mu^2 N + 1 - mu^2 shared by the closed forms.
inline double array_gain_ratio(double n, double m) { return m * m * n + 1.0 - m * m; }

SpatialRateBreakdown spatial_rate_integral(const SystemParams& p, const DeploymentParams& dep,
                                           double rho, const Tolerance& tol = {});
SpatialRateBreakdown spatial_rate_high_snr(const SystemParams& p, const DeploymentParams& dep,
                                           double rho, const Tolerance& tol = {});
SpatialRateBreakdown spatial_rate_low_snr(const SystemParams& p, const DeploymentParams& dep,
                                          double rho, const Tolerance& tol = {});

enum class SpatialMethod { high, low, integral, automatic };

SpatialMethod parse_spatial_method(const std::string& s);
const char* to_string(SpatialMethod m);

// Resolves automatic by (P / sigma^2) beta D2^-alpha_1: >= 10 high, <= 0.1 low, else integral.
SpatialMethod resolve_spatial_method(const SystemParams& p, SpatialMethod requested);

SpatialRateBreakdown spatial_rate(const SystemParams& p, const DeploymentParams& dep, double rho,
                                  SpatialMethod method, const Tolerance& tol = {});

}  // namespace risnet
