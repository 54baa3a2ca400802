#pragma once

#include "risnet/params.hpp"

namespace risnet {

// Upper bound on the ergodic rate with the RIS link active. n_elements is real so
// that scaled arrays (e.g. N * pi / 2) can be compared directly.
RateEstimate rate_bound_ris(const SystemParams& p, const LinkGeometry& g, double n_elements,
                            double rho);

// Upper bound on the direct-link-only ergodic rate at distance d.
RateEstimate rate_bound_direct(const SystemParams& p, double d);

struct AsymptoticRate {
    RateEstimate rate;
    double equivalent_snr;   // xi = mu^2 N^2 P / sigma^2
    double n_threshold;      // max{1/mu^2 - 1, (1/mu) sqrt(pi beta_d / (beta_l beta_r))}
    bool precondition_met;   // N >= 10 * n_threshold
};

// Large-N asymptote log2(1 + beta_l beta_r xi).
AsymptoticRate rate_asymptotic(const SystemParams& p, const LinkGeometry& g, double n_elements,
                               double rho);

struct Compensation {
    double element_factor;
    double power_delta_db;
};

// Array growth or power boost that restores the asymptote after rho_from -> rho_to.
Compensation compensation(double rho_from, double rho_to);

}  // namespace risnet
