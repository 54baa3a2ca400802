#include "risnet/rate_bounds.hpp"

#include <cmath>
#include <numbers>

#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"

namespace risnet {

RateEstimate rate_bound_ris(const SystemParams& p, const LinkGeometry& g, double n_elements,
                            double rho) {
    g.validate();
    if (!(n_elements >= 1.0)) throw DomainError("rate_bound_ris: n_elements must be >= 1");
    const double m = mu(rho);
    const double m2 = m * m;
    const double N = n_elements;
    const auto b = path_gains(p, g);
    const double cascade = b.bs_ris * b.ris_ue;
    const double power = cascade * m2 * N * N + cascade * (1.0 - m2) * N +
                         std::sqrt(cascade * b.direct * std::numbers::pi) * m * N + b.direct;
    return {std::log2(1.0 + p.snr() * power), Method::closed_form, std::nullopt};
}

RateEstimate rate_bound_direct(const SystemParams& p, double d) {
    if (!(d > 0.0)) throw DomainError("rate_bound_direct: d must be positive");
    return {std::log2(1.0 + p.direct_snr(d)), Method::closed_form, std::nullopt};
}

AsymptoticRate rate_asymptotic(const SystemParams& p, const LinkGeometry& g, double n_elements,
                               double rho) {
    g.validate();
    if (!(n_elements >= 1.0)) throw DomainError("rate_asymptotic: n_elements must be >= 1");
    const double m = mu(rho);
    if (!(m > 0.0)) throw DomainError("rate_asymptotic: degenerate for mu = 0 (rho = 1)");
    const auto b = path_gains(p, g);
    const double N = n_elements;
    const double xi = m * m * N * N * p.snr();
    const double threshold = std::max(
        1.0 / (m * m) - 1.0, std::sqrt(std::numbers::pi * b.direct / (b.bs_ris * b.ris_ue)) / m);
    AsymptoticRate out;
    out.rate = {std::log2(1.0 + b.bs_ris * b.ris_ue * xi), Method::closed_form, std::nullopt};
    out.equivalent_snr = xi;
    out.n_threshold = threshold;
    out.precondition_met = N >= 10.0 * threshold;
    return out;
}

Compensation compensation(double rho_from, double rho_to) {
    if (!(rho_from >= 0.0 && rho_from < 1.0) || !(rho_to >= 0.0 && rho_to < 1.0))
        throw DomainError("compensation: rho values must lie in [0, 1)");
    const double to = mu(rho_to);
    if (!(to > 0.0)) throw DomainError("compensation: mu(rho_to) must be positive");
    const double factor = mu(rho_from) / to;
    return {factor, 20.0 * std::log10(factor)};
}

}  // namespace risnet
