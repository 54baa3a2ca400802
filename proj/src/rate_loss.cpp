#include "risnet/rate_loss.hpp"

#include <cmath>
#include <numbers>

#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/spatial_rate.hpp"

namespace risnet {

namespace {
constexpr double ideal_mu2 = std::numbers::pi * std::numbers::pi / 16.0;
}

double rate_loss(double n_elements, double rho, double lambda, double C) {
    if (!(n_elements >= 1.0)) throw DomainError("rate_loss: n_elements must be >= 1");
    const double m = mu(rho);
    const double ideal = ideal_mu2 * n_elements + 1.0 - ideal_mu2;
    const double actual = array_gain_ratio(n_elements, m);
    return association_probability(lambda, C) * std::log2(ideal / actual);
}

double rate_loss_asymptote(double rho, double lambda, double C) {
    const double m = mu(rho);
    if (!(m > 0.0)) throw DomainError("rate_loss_asymptote: no saturation for mu = 0");
    return association_probability(lambda, C) * std::log2(ideal_mu2 / (m * m));
}

const char* to_string(LossRegime r) {
    switch (r) {
        case LossRegime::saturating: return "saturating";
        case LossRegime::log_growth: return "log_growth";
        case LossRegime::mixed: return "mixed";
    }
    return "?";
}

RateLossClass rate_loss_regime(double n_elements, double rho, double lambda, double C) {
    const double value = rate_loss(n_elements, rho, lambda, C);
    const double m = mu(rho);
    if (m == 0.0) return {LossRegime::log_growth, value};
    const double knee = 1.0 / (m * m) - 1.0;
    if (n_elements >= 10.0 * knee) return {LossRegime::saturating, value};
    if (n_elements <= 0.1 * knee) return {LossRegime::log_growth, value};
    return {LossRegime::mixed, value};
}

}  // namespace risnet
