#include "risnet/params.hpp"

#include <cmath>

#include "risnet/errors.hpp"

namespace risnet {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void SystemParams::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(tx_power)) throw DomainError("tx_power must be positive");
    if (!positive(noise_power)) throw DomainError("noise_power must be positive");
    if (!positive(beta_ref)) throw DomainError("beta_ref must be positive");
    if (!(alpha_direct >= 2.0)) throw DomainError("alpha_direct must be >= 2");
    if (!(alpha_bs_ris >= 2.0)) throw DomainError("alpha_bs_ris must be >= 2");
    if (!(alpha_ris_ue >= 2.0 && alpha_ris_ue <= 4.0))
        throw DomainError("alpha_ris_ue must lie in [2, 4]");
    if (!positive(d_min) || !positive(d_max) || !(d_min < d_max))
        throw DomainError("need 0 < d_min < d_max");
    if (!positive(serve_radius)) throw DomainError("serve_radius must be positive");
}

double SystemParams::direct_snr(double d) const {
    return snr() * beta_ref * std::pow(d, -alpha_direct);
}

SystemParams default_params(double tx_power_dbm) {
    return SystemParams{dbm_to_watts(tx_power_dbm), dbm_to_watts(-80.0), db_to_linear(-30.0),
                        3.0, 2.0, 2.5, 180.0, 220.0, 10.0};
}

void LinkGeometry::validate() const {
    if (!(d > 0.0) || !(l > 0.0) || !(r > 0.0))
        throw DomainError("LinkGeometry: distances must be positive");
}

PathGains path_gains(const SystemParams& p, const LinkGeometry& g) {
    return {p.beta_ref * std::pow(g.d, -p.alpha_direct), p.beta_ref * std::pow(g.l, -p.alpha_bs_ris),
            p.beta_ref * std::pow(g.r, -p.alpha_ris_ue)};
}

void DeploymentParams::validate() const {
    if (!(density > 0.0) || !std::isfinite(density)) throw DomainError("density must be positive");
    if (!(elements_per_ris >= 1.0)) throw DomainError("elements_per_ris must be >= 1");
    if (element_budget) {
        if (!(*element_budget > 0.0)) throw DomainError("element_budget must be positive");
        if (std::abs(density * elements_per_ris - *element_budget) / *element_budget > 1e-9)
            throw DomainError("density * elements_per_ris must equal element_budget");
    }
}

DeploymentParams DeploymentParams::from_budget(double eta, double density) {
    DeploymentParams d{density, eta / density, eta};
    d.validate();
    return d;
}

const char* to_string(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

}  // namespace risnet
