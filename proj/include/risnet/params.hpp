#pragma once

#include <optional>

namespace risnet {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

struct SystemParams {
    double tx_power;       // P, watts
    double noise_power;    // sigma^2, watts
    double beta_ref;       // beta, linear gain at the reference distance
    double alpha_direct;   // alpha_1, BS-UE
    double alpha_bs_ris;   // alpha_2, BS-RIS
    double alpha_ris_ue;   // alpha_3, RIS-UE
    double d_min;          // D_1, m
    double d_max;          // D_2, m
    double serve_radius;   // C, m

    void validate() const;
    double snr() const { return tx_power / noise_power; }
    // (P / sigma^2) beta d^-alpha_1 at d
    double direct_snr(double d) const;
};

// Defaults from the evaluation setup; tx_power and serve_radius are placeholders.
SystemParams default_params(double tx_power_dbm = 10.0);

struct LinkGeometry {
    double d;  // BS-UE
    double l;  // BS-RIS
    double r;  // RIS-UE

    void validate() const;
};

struct PathGains {
    double direct;   // beta_d
    double bs_ris;   // beta_l
    double ris_ue;   // beta_r
};

PathGains path_gains(const SystemParams& p, const LinkGeometry& g);

struct DeploymentParams {
    double density;           // lambda, RIS per m^2
    double elements_per_ris;  // N
    std::optional<double> element_budget;  // eta

    void validate() const;
    static DeploymentParams from_budget(double eta, double density);
};

enum class Method { closed_form, quadrature, monte_carlo };

const char* to_string(Method m);

struct RateEstimate {
    double value = 0.0;
    Method method = Method::closed_form;
    std::optional<double> std_error;
};

}  // namespace risnet
