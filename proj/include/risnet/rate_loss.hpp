#pragma once

namespace risnet {

// Spatial rate loss against ideal phases: H(N, pi/4) - H(N, mu(rho)).
double rate_loss(double n_elements, double rho, double lambda, double C);

// Large-N limit (1 - e^-x) log2(pi^2 / (16 mu^2)); rho must give mu > 0.
double rate_loss_asymptote(double rho, double lambda, double C);

enum class LossRegime { saturating, log_growth, mixed };

const char* to_string(LossRegime r);

struct RateLossClass {
    LossRegime regime;
    double value;
};

// Compares N with 1/mu^2 - 1: saturating above 10x, log growth below 0.1x.
RateLossClass rate_loss_regime(double n_elements, double rho, double lambda, double C);

}  // namespace risnet
