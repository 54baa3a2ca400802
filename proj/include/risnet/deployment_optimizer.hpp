#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "risnet/params.hpp"
#include "risnet/special_math.hpp"

namespace risnet {

enum class SnrRegime { high, low };
enum class PhaseRegime { bounded, random };

struct OptimizerRegime {
    SnrRegime snr = SnrRegime::high;
    PhaseRegime phase = PhaseRegime::bounded;

    static OptimizerRegime from(SnrRegime snr, double rho);
};

enum class Branch { lemma1, lemma2, lemma3, bisection, boundary_eta, grid };

const char* to_string(Branch b);
const char* to_string(SnrRegime s);

struct DeploymentOptimum {
    double lambda_star = 0.0;      // eta / n_star, so that n_star = ceil(eta / lambda_star)
    std::int64_t n_star = 1;
    double objective = 0.0;        // F at lambda_star
    Branch branch = Branch::bisection;
    double d_constant = 0.0;
    double lambda_continuous = 0.0;  // stationary point or closed-form value before rounding
    bool floor_scores_higher = false;
    // closed-form stationary point, kept even when another candidate scores higher
    std::optional<double> closed_form_lambda;
};

double d_constant(const SystemParams& p, SnrRegime snr);

// Objective F(eta / lambda, lambda) with the lambda-independent offsets removed.
double objective_f(double lambda, double eta, const SystemParams& p, double rho, SnrRegime snr,
                   const Tolerance& tol = {});

// dF/dlambda = e^-x J / (lambda ln 2), x = pi lambda C^2.
double j_function(double lambda, double eta, const SystemParams& p, double rho, SnrRegime snr,
                  const Tolerance& tol = {});

// e^-x J, finite for any lambda; used for root finding.
double j_function_scaled(double lambda, double eta, const SystemParams& p, double rho,
                         SnrRegime snr, const Tolerance& tol = {});

// Lower bound on eta above which F is nondecreasing on (0, eta] (random phase, alpha_3 in (2, 4]).
double single_element_eta_threshold(const SystemParams& p, SnrRegime snr);

DeploymentOptimum optimize_density(double eta, const SystemParams& p, double rho, SnrRegime snr,
                                   const Tolerance& tol = {});

// Exhaustive search of F(N, eta / N) over N = 1..n_max; smallest N wins ties.
DeploymentOptimum grid_search_oracle(double eta, const SystemParams& p, double rho, SnrRegime snr,
                                     int n_max, const Tolerance& tol = {});

}  // namespace risnet
