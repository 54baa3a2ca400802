#include "risnet/deployment_optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/spatial_rate.hpp"

namespace risnet {

namespace {

constexpr double ln2 = std::numbers::ln2;
constexpr double pi = std::numbers::pi;

void check_common(double eta, const SystemParams& p, double rho) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("element budget eta must be positive");
    p.validate();
    mu(rho);
}

void check_lambda(double lambda, double eta) {
    if (!(lambda > 0.0) || !(lambda <= eta * (1.0 + 1e-12)))
        throw DomainError("lambda must lie in (0, eta]");
}

std::int64_t ceil_count(double v) {
    // absorb rounding noise when eta / lambda is an integer up to a few ulps
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(v * (1.0 - 1e-12))));
}

double lambda_for_count(double eta, std::int64_t n) {
    const double nd = static_cast<double>(n);
    double lambda = eta / nd;
    while (std::ceil(eta / lambda) > nd)
        lambda = std::nextafter(lambda, std::numeric_limits<double>::infinity());
    // a few ulps up, prefer a value whose product with eta / lambda returns eta exactly
    double probe = lambda;
    for (int i = 0; i < 16 && probe <= eta; ++i) {
        if (probe * (eta / probe) == eta && std::ceil(eta / probe) == nd) return probe;
        probe = std::nextafter(probe, std::numeric_limits<double>::infinity());
    }
    return std::min(lambda, eta);
}

}  // namespace

OptimizerRegime OptimizerRegime::from(SnrRegime snr, double rho) {
    mu(rho);
    return {snr, rho == 1.0 ? PhaseRegime::random : PhaseRegime::bounded};
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::lemma1: return "lemma1";
        case Branch::lemma2: return "lemma2";
        case Branch::lemma3: return "lemma3";
        case Branch::bisection: return "bisection";
        case Branch::boundary_eta: return "boundary_eta";
        case Branch::grid: return "grid";
    }
    return "?";
}

const char* to_string(SnrRegime s) { return s == SnrRegime::high ? "high" : "low"; }

double d_constant(const SystemParams& p, SnrRegime snr) {
    p.validate();
    const double eld = expected_log2_d(p.d_min, p.d_max);
    if (snr == SnrRegime::high) return (p.alpha_direct - p.alpha_bs_ris) * eld;
    const double area = p.d_max * p.d_max - p.d_min * p.d_min;
    return std::log2(p.snr() * p.beta_ref * p.beta_ref) - p.alpha_bs_ris * eld -
           p.snr() * p.beta_ref / ln2 * 2.0 * power_integral(1.0 - p.alpha_direct, p.d_min, p.d_max) /
               area;
}

double objective_f(double lambda, double eta, const SystemParams& p, double rho, SnrRegime snr,
                   const Tolerance& tol) {
    check_common(eta, p, rho);
    check_lambda(lambda, eta);
    const double m = mu(rho);
    const double C = p.serve_radius;
    const double n = eta / lambda;
    const double x = pi * lambda * C * C;
    const double e = std::exp(-x);
    const double ei = x < 700.0 ? exp_integral_ei(-x, tol) : 0.0;
    const double r_group = -p.alpha_ris_ue / (2.0 * ln2) * (ei - e * std::log(C * C) - std::log(pi * lambda));
    const double h = h_term(n, m, lambda, C);
    const double D = d_constant(p, snr);
    if (snr == SnrRegime::high) return r_group - e * (D + std::log2(p.beta_ref)) + h;
    return r_group - e * D + h + g_bar_low(p, n, m, lambda, tol);
}

double j_function_scaled(double lambda, double eta, const SystemParams& p, double rho,
                         SnrRegime snr, const Tolerance& tol) {
    check_common(eta, p, rho);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const double m = mu(rho);
    const double m2 = m * m;
    const double C = p.serve_radius;
    const double a3 = p.alpha_ris_ue;
    const double x = pi * lambda * C * C;
    const double n = eta / lambda;
    const double q = array_gain_ratio(n, m);
    const double B = snr == SnrRegime::high ? p.beta_ref : 1.0;
    const double D = d_constant(p, snr);
    const double log_arg = D * ln2 - a3 * std::log(C) + std::log(B) + std::log(n) + std::log(q);
    double j = x * std::exp(-x) * log_arg + (a3 / 2.0 - 2.0 + (1.0 - m2) / q) * (-std::expm1(-x));
    if (snr == SnrRegime::low) {
        const double w = m2 * eta * eta + (1.0 - m2) * eta * lambda;
        const double g = lower_incomplete_gamma(a3 / 2.0 + 1.0, x, tol);
        const double pref = kappa(3, p) * std::pow(lambda, 2.0 - a3 / 2.0) /
                            (p.snr() * p.beta_ref * p.beta_ref * std::pow(pi, a3 / 2.0) * w);
        j += pref * (std::exp(-x) * std::pow(x, a3 / 2.0 + 1.0) +
                     g * (2.0 - a3 / 2.0 - (1.0 - m2) * eta * lambda / w));
    }
    return j;
}

double j_function(double lambda, double eta, const SystemParams& p, double rho, SnrRegime snr,
                  const Tolerance& tol) {
    const double x = pi * lambda * p.serve_radius * p.serve_radius;
    return j_function_scaled(lambda, eta, p, rho, snr, tol) * std::exp(x);
}

double single_element_eta_threshold(const SystemParams& p, SnrRegime snr) {
    const double a3 = p.alpha_ris_ue;
    if (!(a3 > 2.0)) return std::numeric_limits<double>::infinity();
    const double D = d_constant(p, snr);
    return 2.0 * std::pow(p.serve_radius, a3 - 2.0) /
           ((a3 - 2.0) * pi * std::numbers::e * p.beta_ref * std::exp2(D));
}

DeploymentOptimum optimize_density(double eta, const SystemParams& p, double rho, SnrRegime snr,
                                   const Tolerance& tol) {
    check_common(eta, p, rho);
    tol.validate();
    const OptimizerRegime regime = OptimizerRegime::from(snr, rho);
    const double m = mu(rho);
    const double C = p.serve_radius;
    const double a3 = p.alpha_ris_ue;
    const double D = d_constant(p, snr);
    const bool high = snr == SnrRegime::high;
    const bool random = regime.phase == PhaseRegime::random;
    auto F = [&](double lambda) { return objective_f(lambda, eta, p, rho, snr, tol); };

    DeploymentOptimum out;
    out.d_constant = D;

    // closed-form stationary points are local; the exact F can still peak at lambda = eta
    std::optional<double> closed;
    Branch closed_branch = Branch::bisection;
    if (high && !random && a3 == 4.0) {
        closed_branch = Branch::lemma1;
        closed = std::min(m * eta / (C * C) * std::sqrt(std::exp2(D) * p.beta_ref), eta);
    } else if (high && random && a3 == 2.0) {
        closed_branch = Branch::lemma2;
        closed = std::min(std::exp2(D) / (C * C) * p.beta_ref * eta, eta);
    }
    out.closed_form_lambda = closed;

    if (high && random && a3 > 2.0 && eta >= single_element_eta_threshold(p, snr)) {
        out.branch = Branch::lemma3;
        out.lambda_continuous = eta;
    } else {
        // coarse log scan for downward sign changes of J, then bisection on each
        constexpr int scan = 64;
        std::vector<double> grid(scan), sign(scan);
        for (int i = 0; i < scan; ++i) {
            grid[i] = eta * std::pow(10.0, -12.0 + 12.0 * i / (scan - 1));
            sign[i] = j_function_scaled(grid[i], eta, p, rho, snr, tol);
        }
        grid[scan - 1] = eta;
        std::vector<double> candidates{eta};
        if (sign[0] < 0.0) candidates.push_back(grid[0]);
        std::vector<double> roots;
        for (int i = 0; i + 1 < scan; ++i) {
            if (!(sign[i] > 0.0 && sign[i + 1] <= 0.0)) continue;
            double a = grid[i], b = grid[i + 1];
            int it = 0;
            while (b / a - 1.0 > tol.rel_tol) {
                if (++it > tol.max_iterations)
                    throw NumericError("optimize_density: bisection did not converge", std::sqrt(a * b),
                                       b - a);
                double c = std::sqrt(a * b);
                if (j_function_scaled(c, eta, p, rho, snr, tol) > 0.0)
                    a = c;
                else
                    b = c;
            }
            roots.push_back(std::sqrt(a * b));
            candidates.push_back(roots.back());
        }
        double best = candidates.front();
        double best_f = F(best);
        for (double c : candidates) {
            double f = F(c);
            if (f > best_f) {
                best = c;
                best_f = f;
            }
        }
        out.lambda_continuous = best;
        out.branch = best == eta ? Branch::boundary_eta : Branch::bisection;
        if (closed && F(*closed) >= best_f) {
            out.lambda_continuous = *closed;
            out.branch = closed_branch;
        }
    }

    // integer array size: ceil by default, floor when it scores strictly higher
    const double n_cont = eta / out.lambda_continuous;
    std::int64_t n = ceil_count(n_cont);
    const std::int64_t n_floor = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(n_cont)));
    double f_ceil = F(lambda_for_count(eta, n));
    if (n_floor < n) {
        double f_floor = F(lambda_for_count(eta, n_floor));
        if (f_floor > f_ceil) {
            out.floor_scores_higher = true;
            n = n_floor;
            f_ceil = f_floor;
        }
    }
    out.n_star = n;
    out.lambda_star = lambda_for_count(eta, n);
    out.objective = F(out.lambda_star);
    return out;
}

DeploymentOptimum grid_search_oracle(double eta, const SystemParams& p, double rho, SnrRegime snr,
                                     int n_max, const Tolerance& tol) {
    check_common(eta, p, rho);
    if (n_max < 1) throw DomainError("grid_search_oracle: n_max must be >= 1");
    DeploymentOptimum out;
    out.branch = Branch::grid;
    out.d_constant = d_constant(p, snr);
    double best_f = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        const double lambda = lambda_for_count(eta, n);
        const double f = objective_f(lambda, eta, p, rho, snr, tol);
        if (f > best_f) {
            best_f = f;
            out.n_star = n;
            out.lambda_star = lambda;
        }
    }
    out.objective = best_f;
    out.lambda_continuous = out.lambda_star;
    return out;
}

}  // namespace risnet
