#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "risnet/params.hpp"
#include "risnet/random_stream.hpp"

namespace risnet {

enum class WindowPolicy { direct_nearest, full_hppp };

struct McConfig {
    std::int64_t trials = 100000;
    std::uint64_t master_seed = 1;
    WindowPolicy window = WindowPolicy::direct_nearest;
    // full_hppp only; 0 selects max(3C, radius with e^{-pi lambda R^2} < 1e-9)
    double disk_radius = 0.0;
    // 0 selects the hardware concurrency; results do not depend on this
    int workers = 0;

    void validate() const;
};

struct McMean {
    double mean = 0.0;
    double std_error = 0.0;
};

// Runs f once per trial on its own substream and reduces k outputs per trial in a
// fixed block order, so the result is identical for any worker count.
std::vector<McMean> run_trials(const McConfig& mc, int outputs,
                               const std::function<void(RandomStream&, double*)>& f);

struct FadingDraw {
    std::complex<double> direct;
    std::vector<std::complex<double>> bs_ris;
    std::vector<std::complex<double>> ris_ue;
    std::vector<double> phase_errors;
};

FadingDraw draw_fading(int n_elements, double rho, RandomStream& stream);

// z = sum_n |g_n| |h_n| e^{j tau_n}
std::complex<double> reflection_sum(const FadingDraw& f);

double sample_cell_edge_distance(double D1, double D2, RandomStream& stream);
double sample_nearest_distance(double lambda, RandomStream& stream);
std::optional<double> sample_hppp_nearest(double lambda, double disk_radius, RandomStream& stream);
double auto_disk_radius(double lambda, double C);

// Exact ergodic rate at a fixed location; n_elements = 0 leaves only the direct link.
RateEstimate simulate_fixed_rate(const SystemParams& p, const LinkGeometry& g, int n_elements,
                                 double rho, const McConfig& mc);

// Average of the per-location bounds over sampled (d, r), with l = d.
RateEstimate simulate_spatial_bound(const SystemParams& p, const DeploymentParams& dep, double rho,
                                    const McConfig& mc);

// Same location sampling with one exact fading draw per trial.
RateEstimate simulate_spatial_exact(const SystemParams& p, const DeploymentParams& dep, double rho,
                                    const McConfig& mc);

struct ReflectionMoments {
    double mean_re_z;
    double mean_abs_z_sq;
    double stderr_re_z;
    double stderr_abs_z_sq;
};

ReflectionMoments estimate_reflection_moments(int n_elements, double rho, const McConfig& mc);

// Empirical E{cos(tau1 - tau2)} over independent pairs.
McMean estimate_cos_diff(double rho, const McConfig& mc);

// Two-sample Kolmogorov-Smirnov statistic and its asymptotic critical value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

}  // namespace risnet
