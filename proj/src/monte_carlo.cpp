#include "risnet/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/rate_bounds.hpp"

namespace risnet {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::int64_t block_size = 1024;

// Running mean and sum of squared deviations; merged in a fixed order.
struct Moments {
    double n = 0.0, mean = 0.0, m2 = 0.0;

    void add(double x) {
        n += 1.0;
        double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        double total = n + o.n;
        double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }
};

int worker_count(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double rate_from_draw(const SystemParams& p, const PathGains& b, const FadingDraw& f) {
    std::complex<double> s = std::sqrt(b.direct) * std::abs(f.direct);
    if (!f.bs_ris.empty()) s += std::sqrt(b.bs_ris * b.ris_ue) * reflection_sum(f);
    return std::log2(1.0 + p.snr() * std::norm(s));
}

// Nearest-RIS distance under the configured window; nullopt when none exists.
std::optional<double> draw_serving_distance(const McConfig& mc, double lambda, double C,
                                            RandomStream& rs) {
    if (mc.window == WindowPolicy::direct_nearest) return sample_nearest_distance(lambda, rs);
    double radius = mc.disk_radius > 0.0 ? mc.disk_radius : auto_disk_radius(lambda, C);
    return sample_hppp_nearest(lambda, radius, rs);
}

double checked_element_count(double n) {
    double r = std::round(n);
    if (std::abs(n - r) > 1e-9 || r < 0.0)
        throw DomainError("fading simulation needs an integer number of elements");
    return r;
}

}  // namespace

void McConfig::validate() const {
    if (trials < 1) throw DomainError("McConfig: trials must be >= 1");
    if (workers < 0) throw DomainError("McConfig: workers must be >= 0");
    if (disk_radius < 0.0) throw DomainError("McConfig: disk_radius must be nonnegative");
}

std::vector<McMean> run_trials(const McConfig& mc, int outputs,
                               const std::function<void(RandomStream&, double*)>& f) {
    mc.validate();
    const std::int64_t blocks = (mc.trials + block_size - 1) / block_size;
    std::vector<std::vector<Moments>> per_block(static_cast<std::size_t>(blocks),
                                                std::vector<Moments>(outputs));
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        std::vector<double> out(static_cast<std::size_t>(outputs));
        for (std::int64_t blk = next++; blk < blocks; blk = next++) {
            auto& acc = per_block[static_cast<std::size_t>(blk)];
            const std::int64_t end = std::min(mc.trials, (blk + 1) * block_size);
            for (std::int64_t t = blk * block_size; t < end; ++t) {
                RandomStream rs = RandomStream::substream(mc.master_seed, static_cast<std::uint64_t>(t));
                f(rs, out.data());
                for (int k = 0; k < outputs; ++k) acc[k].add(out[k]);
            }
        }
    };
    const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(mc.workers), blocks));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::vector<Moments> total(static_cast<std::size_t>(outputs));
    for (const auto& blk : per_block)
        for (int k = 0; k < outputs; ++k) total[k].merge(blk[k]);
    std::vector<McMean> result(static_cast<std::size_t>(outputs));
    for (int k = 0; k < outputs; ++k) {
        result[k].mean = total[k].mean;
        result[k].std_error =
            total[k].n > 1.0 ? std::sqrt(total[k].m2 / (total[k].n - 1.0) / total[k].n) : 0.0;
    }
    return result;
}

FadingDraw draw_fading(int n_elements, double rho, RandomStream& stream) {
    if (n_elements < 0) throw DomainError("draw_fading: n_elements must be nonnegative");
    FadingDraw f;
    f.direct = stream.complex_gaussian();
    f.bs_ris.resize(static_cast<std::size_t>(n_elements));
    f.ris_ue.resize(static_cast<std::size_t>(n_elements));
    for (int n = 0; n < n_elements; ++n) {
        f.bs_ris[n] = stream.complex_gaussian();
        f.ris_ue[n] = stream.complex_gaussian();
    }
    f.phase_errors = sample_phase_errors(rho, n_elements, stream);
    return f;
}

std::complex<double> reflection_sum(const FadingDraw& f) {
    std::complex<double> z = 0.0;
    for (std::size_t n = 0; n < f.bs_ris.size(); ++n)
        z += std::abs(f.bs_ris[n]) * std::abs(f.ris_ue[n]) * std::polar(1.0, f.phase_errors[n]);
    return z;
}

double sample_cell_edge_distance(double D1, double D2, RandomStream& stream) {
    return std::sqrt(D1 * D1 + stream.uniform() * (D2 * D2 - D1 * D1));
}

double sample_nearest_distance(double lambda, RandomStream& stream) {
    if (!(lambda > 0.0)) throw DomainError("sample_nearest_distance: lambda must be positive");
    return std::sqrt(-std::log(stream.uniform_open_zero()) / (pi * lambda));
}

std::optional<double> sample_hppp_nearest(double lambda, double disk_radius, RandomStream& stream) {
    if (!(lambda > 0.0) || !(disk_radius > 0.0))
        throw DomainError("sample_hppp_nearest: lambda and disk_radius must be positive");
    std::poisson_distribution<long long> count(lambda * pi * disk_radius * disk_radius);
    const long long k = count(stream);
    if (k == 0) return std::nullopt;
    double nearest = disk_radius;
    for (long long i = 0; i < k; ++i) {
        // radial coordinate of a uniform point in the disk
        nearest = std::min(nearest, disk_radius * std::sqrt(stream.uniform()));
        stream.uniform();  // angle, drawn for fidelity of the point pattern
    }
    return nearest;
}

double auto_disk_radius(double lambda, double C) {
    return std::max(3.0 * C, 1.0001 * std::sqrt(-std::log(1e-9) / (pi * lambda)));
}

RateEstimate simulate_fixed_rate(const SystemParams& p, const LinkGeometry& g, int n_elements,
                                 double rho, const McConfig& mc) {
    p.validate();
    g.validate();
    mu(rho);
    if (n_elements < 0) throw DomainError("simulate_fixed_rate: n_elements must be nonnegative");
    const PathGains b = path_gains(p, g);
    auto r = run_trials(mc, 1, [&](RandomStream& rs, double* out) {
        out[0] = rate_from_draw(p, b, draw_fading(n_elements, rho, rs));
    });
    return {r[0].mean, Method::monte_carlo, r[0].std_error};
}

RateEstimate simulate_spatial_bound(const SystemParams& p, const DeploymentParams& dep, double rho,
                                    const McConfig& mc) {
    p.validate();
    dep.validate();
    mu(rho);
    const double C = p.serve_radius;
    auto r = run_trials(mc, 1, [&](RandomStream& rs, double* out) {
        const double d = sample_cell_edge_distance(p.d_min, p.d_max, rs);
        const auto dist = draw_serving_distance(mc, dep.density, C, rs);
        if (dist && *dist <= C)
            out[0] = rate_bound_ris(p, {d, d, *dist}, dep.elements_per_ris, rho).value;
        else
            out[0] = rate_bound_direct(p, d).value;
    });
    return {r[0].mean, Method::monte_carlo, r[0].std_error};
}

RateEstimate simulate_spatial_exact(const SystemParams& p, const DeploymentParams& dep, double rho,
                                    const McConfig& mc) {
    p.validate();
    dep.validate();
    mu(rho);
    const int n = static_cast<int>(checked_element_count(dep.elements_per_ris));
    const double C = p.serve_radius;
    auto r = run_trials(mc, 1, [&](RandomStream& rs, double* out) {
        const double d = sample_cell_edge_distance(p.d_min, p.d_max, rs);
        const auto dist = draw_serving_distance(mc, dep.density, C, rs);
        const bool served = dist && *dist <= C;
        const LinkGeometry g{d, d, served ? *dist : C};
        out[0] = rate_from_draw(p, path_gains(p, g), draw_fading(served ? n : 0, rho, rs));
    });
    return {r[0].mean, Method::monte_carlo, r[0].std_error};
}

ReflectionMoments estimate_reflection_moments(int n_elements, double rho, const McConfig& mc) {
    if (n_elements < 1) throw DomainError("estimate_reflection_moments: n_elements must be >= 1");
    mu(rho);
    const double half = rho * pi;
    auto r = run_trials(mc, 2, [&](RandomStream& rs, double* out) {
        std::complex<double> z = 0.0;
        for (int n = 0; n < n_elements; ++n) {
            // |g| |h| for unit CN(0, 1) pairs: each magnitude is sqrt(-ln U)
            const double gh = std::sqrt(std::log(rs.uniform_open_zero()) * std::log(rs.uniform_open_zero()));
            const double tau = rho == 0.0 ? 0.0 : rs.uniform(-half, half);
            z += gh * std::polar(1.0, tau);
        }
        out[0] = z.real();
        out[1] = std::norm(z);
    });
    return {r[0].mean, r[1].mean, r[0].std_error, r[1].std_error};
}

McMean estimate_cos_diff(double rho, const McConfig& mc) {
    mu(rho);
    const double half = rho * pi;
    auto r = run_trials(mc, 1, [&](RandomStream& rs, double* out) {
        const double a = rs.uniform(-half, half);
        const double b = rs.uniform(-half, half);
        out[0] = std::cos(a - b);
    });
    return r[0];
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        worst = std::max(worst, std::abs(i / na - j / nb));
    }
    return worst;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ks_critical_value: alpha must be in (0, 1)");
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

}  // namespace risnet
