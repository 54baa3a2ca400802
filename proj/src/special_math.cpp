#include "risnet/special_math.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "risnet/errors.hpp"

namespace risnet {

namespace {

bool converged(double step, double value, const Tolerance& tol) {
    return std::abs(step) <= std::max(tol.abs_tol, tol.rel_tol * std::abs(value));
}

// E1(y) for y > 0 via the power series; cancellation grows like e^y, so this is
// only used for small y.
double e1_series(double y, const Tolerance& tol) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= tol.max_iterations; ++k) {
        term *= -y / k;
        double step = term / k;
        sum += step;
        if (converged(step, sum, tol))
            return -euler_constant() - std::log(y) - sum;
    }
    throw NumericError("exp_integral_ei: series did not converge",
                       -(-euler_constant() - std::log(y) - sum));
}

// E1(y) for y > 0 via the modified Lentz continued fraction
// e^-y / (y + 1 - 1/(y + 3 - 4/(y + 5 - ...))).
double e1_continued_fraction(double y, const Tolerance& tol) {
    constexpr double tiny = 1e-300;
    const double pref = std::exp(-y);
    double b = y + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= tol.max_iterations; ++i) {
        double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        double delta = c * d;
        double prev = h;
        h *= delta;
        if (converged(pref * (h - prev), pref * h, tol)) return pref * h;
    }
    throw NumericError("exp_integral_ei: continued fraction did not converge", -pref * h);
}

double ei_positive(double x, const Tolerance& tol) {
    if (x <= 40.0) {
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k <= tol.max_iterations; ++k) {
            term *= x / k;
            double step = term / k;
            sum += step;
            if (converged(step, sum, tol)) return euler_constant() + std::log(x) + sum;
        }
        throw NumericError("exp_integral_ei: series did not converge",
                           euler_constant() + std::log(x) + sum);
    }
    // asymptotic expansion, truncated at the smallest term
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k <= tol.max_iterations; ++k) {
        double next = term * k / x;
        if (next >= term) break;
        term = next;
        sum += term;
        if (converged(term, sum, tol)) break;
    }
    return std::exp(x) / x * sum;
}

}  // namespace

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iterations < 1)
        throw DomainError("Tolerance: abs_tol and rel_tol must be positive, max_iterations >= 1");
}

double euler_constant() { return std::numbers::egamma; }

double exp_integral_ei(double x, const Tolerance& tol) {
    tol.validate();
    if (x == 0.0) throw DomainError("exp_integral_ei: logarithmic singularity at x = 0");
    if (std::isnan(x)) throw DomainError("exp_integral_ei: NaN argument");
    if (x > 0.0) return ei_positive(x, tol);
    double y = -x;
    if (y > 745.0) return -0.0;  // e^-y underflows
    return y <= 1.0 ? -e1_series(y, tol) : -e1_continued_fraction(y, tol);
}

double lower_incomplete_gamma(double a, double x, const Tolerance& tol) {
    tol.validate();
    if (!(a > 0.0)) throw DomainError("lower_incomplete_gamma: a must be positive");
    if (!(x >= 0.0)) throw DomainError("lower_incomplete_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;

    const double log_pref = -x + a * std::log(x);
    if (x < a + 1.0) {
        // gamma(a,x) = e^-x x^a sum_n x^n / (a (a+1) ... (a+n))
        const double pref = std::exp(log_pref);
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n <= tol.max_iterations; ++n) {
            term *= x / (a + n);
            sum += term;
            if (converged(pref * term, pref * sum, tol)) return pref * sum;
        }
        throw NumericError("lower_incomplete_gamma: series did not converge", pref * sum);
    }

    // Gamma(a,x) by Lentz continued fraction, then subtract from Gamma(a).
    constexpr double tiny = 1e-300;
    const double full = std::tgamma(a);
    const double pref = std::exp(log_pref);
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= tol.max_iterations; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double prev = h;
        h *= d * c;
        if (converged(pref * (h - prev), full - pref * h, tol)) return full - pref * h;
    }
    throw NumericError("lower_incomplete_gamma: continued fraction did not converge",
                       full - pref * h);
}

double power_integral(double p, double a, double b) {
    if (!(a > 0.0)) throw DomainError("power_integral: lower limit must be positive");
    if (!(b >= a)) throw DomainError("power_integral: upper limit below lower limit");
    const double s = p + 1.0;
    const double L = std::log(b / a);
    if (std::abs(s) < 1e-8) {
        double sl = s * L;
        return std::pow(a, s) * L * (1.0 + sl / 2.0 + sl * sl / 6.0);
    }
    return std::pow(a, s) * std::expm1(s * L) / s;
}

}  // namespace risnet
