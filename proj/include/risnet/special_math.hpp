#pragma once

namespace risnet {

struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iterations = 10000;

    void validate() const;
};

// Ei(x) = integral of e^t/t from -inf to x (principal value for x > 0).
double exp_integral_ei(double x, const Tolerance& tol = {});

// gamma(a, x) = integral of e^-t t^(a-1) over [0, x].
double lower_incomplete_gamma(double a, double x, const Tolerance& tol = {});

// Integral of t^p over [a, b], with the log limit at p = -1.
double power_integral(double p, double a, double b);

double euler_constant();

}  // namespace risnet
