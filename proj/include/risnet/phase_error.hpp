#pragma once

#include <optional>
#include <vector>

#include "risnet/random_stream.hpp"

namespace risnet {

struct PhaseErrorSpec {
    double rho = 0.0;
    std::optional<int> quant_bits;

    static PhaseErrorSpec from_bits(int bits);
    void validate() const;
};

// Attenuation factor sin(rho pi) / (4 rho); pi/4 at rho = 0.
double mu(double rho);

// E{cos(tau1 - tau2)} for independent errors on [-rho pi, rho pi].
double expected_cos_diff(double rho);

// Triangular density of tau1 - tau2, supported on (-2 rho pi, 2 rho pi).
double diff_density(double rho, double z);

std::vector<double> sample_phase_errors(double rho, int count, RandomStream& stream);

}  // namespace risnet
