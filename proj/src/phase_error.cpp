#include "risnet/phase_error.hpp"

#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <numbers>

#include "risnet/errors.hpp"

namespace risnet {

namespace {
void check_rho(double rho, const char* who) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError(std::string(who) + ": rho must lie in [0, 1]");
}
}  // namespace

PhaseErrorSpec PhaseErrorSpec::from_bits(int bits) {
    if (bits < 1) throw DomainError("PhaseErrorSpec: quant_bits must be positive");
    return {std::ldexp(1.0, -bits), bits};
}

void PhaseErrorSpec::validate() const {
    check_rho(rho, "PhaseErrorSpec");
    if (quant_bits) {
        if (*quant_bits < 1) throw DomainError("PhaseErrorSpec: quant_bits must be positive");
        if (rho != std::ldexp(1.0, -*quant_bits))
            throw DomainError("PhaseErrorSpec: rho must equal 2^-quant_bits");
    }
}

double mu(double rho) {
    check_rho(rho, "mu");
    if (rho == 0.0) return std::numbers::pi / 4.0;
    return boost::math::sin_pi(rho) / (4.0 * rho);
}

double expected_cos_diff(double rho) {
    check_rho(rho, "expected_cos_diff");
    if (rho == 0.0) return 1.0;
    double s = boost::math::sin_pi(rho) / (std::numbers::pi * rho);
    return s * s;
}

double diff_density(double rho, double z) {
    if (!(rho > 0.0)) throw DomainError("diff_density: rho must be positive");
    const double w = 2.0 * rho * std::numbers::pi;
    if (std::abs(z) >= w) return 0.0;
    return 1.0 / w - std::abs(z) / (w * w);
}

std::vector<double> sample_phase_errors(double rho, int count, RandomStream& stream) {
    check_rho(rho, "sample_phase_errors");
    if (count < 0) throw DomainError("sample_phase_errors: count must be nonnegative");
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (rho == 0.0) return out;
    const double half = rho * std::numbers::pi;
    for (auto& t : out) t = stream.uniform(-half, half);
    return out;
}

}  // namespace risnet
