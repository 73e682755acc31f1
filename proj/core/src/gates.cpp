#include "fln/gates.hpp"

#include <cmath>

#include "fln/errors.hpp"
#include "fln/loss.hpp"

namespace fln {

namespace {

constexpr double kNoiseClamp = 1e-6; // keeps log(u/(1-u)) finite

GateSample stretch_and_clamp(const HardConcreteGate& gate, std::vector<double> u) {
    GateSample out;
    out.u = std::move(u);
    out.s.resize(gate.size());
    out.z.resize(gate.size());
    const double span = gate.c.zeta - gate.c.gamma;
    for (std::size_t j = 0; j < gate.size(); ++j) {
        const double uj = out.u[j];
        const double logit_u = std::log(uj / (1.0 - uj));
        const double sbar = sigmoid((logit_u + gate.log_alpha[j]) / gate.c.beta);
        const double s = sbar * span + gate.c.gamma;
        out.s[j] = s;
        out.z[j] = std::min(1.0, std::max(0.0, s));
    }
    return out;
}

} // namespace

GateSample sample(const HardConcreteGate& gate, Rng& rng) {
    std::vector<double> u(gate.size());
    for (double& v : u)
        v = kNoiseClamp + rng.uniform01() * (1.0 - 2.0 * kNoiseClamp);
    return stretch_and_clamp(gate, std::move(u));
}

GateSample sample_from_noise(const HardConcreteGate& gate, const std::vector<double>& u) {
    if (u.size() != gate.size())
        throw ShapeError("sample_from_noise: " + std::to_string(u.size()) +
                         " noise values for a gate of size " + std::to_string(gate.size()));
    return stretch_and_clamp(gate, u);
}

std::vector<double> deterministic(const HardConcreteGate& gate) {
    std::vector<double> z(gate.size());
    const double span = gate.c.zeta - gate.c.gamma;
    for (std::size_t j = 0; j < gate.size(); ++j) {
        const double s = sigmoid(gate.log_alpha[j]) * span + gate.c.gamma;
        z[j] = std::min(1.0, std::max(0.0, s));
    }
    return z;
}

ExpectedL0 expected_l0(const HardConcreteGate& gate) {
    ExpectedL0 out;
    out.total = 0.0;
    out.grad.resize(gate.size());
    // P(z != 0) = sigmoid(log_alpha - beta * log(-gamma / zeta)): the mass of
    // the stretched distribution that the clamp does NOT send to zero.
    const double shift = gate.c.beta * std::log(-gate.c.gamma / gate.c.zeta);
    for (std::size_t j = 0; j < gate.size(); ++j) {
        const double p = sigmoid(gate.log_alpha[j] - shift);
        out.total += p;
        out.grad[j] = p * (1.0 - p);
    }
    return out;
}

std::vector<double> binary_complement(const std::vector<double>& z) {
    std::vector<double> b(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) b[j] = (z[j] == 0.0) ? 1.0 : 0.0;
    return b;
}

std::vector<double> sample_backward(const GateSample& sample,
                                    const HardConcreteGate& gate,
                                    const std::vector<double>& upstream) {
    if (sample.s.size() != gate.size() || upstream.size() != gate.size())
        throw ShapeError("sample_backward: sample of size " + std::to_string(sample.s.size()) +
                         ", upstream of size " + std::to_string(upstream.size()) +
                         " for a gate of size " + std::to_string(gate.size()));
    std::vector<double> grad(gate.size(), 0.0);
    const double span = gate.c.zeta - gate.c.gamma;
    for (std::size_t j = 0; j < gate.size(); ++j) {
        const double s = sample.s[j];
        if (s <= 0.0 || s >= 1.0) continue; // clamp region: flat, zero gradient
        const double sbar = (s - gate.c.gamma) / span; // invert the stretch
        grad[j] = upstream[j] * (sbar * (1.0 - sbar) * span / gate.c.beta);
    }
    return grad;
}

} // namespace fln
