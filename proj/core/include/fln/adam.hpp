#pragma once

#include "fln/matrix.hpp"

namespace fln {

/// Per-parameter Adam optimizer state (bias-corrected variant).
struct AdamState {
    Matrix m; // first-moment estimate, same shape as the parameter
    Matrix v; // second-moment estimate
    long t = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_param(const Matrix& param, double lr = 1e-3,
                               double beta1 = 0.9, double beta2 = 0.999,
                               double epsilon = 1e-8);
};

/// One bias-corrected Adam update of param in place; increments state.t.
void adam_step(Matrix& param, const Matrix& grad, AdamState& state);

} // namespace fln
