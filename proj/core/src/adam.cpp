#include "fln/adam.hpp"

#include <cmath>

#include "fln/errors.hpp"

namespace fln {

AdamState AdamState::for_param(const Matrix& param, double lr, double beta1,
                               double beta2, double epsilon) {
    AdamState st;
    st.m = Matrix(param.rows, param.cols);
    st.v = Matrix(param.rows, param.cols);
    st.lr = lr;
    st.beta1 = beta1;
    st.beta2 = beta2;
    st.epsilon = epsilon;
    return st;
}

void adam_step(Matrix& param, const Matrix& grad, AdamState& state) {
    require_same_shape(param, grad, "adam_step");
    require_same_shape(param, state.m, "adam_step (state)");
    state.t += 1;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad.data[i];
        state.m.data[i] = state.beta1 * state.m.data[i] + (1.0 - state.beta1) * g;
        state.v.data[i] = state.beta2 * state.v.data[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m.data[i] / c1;
        const double vhat = state.v.data[i] / c2;
        param.data[i] -= state.lr * mhat / (std::sqrt(vhat) + state.epsilon);
    }
}

} // namespace fln
