#pragma once

// Per-sample LMS kernels with optional zero attractors.
//
//   e(n) = d(n) - x_n^T w
//   LMS : w += mu e x_n
//   l0  : w += mu e x_n - kappa beta sgn(w) .* exp(-beta |w|)
//   l1  : w += mu e x_n - kappa sgn(w)
//
// The attractor always reads the weights from before this sample's
// gradient step. Each update is O(L).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

#include "zap/errors.hpp"
#include "zap/sparsity.hpp"

namespace zap {

enum class Attractor { None, L0, L1 };

/// Adaptive weights and regressor window (most recent sample first).
template <typename Scalar>
struct FilterState {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector w;
    Vector x_window;

    FilterState() = default;
    explicit FilterState(Eigen::Index length)
        : w(Vector::Zero(length)), x_window(Vector::Zero(length)) {
        if (length <= 0) throw ParameterError("filter length must be positive");
    }

    Eigen::Index size() const noexcept { return w.size(); }
};

using FilterStated = FilterState<double>;

/// mu > 0, kappa >= 0, beta > 0 when attractor == L0.
template <typename Scalar>
struct AdaptParams {
    Scalar mu{Scalar(0.001)};
    Scalar kappa{Scalar(0)};
    Scalar beta{Scalar(10)};
    Attractor attractor{Attractor::None};

    void validate() const {
        if (!(mu > Scalar(0))) throw ParameterError("adapt: mu must be positive");
        if (!(kappa >= Scalar(0))) throw ParameterError("adapt: kappa must be nonnegative");
        if (attractor == Attractor::L0 && !(beta > Scalar(0)))
            throw ParameterError("adapt: beta must be positive for the l0 attractor");
    }
};

/// Shift the regressor: newest sample enters at index 0, oldest drops out.
template <typename Scalar>
void push_sample(FilterState<Scalar>& state, Scalar x_new) {
    using std::isfinite;
    if (!isfinite(x_new)) throw ParameterError("push_sample: non-finite input sample");
    auto& xw = state.x_window;
    if (xw.size() == 0) return;
    std::copy_backward(xw.data(), xw.data() + xw.size() - 1, xw.data() + xw.size());
    xw[0] = x_new;
}

/// d - x_n^T w.
template <typename Scalar>
Scalar filter_error(const FilterState<Scalar>& state, Scalar d) {
    return d - state.x_window.dot(state.w);
}

/// w += mu e x_n.
template <typename Scalar>
void lms_update(FilterState<Scalar>& state, Scalar e, const AdaptParams<Scalar>& params) {
    state.w.noalias() += (params.mu * e) * state.x_window;
}

/// l0 zero-attracting update; attraction vanishes at w_i = 0 and decays with |w_i|.
template <typename Scalar>
void zap_l0_update(FilterState<Scalar>& state, Scalar e, const AdaptParams<Scalar>& params) {
    using std::abs;
    using std::exp;
    const Scalar step = params.mu * e;
    const Scalar scale = params.kappa * params.beta;
    for (Eigen::Index i = 0; i < state.w.size(); ++i) {
        const Scalar wi = state.w[i];
        const Scalar attract = scale * sign(wi) * exp(-params.beta * abs(wi));
        state.w[i] = wi + step * state.x_window[i] - attract;
    }
}

/// l1 zero-attracting update. No clipping: a tap may cross zero in one step.
template <typename Scalar>
void zap_l1_update(FilterState<Scalar>& state, Scalar e, const AdaptParams<Scalar>& params) {
    const Scalar step = params.mu * e;
    for (Eigen::Index i = 0; i < state.w.size(); ++i) {
        const Scalar wi = state.w[i];
        state.w[i] = wi + step * state.x_window[i] - params.kappa * sign(wi);
    }
}

/// Dispatch on params.attractor.
template <typename Scalar>
void adapt(FilterState<Scalar>& state, Scalar e, const AdaptParams<Scalar>& params) {
    switch (params.attractor) {
        case Attractor::None: lms_update(state, e, params); return;
        case Attractor::L0: zap_l0_update(state, e, params); return;
        case Attractor::L1: zap_l1_update(state, e, params); return;
    }
}

}  // namespace zap
