#pragma once

// Attractor step-size controllers producing kappa(n) once per sample.
//
//   Fixed    kappa(n) = kappa0
//   You      kappa0 shrunk by eta on each detected convergence, frozen once below kappa_min
//   Proposed phi(n)   = (1 - lambda) phi(n-1) + lambda J(w)
//            delta(n) = J(w) - phi(n-1)
//            kappa(n) = (1 - alpha) kappa(n-1) + alpha gamma |delta(n)|
//
// J is a penalty sum (VSS1) or the normalized l1/l2 sparsity (VSS2).

#include <Eigen/Core>

#include <cstddef>
#include <variant>
#include <vector>

#include "zap/sparsity.hpp"

namespace zap {

enum class ControllerKind { Fixed, You, Proposed };

struct VssParams {
    double lambda{0.01};
    double alpha{0.01};
    double gamma{1.0};
    double kappa0{0.0};
    double eta{0.5};
    double kappa_min{1e-6};
    std::size_t conv_short{64};
    std::size_t conv_long{1024};
    double conv_ratio{0.98};

    /// Throws ParameterError on out-of-range values.
    void validate() const;
};

struct FixedStepState {
    double kappa{0.0};
};

inline double fixed_step(const FixedStepState& state) noexcept { return state.kappa; }

/// Convergence-triggered decay with a windowed MSE ratio detector.
struct YouStepState {
    double kappa{0.0};
    std::vector<double> e2_ring;  // last conv_long squared errors
    std::size_t seen{0};
    std::size_t decay_events{0};

    YouStepState() = default;
    YouStepState(double kappa0, const VssParams& params);
};

/// Consumes one error sample and returns kappa for this sample.
double you_step(YouStepState& state, double e, const VssParams& params);

struct ProposedStepState {
    double kappa{0.0};
    double phi{0.0};
    double last_delta{0.0};
    bool primed{false};  // phi(0) is taken from the first observed J
    MeasureSpec measure{};

    ProposedStepState() = default;
    ProposedStepState(double kappa0, MeasureSpec spec) : kappa(kappa0), measure(spec) {}
};

/// phi <- (1 - lambda) phi + lambda j_now.
void proposed_phi_update(ProposedStepState& state, double j_now, const VssParams& params);

/// j_now - phi, using phi as currently stored (i.e. before this sample's phi update).
inline double proposed_delta(const ProposedStepState& state, double j_now) noexcept {
    return j_now - state.phi;
}

/// kappa <- (1 - alpha) kappa + alpha gamma |delta|; returns the new kappa.
double proposed_kappa_update(ProposedStepState& state, double delta, const VssParams& params);

/// Sparseness of w, then delta (old phi), then phi, then kappa. Returns kappa.
template <typename Derived>
double proposed_step(ProposedStepState& state, const Eigen::MatrixBase<Derived>& w,
                     const VssParams& params) {
    const double j_now = static_cast<double>(sparseness(state.measure, w));
    if (!state.primed) {
        state.phi = j_now;
        state.primed = true;
    }
    const double delta = proposed_delta(state, j_now);
    state.last_delta = delta;
    proposed_phi_update(state, j_now, params);
    return proposed_kappa_update(state, delta, params);
}

/// Type-erased controller owned by one filter instance.
class StepSizeController {
public:
    static StepSizeController fixed(double kappa0);
    static StepSizeController you(double kappa0, const VssParams& params);
    static StepSizeController proposed(double kappa0, MeasureSpec measure, const VssParams& params);

    ControllerKind kind() const noexcept;

    /// kappa for the current sample, given the a-priori error and pre-update weights.
    double next(double e, const Eigen::Ref<const Eigen::VectorXd>& w);

    double kappa() const noexcept;

    /// Signed delta of the last proposed step (0 for other controllers).
    double last_delta() const noexcept;

private:
    using State = std::variant<FixedStepState, YouStepState, ProposedStepState>;
    StepSizeController(State s, VssParams p) : state_(std::move(s)), params_(p) {}

    State state_;
    VssParams params_;
};

}  // namespace zap
