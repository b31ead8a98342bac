#include "zap/stepsize.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "zap/errors.hpp"

namespace zap {

void VssParams::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("vss: lambda must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("vss: alpha must lie in (0, 1)");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("vss: gamma must be positive");
    if (!(kappa0 >= 0.0) || !std::isfinite(kappa0))
        throw ParameterError("vss: kappa0 must be nonnegative");
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("vss: eta must lie in (0, 1)");
    if (!(kappa_min > 0.0)) throw ParameterError("vss: kappa_min must be positive");
    if (conv_short == 0 || conv_long == 0 || conv_short > conv_long)
        throw ParameterError("vss: detector windows need 0 < conv_short <= conv_long");
    if (!(conv_ratio > 0.0)) throw ParameterError("vss: conv_ratio must be positive");
}

YouStepState::YouStepState(double kappa0, const VssParams& params)
    : kappa(kappa0), e2_ring(params.conv_long, 0.0) {}

double you_step(YouStepState& state, double e, const VssParams& params) {
    const std::size_t n_long = params.conv_long;
    if (state.e2_ring.size() != n_long) state.e2_ring.assign(n_long, 0.0);
    state.e2_ring[state.seen % n_long] = e * e;
    ++state.seen;

    if (state.seen % n_long == 0) {
        // ring is full and the newest sample sits at index n_long - 1
        const auto& r = state.e2_ring;
        const double long_mean = std::accumulate(r.begin(), r.end(), 0.0) / double(n_long);
        const double short_mean =
            std::accumulate(r.end() - static_cast<std::ptrdiff_t>(params.conv_short), r.end(), 0.0) /
            double(params.conv_short);
        const bool convergent = long_mean > 0.0 && short_mean / long_mean <= params.conv_ratio;
        if (convergent && state.kappa >= params.kappa_min) {
            state.kappa *= params.eta;
            ++state.decay_events;
        }
    }
    return state.kappa;
}

void proposed_phi_update(ProposedStepState& state, double j_now, const VssParams& params) {
    state.phi = (1.0 - params.lambda) * state.phi + params.lambda * j_now;
}

double proposed_kappa_update(ProposedStepState& state, double delta, const VssParams& params) {
    state.kappa = (1.0 - params.alpha) * state.kappa + params.alpha * params.gamma * std::abs(delta);
    return state.kappa;
}

StepSizeController StepSizeController::fixed(double kappa0) {
    if (!(kappa0 >= 0.0)) throw ParameterError("fixed step: kappa0 must be nonnegative");
    return StepSizeController(FixedStepState{kappa0}, VssParams{});
}

StepSizeController StepSizeController::you(double kappa0, const VssParams& params) {
    params.validate();
    if (!(kappa0 >= 0.0)) throw ParameterError("you step: kappa0 must be nonnegative");
    return StepSizeController(YouStepState(kappa0, params), params);
}

StepSizeController StepSizeController::proposed(double kappa0, MeasureSpec measure,
                                                const VssParams& params) {
    params.validate();
    measure.validate();
    if (!(kappa0 >= 0.0)) throw ParameterError("proposed step: kappa0 must be nonnegative");
    return StepSizeController(ProposedStepState(kappa0, measure), params);
}

ControllerKind StepSizeController::kind() const noexcept {
    switch (state_.index()) {
        case 0: return ControllerKind::Fixed;
        case 1: return ControllerKind::You;
        default: return ControllerKind::Proposed;
    }
}

double StepSizeController::next(double e, const Eigen::Ref<const Eigen::VectorXd>& w) {
    return std::visit(
        [&](auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FixedStepState>)
                return fixed_step(s);
            else if constexpr (std::is_same_v<T, YouStepState>)
                return you_step(s, e, params_);
            else
                return proposed_step(s, w, params_);
        },
        state_);
}

double StepSizeController::kappa() const noexcept {
    return std::visit([](const auto& s) { return s.kappa; }, state_);
}

double StepSizeController::last_delta() const noexcept {
    if (const auto* p = std::get_if<ProposedStepState>(&state_)) return p->last_delta;
    return 0.0;
}

}  // namespace zap
