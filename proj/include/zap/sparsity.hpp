#pragma once

// Sparseness penalties G(t), their sum J(w), and the normalized l1/l2
// channel sparsity. All functions accept any real Eigen vector expression.

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <string_view>

#include "zap/errors.hpp"

namespace zap {

/// Penalty families M1..M6 plus the normalized l1/l2 sparsity (HOYER).
enum class MeasureKind { M1, M2, M3, M4, M5, M6, Hoyer };

/// Selected sparseness functional with its parameters.
///
/// sigma is used by M2..M6 (> 0 for M3..M6; >= 0 for M2, where it offsets
/// the denominator); p is used by M2 only and must lie in [0, 1).
struct MeasureSpec {
    MeasureKind kind{MeasureKind::M1};
    double sigma{1.0};
    double p{0.0};

    /// Throws ParameterError when the parameters are outside their ranges.
    void validate() const;
};

std::string_view to_string(MeasureKind kind);
MeasureKind parse_measure_kind(std::string_view name);

/// x/|x| for x != 0, exactly 0 at 0.
template <typename Scalar>
constexpr Scalar sign(Scalar x) noexcept {
    if (x > Scalar(0)) return Scalar(1);
    if (x < Scalar(0)) return Scalar(-1);
    return Scalar(0);
}

namespace detail {

// Table row evaluated on the magnitude a = |t|; spec is pre-validated.
template <typename Scalar>
Scalar penalty_abs(const MeasureSpec& spec, Scalar a) {
    using std::atan;
    using std::exp;
    using std::log1p;
    using std::pow;
    const Scalar s = static_cast<Scalar>(spec.sigma);
    switch (spec.kind) {
        case MeasureKind::M1:
            return a;
        case MeasureKind::M2:
            if (a == Scalar(0)) return Scalar(0);
            return a / pow(a + s, Scalar(1) - static_cast<Scalar>(spec.p));
        case MeasureKind::M3:
            return Scalar(1) - exp(-s * a);
        case MeasureKind::M4:
            return log1p(s * a);
        case MeasureKind::M5:
            return atan(s * a);
        case MeasureKind::M6:
            // boundary |t| == 1/sigma belongs to the polynomial branch
            if (s * a <= Scalar(1)) return Scalar(2) * s * a - s * s * a * a;
            return Scalar(1);
        case MeasureKind::Hoyer:
            break;
    }
    throw ParameterError("penalty: HOYER is a vector measure, not a per-tap penalty");
}

}  // namespace detail

/// G(t) for one of M1..M6, evaluated on |t| (so G is even and G(0) = 0).
template <typename Scalar>
Scalar penalty(const MeasureSpec& spec, Scalar t) {
    spec.validate();
    if (spec.kind == MeasureKind::Hoyer)
        throw ParameterError("penalty: HOYER is a vector measure, not a per-tap penalty");
    using std::abs;
    return detail::penalty_abs(spec, abs(t));
}

/// J(w) = sum_i G(w_i).
template <typename Derived>
typename Derived::Scalar penalty_sum(const MeasureSpec& spec, const Eigen::MatrixBase<Derived>& w) {
    using Scalar = typename Derived::Scalar;
    spec.validate();
    if (spec.kind == MeasureKind::Hoyer)
        throw ParameterError("penalty_sum: HOYER is not a Table penalty; use hoyer_sparsity");
    if (w.size() == 0) throw ParameterError("penalty_sum: empty weight vector");
    if (spec.kind == MeasureKind::M1) return w.template lpNorm<1>();
    Scalar acc(0);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        using std::abs;
        acc += detail::penalty_abs(spec, abs(w.coeff(i)));
    }
    return acc;
}

/// Normalized sparsity L/(L - sqrt L) * (1 - |w|_1 / (sqrt L |w|_2)), in [0, 1].
///
/// Defined as 0 for the all-zero vector. Rounding can push the raw value a
/// few ulps outside [0, 1]; the result is clamped.
template <typename Derived>
typename Derived::Scalar hoyer_sparsity(const Eigen::MatrixBase<Derived>& w) {
    using Scalar = typename Derived::Scalar;
    using std::sqrt;
    const Eigen::Index n = w.size();
    if (n <= 1) throw ParameterError("hoyer_sparsity: length must exceed 1");
    const Scalar l2 = w.norm();
    if (l2 == Scalar(0)) return Scalar(0);
    const Scalar l1 = w.template lpNorm<1>();
    const Scalar len = static_cast<Scalar>(n);
    const Scalar root = sqrt(len);
    const Scalar eps = len / (len - root) * (Scalar(1) - l1 / (root * l2));
    if (eps < Scalar(0)) return Scalar(0);
    if (eps > Scalar(1)) return Scalar(1);
    return eps;
}

/// Dispatch: J(w) for M1..M6, the normalized sparsity for HOYER.
template <typename Derived>
typename Derived::Scalar sparseness(const MeasureSpec& spec, const Eigen::MatrixBase<Derived>& w) {
    if (spec.kind == MeasureKind::Hoyer) return hoyer_sparsity(w);
    return penalty_sum(spec, w);
}

}  // namespace zap
