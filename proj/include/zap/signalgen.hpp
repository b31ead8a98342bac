#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>

#include "zap/rng.hpp"

namespace zap {

/// Real sample sequence (far-end input, echo, microphone signal).
using Signal = Eigen::VectorXd;

/// Length-L channel tap vector, L > 1, all taps finite.
class ImpulseResponse {
public:
    explicit ImpulseResponse(Eigen::VectorXd taps);

    const Eigen::VectorXd& taps() const noexcept { return taps_; }
    Eigen::Index size() const noexcept { return taps_.size(); }
    double operator[](Eigen::Index i) const { return taps_[i]; }

private:
    Eigen::VectorXd taps_;
};

/// Sentinel SNR that disables additive noise.
inline constexpr double kNoiseDisabled = std::numeric_limits<double>::infinity();

/// n i.i.d. standard-normal samples.
Signal white_noise(std::size_t n, RngSeed seed);

/// L taps with exactly `active` nonzero standard-normal taps at uniformly chosen positions.
ImpulseResponse sparse_impulse(std::size_t length, std::size_t active, RngSeed seed);

/// L i.i.d. standard-normal taps.
ImpulseResponse dispersive_impulse(std::size_t length, RngSeed seed);

/// y(n) = sum_k h_k x(n-k) with zero prehistory; output has the length of x.
Signal synthesize_echo(const Signal& x, const ImpulseResponse& h);

/// Additive white Gaussian noise scaled against the empirical power of y.
///
/// Returns the noise sequence v such that 10 log10(P_y / P_v) == snr_db
/// exactly for this buffer. An infinite snr_db yields all zeros.
Signal noise_at_snr(const Signal& y, double snr_db, RngSeed seed);

/// d = y + noise_at_snr(y, snr_db, seed).
Signal add_noise_at_snr(const Signal& y, double snr_db, RngSeed seed);

/// Mean square of a buffer.
double empirical_power(const Signal& s);

}  // namespace zap
