#include "zap/signalgen.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "zap/errors.hpp"

namespace zap {

namespace {

void require_finite(const Signal& s, const char* what) {
    if (!s.allFinite()) throw ParameterError(std::string(what) + " contains non-finite samples");
}

}  // namespace

ImpulseResponse::ImpulseResponse(Eigen::VectorXd taps) : taps_(std::move(taps)) {
    if (taps_.size() <= 1)
        throw ParameterError("impulse response length must exceed 1, got " +
                             std::to_string(taps_.size()));
    if (!taps_.allFinite()) throw ParameterError("impulse response has non-finite taps");
}

Signal white_noise(std::size_t n, RngSeed seed) {
    if (n == 0) throw EmptyBufferError("white_noise: sample count must be positive");
    NormalRng rng(seed);
    Signal out(static_cast<Eigen::Index>(n));
    for (auto& s : out) s = rng.normal();
    return out;
}

ImpulseResponse sparse_impulse(std::size_t length, std::size_t active, RngSeed seed) {
    if (length <= 1) throw ParameterError("sparse_impulse: length must exceed 1");
    if (active == 0 || active > length)
        throw ParameterError("sparse_impulse: active count must be in [1, " +
                             std::to_string(length) + "], got " + std::to_string(active));
    NormalRng rng(seed);

    // partial Fisher-Yates picks `active` distinct positions
    std::vector<std::size_t> idx(length);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < active; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(length - i));
        std::swap(idx[i], idx[j]);
    }

    Eigen::VectorXd taps = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(length));
    for (std::size_t i = 0; i < active; ++i) {
        double a = 0.0;
        do {
            a = rng.normal();
        } while (a == 0.0);
        taps[static_cast<Eigen::Index>(idx[i])] = a;
    }
    return ImpulseResponse(std::move(taps));
}

ImpulseResponse dispersive_impulse(std::size_t length, RngSeed seed) {
    if (length <= 1) throw ParameterError("dispersive_impulse: length must exceed 1");
    NormalRng rng(seed);
    Eigen::VectorXd taps(static_cast<Eigen::Index>(length));
    for (auto& t : taps) t = rng.normal();
    return ImpulseResponse(std::move(taps));
}

Signal synthesize_echo(const Signal& x, const ImpulseResponse& h) {
    if (x.size() == 0) throw EmptyBufferError("synthesize_echo: empty input");
    require_finite(x, "synthesize_echo input");
    const Eigen::Index n = x.size();
    const Eigen::Index taps = h.size();
    Signal y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index k_max = std::min(taps, i + 1);
        // y(i) = sum_{k<k_max} h_k x(i-k); x reversed segment dotted with h head
        y[i] = h.taps().head(k_max).dot(x.segment(i - k_max + 1, k_max).reverse());
    }
    return y;
}

double empirical_power(const Signal& s) {
    if (s.size() == 0) throw EmptyBufferError("empirical_power: empty buffer");
    return s.squaredNorm() / static_cast<double>(s.size());
}

Signal noise_at_snr(const Signal& y, double snr_db, RngSeed seed) {
    if (y.size() == 0) throw EmptyBufferError("add_noise_at_snr: empty buffer");
    require_finite(y, "add_noise_at_snr input");
    if (std::isnan(snr_db)) throw ParameterError("add_noise_at_snr: snr_db is NaN");
    const double p_y = empirical_power(y);
    if (p_y == 0.0) throw UndefinedError("add_noise_at_snr: echo has zero power, SNR undefined");
    if (std::isinf(snr_db) && snr_db > 0) return Signal::Zero(y.size());

    Signal v = white_noise(static_cast<std::size_t>(y.size()), seed);
    const double p_target = p_y / std::pow(10.0, snr_db / 10.0);
    v *= std::sqrt(p_target / empirical_power(v));
    return v;
}

Signal add_noise_at_snr(const Signal& y, double snr_db, RngSeed seed) {
    return y + noise_at_snr(y, snr_db, seed);
}

}  // namespace zap
