#include "zap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "zap/errors.hpp"

namespace zap {

namespace {

constexpr std::uint64_t kRunStride = 0x9E3779B97F4A7C15ULL;  // odd

std::string_view method_prefix(Method m) {
    switch (m) {
        case Method::Lms: return "LMS";
        case Method::ZapFixed: return "ZAP_FIXED";
        case Method::ZapYou: return "ZAP_YOU";
        case Method::ZapVss1: return "ZAP_VSS1";
        case Method::ZapVss2: return "ZAP_VSS2";
    }
    return "?";
}

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string Algorithm::label() const {
    std::string s(method_prefix(method));
    if (method == Method::Lms) return s;
    s += attractor == Attractor::L0 ? "_L0" : "_L1";
    return s;
}

Algorithm Algorithm::parse(std::string_view label) {
    for (const auto& a : all())
        if (a.label() == label) return a;
    throw ConfigError("unknown algorithm '" + std::string(label) + "'");
}

std::vector<Algorithm> Algorithm::all() {
    std::vector<Algorithm> out{{Method::Lms, Attractor::None}};
    for (auto att : {Attractor::L1, Attractor::L0})
        for (auto m : {Method::ZapFixed, Method::ZapYou, Method::ZapVss1, Method::ZapVss2})
            out.push_back({m, att});
    return out;
}

std::string_view to_string(Scenario s) {
    return s == Scenario::SparseSwitchSparse ? "SPARSE_SWITCH_SPARSE" : "SPARSE_SWITCH_DISPERSIVE";
}

Scenario parse_scenario(std::string_view name) {
    if (name == "SPARSE_SWITCH_SPARSE") return Scenario::SparseSwitchSparse;
    if (name == "SPARSE_SWITCH_DISPERSIVE") return Scenario::SparseSwitchDispersive;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(MisalignConvention c) {
    return c == MisalignConvention::Paper ? "paper" : "squared";
}

MisalignConvention parse_convention(std::string_view name) {
    if (name == "paper") return MisalignConvention::Paper;
    if (name == "squared") return MisalignConvention::Squared;
    throw ConfigError("unknown misalign_convention '" + std::string(name) + "'");
}

double misalignment_db(const ImpulseResponse& h, const Eigen::Ref<const Eigen::VectorXd>& w,
                       MisalignConvention convention) {
    if (w.size() != h.size())
        throw ParameterError("misalignment: length mismatch (" + std::to_string(h.size()) + " vs " +
                             std::to_string(w.size()) + ")");
    const double h_norm = h.taps().norm();
    if (h_norm == 0.0) throw UndefinedError("misalignment: true channel is all zero");
    const double err = (h.taps() - w).norm();
    if (err == 0.0) return kMisalignFloorDb;
    const double ratio = err / h_norm;
    const double db = convention == MisalignConvention::Paper ? 10.0 * std::log10(ratio)
                                                              : 20.0 * std::log10(ratio);
    return std::max(db, kMisalignFloorDb);
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (L <= 1) fail("L must exceed 1");
    if (n_samples == 0) fail("n_samples must be positive");
    if (switch_at >= n_samples) fail("switch_at must be smaller than n_samples");
    if (runs == 0) fail("runs must be at least 1");
    if (std::isnan(snr_db)) fail("snr_db is NaN");
    if (!(mu > 0.0) || !std::isfinite(mu)) fail("mu must be positive");
    if (algorithms.empty()) fail("algorithms list is empty");
    if (active_taps == 0 || active_taps > L) fail("active_taps must lie in [1, L]");
    if (!(beta > 0.0)) fail("beta must be positive");
    if (!(sigma >= 0.0)) fail("sigma must be nonnegative (0 selects beta)");
    for (double k : {kappa0_l1, kappa0_l0, you_kappa0_l1, you_kappa0_l0, vss_kappa0})
        if (!(k >= 0.0) || !std::isfinite(k)) fail("initial kappa values must be nonnegative");
    for (double g : {gamma_vss1_l1, gamma_vss1_l0, gamma_vss2_l1, gamma_vss2_l0})
        if (!(g > 0.0) || !std::isfinite(g)) fail("gamma values must be positive");
    VssParams p;
    p.lambda = lambda;
    p.alpha = alpha;
    p.eta = eta;
    p.kappa_min = std::min(kappa_min_l1, kappa_min_l0);
    p.conv_short = conv_short;
    p.conv_long = conv_long;
    p.conv_ratio = conv_ratio;
    try {
        p.validate();
    } catch (const ParameterError& e) {
        fail(e.what());
    }
}

MeasureSpec ExperimentConfig::vss1_measure(Attractor a) const {
    if (a == Attractor::L0) return {MeasureKind::M3, sigma > 0.0 ? sigma : beta, 0.0};
    return {MeasureKind::M1, 1.0, 0.0};
}

StepSizeController ExperimentConfig::make_controller(const Algorithm& alg) const {
    const bool l0 = alg.attractor == Attractor::L0;
    VssParams p;
    p.lambda = lambda;
    p.alpha = alpha;
    p.eta = eta;
    p.kappa_min = l0 ? kappa_min_l0 : kappa_min_l1;
    p.conv_short = conv_short;
    p.conv_long = conv_long;
    p.conv_ratio = conv_ratio;
    p.kappa0 = vss_kappa0;
    switch (alg.method) {
        case Method::Lms: return StepSizeController::fixed(0.0);
        case Method::ZapFixed: return StepSizeController::fixed(l0 ? kappa0_l0 : kappa0_l1);
        case Method::ZapYou:
            p.kappa0 = l0 ? you_kappa0_l0 : you_kappa0_l1;
            return StepSizeController::you(p.kappa0, p);
        case Method::ZapVss1:
            p.gamma = l0 ? gamma_vss1_l0 : gamma_vss1_l1;
            return StepSizeController::proposed(vss_kappa0, vss1_measure(alg.attractor), p);
        case Method::ZapVss2:
            p.gamma = l0 ? gamma_vss2_l0 : gamma_vss2_l1;
            return StepSizeController::proposed(vss_kappa0, {MeasureKind::Hoyer, 1.0, 0.0}, p);
    }
    throw ConfigError("unhandled algorithm");
}

RngSeed run_seed(std::uint64_t base, std::size_t run_id) {
    return RngSeed{base + static_cast<std::uint64_t>(run_id) * kRunStride};
}

RunSignals make_run_signals(const ExperimentConfig& config, std::size_t run_id) {
    const RngSeed seed = run_seed(config.seed, run_id);
    const auto n = static_cast<Eigen::Index>(config.n_samples);
    const auto split = static_cast<Eigen::Index>(config.switch_at);

    Signal x = white_noise(config.n_samples, seed.offset(stream::kInput));
    ImpulseResponse h_before = sparse_impulse(config.L, config.active_taps, seed.offset(stream::kChannelA));
    ImpulseResponse h_after = config.scenario == Scenario::SparseSwitchSparse
                                  ? sparse_impulse(config.L, config.active_taps, seed.offset(stream::kChannelB))
                                  : dispersive_impulse(config.L, seed.offset(stream::kChannelB));

    // echo path changes at switch_at; the far-end history carries over
    const Signal y_before = synthesize_echo(x, h_before);
    const Signal y_after = synthesize_echo(x, h_after);
    Signal d(n);
    // each segment is calibrated to the target SNR on its own echo power
    if (split > 0)
        d.head(split) = add_noise_at_snr(y_before.head(split), config.snr_db, seed.offset(stream::kNoise));
    d.tail(n - split) =
        add_noise_at_snr(y_after.tail(n - split), config.snr_db, seed.offset(stream::kNoise + 1));
    return RunSignals{std::move(x), std::move(d), std::move(h_before), std::move(h_after)};
}

Trace run_algorithm(const ExperimentConfig& config, const RunSignals& signals, const Algorithm& alg,
                    std::size_t run_id) {
    const std::size_t n = config.n_samples;
    Trace trace{run_id, alg, std::vector<double>(n), std::vector<double>(n)};

    FilterStated state(static_cast<Eigen::Index>(config.L));
    AdaptParams<double> params;
    params.mu = config.mu;
    params.beta = config.beta;
    params.attractor = alg.method == Method::Lms ? Attractor::None : alg.attractor;
    params.validate();
    StepSizeController controller = config.make_controller(alg);

    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        push_sample(state, signals.x[k]);
        const double e = filter_error(state, signals.d[k]);
        params.kappa = alg.method == Method::Lms ? 0.0 : controller.next(e, state.w);
        adapt(state, e, params);

        const ImpulseResponse& h = i < config.switch_at ? signals.h_before : signals.h_after;
        const double m = misalignment_db(h, state.w, config.misalign_convention);
        if (!std::isfinite(e) || !std::isfinite(m) || !std::isfinite(params.kappa))
            throw DivergenceError(alg.label(), i, run_id);
        trace.misalign_db[i] = m;
        trace.kappa[i] = params.kappa;
    }
    return trace;
}

std::vector<Trace> run_scenario(const ExperimentConfig& config) {
    config.validate();
    const std::size_t runs = config.runs;
    const std::size_t n_alg = config.algorithms.size();
    std::vector<Trace> out(runs * n_alg);

    std::size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, runs);

    std::atomic<std::size_t> next_run{0};
    std::exception_ptr first_error;
    std::size_t first_error_run = runs;
    std::mutex error_mutex;

    auto worker = [&] {
        for (std::size_t r = next_run++; r < runs; r = next_run++) {
            try {
                const RunSignals signals = make_run_signals(config, r);
                for (std::size_t a = 0; a < n_alg; ++a)
                    out[r * n_alg + a] = run_algorithm(config, signals, config.algorithms[a], r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                // lowest failing run wins so the report is independent of scheduling
                if (r < first_error_run) {
                    first_error_run = r;
                    first_error = std::current_exception();
                }
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<Trace> aggregate_runs(const std::vector<Trace>& traces) {
    std::vector<Trace> avg;
    std::vector<std::size_t> counts;
    for (const auto& t : traces) {
        auto it = std::find_if(avg.begin(), avg.end(),
                               [&](const Trace& a) { return a.algorithm == t.algorithm; });
        if (it == avg.end()) {
            avg.push_back(Trace{0, t.algorithm, std::vector<double>(t.misalign_db.size(), 0.0),
                                std::vector<double>(t.kappa.size(), 0.0)});
            counts.push_back(0);
            it = avg.end() - 1;
        }
        if (it->misalign_db.size() != t.misalign_db.size())
            throw ParameterError("aggregate_runs: traces of one algorithm differ in length");
        for (std::size_t i = 0; i < t.misalign_db.size(); ++i) {
            it->misalign_db[i] += t.misalign_db[i];
            it->kappa[i] += t.kappa[i];
        }
        ++counts[static_cast<std::size_t>(it - avg.begin())];
    }
    for (std::size_t a = 0; a < avg.size(); ++a) {
        const double c = static_cast<double>(counts[a]);
        for (auto& v : avg[a].misalign_db) v /= c;
        for (auto& v : avg[a].kappa) v /= c;
    }
    return avg;
}

std::vector<TraceRecord> to_records(const std::vector<Trace>& traces) {
    std::vector<const Trace*> order;
    order.reserve(traces.size());
    for (const auto& t : traces) order.push_back(&t);
    // stable: configured algorithm order is kept within a run
    std::stable_sort(order.begin(), order.end(),
                     [](const Trace* a, const Trace* b) { return a->run_id < b->run_id; });
    std::vector<TraceRecord> rows;
    for (const Trace* t : order) {
        const std::string label = t->algorithm.label();
        for (std::size_t i = 0; i < t->misalign_db.size(); ++i)
            rows.push_back({t->run_id, label, i, t->misalign_db[i], t->kappa[i]});
    }
    return rows;
}

double tail_mean(const std::vector<double>& v, std::size_t begin, std::size_t end) {
    end = std::min(end, v.size());
    if (begin >= end) throw ParameterError("tail_mean: empty range");
    const std::size_t len = end - begin;
    const std::size_t tail = std::max<std::size_t>(1, len / 10);
    double acc = 0.0;
    for (std::size_t i = end - tail; i < end; ++i) acc += v[i];
    return acc / static_cast<double>(tail);
}

std::vector<SummaryRow> summarize(const std::vector<Trace>& averaged, std::size_t switch_at) {
    std::vector<SummaryRow> rows;
    for (const auto& t : averaged) {
        const std::size_t n = t.misalign_db.size();
        if (n == 0) continue;
        const std::size_t split = std::min(switch_at, n);
        SummaryRow r{t.algorithm.label(), NAN, NAN, NAN, NAN};
        if (split > 0) {
            r.ss_misalign_db_pre = tail_mean(t.misalign_db, 0, split);
            r.ss_kappa_pre = tail_mean(t.kappa, 0, split);
        }
        if (split < n) {
            r.ss_misalign_db_post = tail_mean(t.misalign_db, split, n);
            r.ss_kappa_post = tail_mean(t.kappa, split, n);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_csv(const std::vector<Trace>& traces, std::size_t switch_at,
              const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + out_dir.string() + "': " + ec.message());

    const auto traces_path = out_dir / "traces.csv";
    {
        auto out = open_out(traces_path);
        out << "run_id,algorithm,sample,misalign_db,kappa\n";
        for (const auto& r : to_records(traces))
            out << r.run_id << ',' << r.algorithm << ',' << r.sample << ',' << fmt9(r.misalign_db)
                << ',' << fmt9(r.kappa) << '\n';
        close_out(out, traces_path);
    }

    const auto summary_path = out_dir / "summary.csv";
    {
        auto out = open_out(summary_path);
        out << "algorithm,ss_misalign_db_pre,ss_misalign_db_post,ss_kappa_pre,ss_kappa_post\n";
        for (const auto& r : summarize(aggregate_runs(traces), switch_at))
            out << r.algorithm << ',' << fmt9(r.ss_misalign_db_pre) << ','
                << fmt9(r.ss_misalign_db_post) << ',' << fmt9(r.ss_kappa_pre) << ','
                << fmt9(r.ss_kappa_post) << '\n';
        close_out(out, summary_path);
    }
}

std::size_t first_crossing(const std::vector<double>& v, double threshold, std::size_t begin,
                           std::size_t end) {
    end = std::min(end, v.size());
    for (std::size_t i = begin; i < end; ++i)
        if (v[i] <= threshold) return i;
    return end;
}

}  // namespace zap
