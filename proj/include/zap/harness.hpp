#pragma once

// Echo-cancellation experiment runner: channel switch scenarios, the
// misalignment metric, Monte-Carlo averaging and CSV output.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zap/adaptive.hpp"
#include "zap/rng.hpp"
#include "zap/signalgen.hpp"
#include "zap/sparsity.hpp"
#include "zap/stepsize.hpp"

namespace zap {

/// Which controller drives kappa. Lms means no attractor at all.
enum class Method { Lms, ZapFixed, ZapYou, ZapVss1, ZapVss2 };

struct Algorithm {
    Method method{Method::Lms};
    Attractor attractor{Attractor::None};

    /// LMS, ZAP_FIXED_L1, ZAP_VSS2_L0, ...
    std::string label() const;
    static Algorithm parse(std::string_view label);
    static std::vector<Algorithm> all();

    friend bool operator==(const Algorithm&, const Algorithm&) = default;
};

enum class Scenario { SparseSwitchSparse, SparseSwitchDispersive };
std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

enum class MisalignConvention { Paper, Squared };
std::string_view to_string(MisalignConvention c);
MisalignConvention parse_convention(std::string_view name);

/// Floor reported when w == h exactly.
inline constexpr double kMisalignFloorDb = -120.0;

/// 10 log10(|h - w|_2 / |h|_2) (Paper) or 10 log10(|h - w|^2 / |h|^2) (Squared).
double misalignment_db(const ImpulseResponse& h, const Eigen::Ref<const Eigen::VectorXd>& w,
                       MisalignConvention convention = MisalignConvention::Paper);

/// Full scenario description. Field names double as config-file keys.
struct ExperimentConfig {
    std::size_t L{512};
    std::size_t n_samples{10000};
    double snr_db{30.0};
    double mu{0.001};
    std::vector<Algorithm> algorithms{Algorithm::all()};

    // channels
    std::size_t active_taps{16};
    Scenario scenario{Scenario::SparseSwitchSparse};
    std::size_t switch_at{5000};

    // attractor
    double beta{10.0};
    double sigma{0.0};  // M3 parameter for VSS1 with the l0 attractor; 0 means "use beta"
    double kappa0_l1{0.0};
    double kappa0_l0{0.0};

    // You's controller
    double you_kappa0_l1{0.0};
    double you_kappa0_l0{0.0};
    double eta{0.5};
    double kappa_min_l1{1e-6};
    double kappa_min_l0{1e-6};
    std::size_t conv_short{64};
    std::size_t conv_long{1024};
    double conv_ratio{0.98};

    // proposed controller
    double lambda{0.01};
    double alpha{0.01};
    double vss_kappa0{0.0};
    double gamma_vss1_l1{1.0};
    double gamma_vss1_l0{1.0};
    double gamma_vss2_l1{1.0};
    double gamma_vss2_l0{1.0};

    // run control
    std::size_t runs{10};
    std::uint64_t seed{1};
    std::size_t threads{0};  // 0 = hardware concurrency
    MisalignConvention misalign_convention{MisalignConvention::Paper};
    std::filesystem::path out_dir{"out"};

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;

    /// Measure used by VSS1 for an attractor: M1 for l1, M3 (sigma, or beta) for l0.
    MeasureSpec vss1_measure(Attractor a) const;

    /// kappa controller for an algorithm, freshly initialized.
    StepSizeController make_controller(const Algorithm& alg) const;
};

/// Per-sample outputs of one algorithm in one run.
struct Trace {
    std::size_t run_id{0};
    Algorithm algorithm{};
    std::vector<double> misalign_db;
    std::vector<double> kappa;
};

/// One output row.
struct TraceRecord {
    std::size_t run_id;
    std::string algorithm;
    std::size_t sample;
    double misalign_db;
    double kappa;
};

/// Channel pair and signals for one Monte-Carlo run (shared by every algorithm).
struct RunSignals {
    Signal x;
    Signal d;
    ImpulseResponse h_before;
    ImpulseResponse h_after;
};

/// Run-level seed: base + run_id * a large odd constant.
RngSeed run_seed(std::uint64_t base, std::size_t run_id);

RunSignals make_run_signals(const ExperimentConfig& config, std::size_t run_id);

/// One algorithm over one run's signals. Throws DivergenceError on non-finite output.
Trace run_algorithm(const ExperimentConfig& config, const RunSignals& signals,
                    const Algorithm& alg, std::size_t run_id);

/// Every run x every algorithm, ordered by (run_id, configured algorithm order).
/// Runs execute in parallel; ordering and values do not depend on the thread count.
std::vector<Trace> run_scenario(const ExperimentConfig& config);

/// Per-sample mean over runs, one trace per algorithm (run_id = 0).
std::vector<Trace> aggregate_runs(const std::vector<Trace>& traces);

/// Flatten to rows, sorted by (run_id, algorithm order, sample).
std::vector<TraceRecord> to_records(const std::vector<Trace>& traces);

/// Mean over the final 10% of a sample range [begin, end).
double tail_mean(const std::vector<double>& v, std::size_t begin, std::size_t end);

struct SummaryRow {
    std::string algorithm;
    double ss_misalign_db_pre;
    double ss_misalign_db_post;
    double ss_kappa_pre;
    double ss_kappa_post;
};

/// Steady-state figures per algorithm from averaged traces.
std::vector<SummaryRow> summarize(const std::vector<Trace>& averaged, std::size_t switch_at);

/// Writes traces.csv (all runs) and summary.csv (from the run average) into out_dir.
void emit_csv(const std::vector<Trace>& traces, std::size_t switch_at,
              const std::filesystem::path& out_dir);

/// First sample in [begin, end) at which v <= threshold, or end if never.
std::size_t first_crossing(const std::vector<double>& v, double threshold, std::size_t begin,
                           std::size_t end);

}  // namespace zap
