#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "zap/errors.hpp"
#include "zap/harness.hpp"

using namespace zap;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.L = 32;
    c.n_samples = 2000;
    c.switch_at = 1000;
    c.active_taps = 4;
    c.mu = 0.01;
    c.kappa0_l1 = 1e-4;
    c.kappa0_l0 = 1e-5;
    c.you_kappa0_l1 = 1e-3;
    c.you_kappa0_l0 = 1e-4;
    c.conv_long = 256;
    c.conv_short = 32;
    c.gamma_vss1_l1 = 1e-3;
    c.gamma_vss1_l0 = 1e-4;
    c.gamma_vss2_l1 = 1e-2;
    c.gamma_vss2_l0 = 1e-3;
    c.runs = 3;
    c.threads = 1;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("zap_test_harness_" + name);
    fs::remove_all(p);
    return p;
}

double variance(const std::vector<double>& v, std::size_t b, std::size_t e) {
    const double n = double(e - b);
    const double mean = std::accumulate(v.begin() + long(b), v.begin() + long(e), 0.0) / n;
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += (v[i] - mean) * (v[i] - mean);
    return acc / (n - 1.0);
}

}  // namespace

TEST_CASE("misalignment_db") {
    const ImpulseResponse h(Eigen::Vector2d(1.0, 0.0));
    CHECK(misalignment_db(h, Eigen::Vector2d::Zero()) == 0.0);
    CHECK(misalignment_db(h, h.taps()) == kMisalignFloorDb);
    CHECK(misalignment_db(h, Eigen::Vector2d(0.9, 0.0)) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(misalignment_db(h, Eigen::Vector2d(0.9, 0.0), MisalignConvention::Squared) ==
          doctest::Approx(-20.0).epsilon(1e-12));
    CHECK_THROWS_AS(misalignment_db(h, Eigen::Vector3d::Zero()), ParameterError);
    CHECK_THROWS_AS(misalignment_db(ImpulseResponse(Eigen::Vector3d::Zero()), Eigen::Vector3d::Ones()),
                    UndefinedError);
}

TEST_CASE("algorithm labels round-trip") {
    const auto all = Algorithm::all();
    CHECK(all.size() == 9);
    for (const auto& a : all) CHECK(Algorithm::parse(a.label()) == a);
    CHECK(Algorithm::parse("ZAP_VSS2_L0") == Algorithm{Method::ZapVss2, Attractor::L0});
    CHECK_THROWS_AS(Algorithm::parse("NLMS"), ConfigError);
}

TEST_CASE("config validation") {
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    c.switch_at = c.n_samples;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.runs = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.L = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.lambda = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("VSS1 measure follows the attractor") {
    auto c = small_config();
    c.beta = 7.0;
    CHECK(c.vss1_measure(Attractor::L1).kind == MeasureKind::M1);
    CHECK(c.vss1_measure(Attractor::L0).kind == MeasureKind::M3);
    CHECK(c.vss1_measure(Attractor::L0).sigma == 7.0);
    c.sigma = 3.0;
    CHECK(c.vss1_measure(Attractor::L0).sigma == 3.0);
}

TEST_CASE("run signals are deterministic and switch channels") {
    auto c = small_config();
    const auto a = make_run_signals(c, 1);
    const auto b = make_run_signals(c, 1);
    CHECK(a.x == b.x);
    CHECK(a.d == b.d);
    CHECK(a.h_before.taps() == b.h_before.taps());
    CHECK(a.h_after.taps() != a.h_before.taps());
    CHECK(make_run_signals(c, 2).x != a.x);
    CHECK((a.h_before.taps().array() != 0.0).count() == 4);

    c.scenario = Scenario::SparseSwitchDispersive;
    const auto d = make_run_signals(c, 1);
    CHECK((d.h_after.taps().array() != 0.0).count() == 32);
    CHECK(d.h_before.taps() == a.h_before.taps());
    CHECK(d.x == a.x);
}

TEST_CASE("each segment is calibrated to the target SNR") {
    auto c = small_config();
    c.scenario = Scenario::SparseSwitchDispersive;
    c.n_samples = 40000;
    c.switch_at = 20000;
    const auto s = make_run_signals(c, 0);
    const auto split = static_cast<Eigen::Index>(c.switch_at);
    const Signal yb = synthesize_echo(s.x, s.h_before).head(split);
    const Signal ya = synthesize_echo(s.x, s.h_after).tail(s.x.size() - split);
    const Signal vb = s.d.head(split) - yb;
    const Signal va = s.d.tail(s.x.size() - split) - ya;
    CHECK(10 * std::log10(empirical_power(yb) / empirical_power(vb)) == doctest::Approx(30.0).epsilon(1e-6));
    CHECK(10 * std::log10(empirical_power(ya) / empirical_power(va)) == doctest::Approx(30.0).epsilon(1e-6));
}

TEST_CASE("paired runs: LMS equals a zero-kappa ZAP on identical signals") {
    auto c = small_config();
    c.kappa0_l1 = 0.0;
    c.kappa0_l0 = 0.0;
    c.algorithms = {Algorithm{Method::Lms, Attractor::None}, Algorithm{Method::ZapFixed, Attractor::L1},
                    Algorithm{Method::ZapFixed, Attractor::L0}};
    const auto traces = run_scenario(c);
    REQUIRE(traces.size() == 9);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(traces[r * 3 + 1].misalign_db == traces[r * 3].misalign_db);
        CHECK(traces[r * 3 + 2].misalign_db == traces[r * 3].misalign_db);
    }
}

TEST_CASE("run_scenario is reproducible and independent of thread count") {
    auto c = small_config();
    const auto a = run_scenario(c);
    c.threads = 3;
    const auto b = run_scenario(c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].run_id == b[i].run_id);
        CHECK(a[i].algorithm == b[i].algorithm);
        CHECK(a[i].misalign_db == b[i].misalign_db);
        CHECK(a[i].kappa == b[i].kappa);
    }
    c.seed = 99;
    CHECK(run_scenario(c)[0].misalign_db != a[0].misalign_db);
}

TEST_CASE("traces record nonnegative kappa and the switch discontinuity") {
    const auto c = small_config();
    const auto traces = run_scenario(c);
    for (const auto& t : traces) {
        CHECK(t.misalign_db.size() == c.n_samples);
        CHECK(*std::min_element(t.kappa.begin(), t.kappa.end()) >= 0.0);
        CAPTURE(t.algorithm.label());
        CHECK(t.misalign_db[c.switch_at] > t.misalign_db[c.switch_at - 1] + 1.0);
    }
}

TEST_CASE("noiseless small-step LMS misalignment never increases") {
    auto c = small_config();
    c.snr_db = kNoiseDisabled;
    c.mu = 0.005;
    c.runs = 1;
    c.algorithms = {Algorithm{}};
    const auto t = run_scenario(c).front();
    for (std::size_t i = 11; i < c.switch_at; ++i) CHECK(t.misalign_db[i] <= t.misalign_db[i - 1] + 1e-9);
    for (std::size_t i = c.switch_at + 11; i < c.n_samples; ++i)
        CHECK(t.misalign_db[i] <= t.misalign_db[i - 1] + 1e-9);
}

TEST_CASE("divergence is reported with algorithm and sample") {
    auto c = small_config();
    c.L = 512;
    c.active_taps = 16;
    c.mu = 0.05;
    c.algorithms = {Algorithm{}};
    c.runs = 1;
    try {
        run_scenario(c);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.algorithm() == "LMS");
        CHECK(e.sample() < c.n_samples);
        CHECK(std::string(e.what()).find("LMS") != std::string::npos);
    }
}

TEST_CASE("aggregate_runs") {
    const Algorithm lms{};
    const Trace a{0, lms, {1.0, 2.0, 3.0}, {0.5, 0.5, 0.5}};
    const Trace b{1, lms, {3.0, 4.0, 7.0}, {1.5, 0.5, 0.0}};
    const auto one = aggregate_runs({a});
    REQUIRE(one.size() == 1);
    CHECK(one[0].misalign_db == a.misalign_db);
    CHECK(one[0].kappa == a.kappa);

    const auto two = aggregate_runs({a, b});
    CHECK(two[0].misalign_db == std::vector<double>{2.0, 3.0, 5.0});
    CHECK(two[0].kappa == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("averaging ten runs shrinks steady-state variance about tenfold") {
    auto c = small_config();
    c.algorithms = {Algorithm{}};
    c.runs = 10;
    c.n_samples = 6000;
    c.switch_at = 3000;
    const auto traces = run_scenario(c);
    const auto avg = aggregate_runs(traces).front();
    double single = 0.0;
    for (const auto& t : traces) single += variance(t.misalign_db, 1000, 3000);
    single /= double(traces.size());
    const double averaged = variance(avg.misalign_db, 1000, 3000);
    const double ratio = single / averaged;
    MESSAGE("variance reduction: ", ratio);
    CHECK(ratio > 5.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("tail_mean and summaries use the final 10% of each segment") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 0.0);
    CHECK(tail_mean(v, 0, 50) == doctest::Approx(47.0));
    CHECK(tail_mean(v, 50, 100) == doctest::Approx(97.0));
    CHECK_THROWS_AS(tail_mean(v, 10, 10), ParameterError);

    const Trace t{0, Algorithm{}, v, std::vector<double>(100, 0.25)};
    const auto rows = summarize({t}, 50);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].algorithm == "LMS");
    CHECK(rows[0].ss_misalign_db_pre == doctest::Approx(47.0));
    CHECK(rows[0].ss_misalign_db_post == doctest::Approx(97.0));
    CHECK(rows[0].ss_kappa_post == 0.25);
}

TEST_CASE("first_crossing") {
    const std::vector<double> v{0.0, -5.0, -21.0, -19.0, -25.0};
    CHECK(first_crossing(v, -20.0, 0, 5) == 2);
    CHECK(first_crossing(v, -20.0, 3, 5) == 4);
    CHECK(first_crossing(v, -30.0, 0, 5) == 5);
}

TEST_CASE("emit_csv") {
    SUBCASE("empty trace list writes headers only") {
        const auto dir = scratch("empty");
        emit_csv({}, 10, dir);
        CHECK(slurp(dir / "traces.csv") == "run_id,algorithm,sample,misalign_db,kappa\n");
        CHECK(slurp(dir / "summary.csv") ==
              "algorithm,ss_misalign_db_pre,ss_misalign_db_post,ss_kappa_pre,ss_kappa_post\n");
    }
    SUBCASE("one record is one data line with 9 significant digits") {
        const auto dir = scratch("one");
        const Trace t{0, Algorithm{Method::ZapVss1, Attractor::L1}, {-12.3456789012345}, {1.0 / 3.0}};
        emit_csv({t}, 1, dir);
        CHECK(slurp(dir / "traces.csv") ==
              "run_id,algorithm,sample,misalign_db,kappa\n0,ZAP_VSS1_L1,0,-12.3456789,0.333333333\n");
    }
    SUBCASE("rows are ordered by run, configured algorithm, sample") {
        const auto dir = scratch("order");
        const Algorithm v2{Method::ZapVss2, Attractor::L0};
        const Algorithm lms{};
        emit_csv({Trace{1, v2, {1, 2}, {0, 0}}, Trace{0, v2, {3, 4}, {0, 0}}, Trace{0, lms, {5, 6}, {0, 0}}}, 1, dir);
        CHECK(slurp(dir / "traces.csv") ==
              "run_id,algorithm,sample,misalign_db,kappa\n"
              "0,ZAP_VSS2_L0,0,3,0\n0,ZAP_VSS2_L0,1,4,0\n0,LMS,0,5,0\n0,LMS,1,6,0\n"
              "1,ZAP_VSS2_L0,0,1,0\n1,ZAP_VSS2_L0,1,2,0\n");
    }
    SUBCASE("unwritable directory raises IoError with the path") {
        const auto blocker = scratch("blocker");
        std::ofstream(blocker) << "file";
        try {
            emit_csv({}, 1, blocker / "sub");
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find("blocker") != std::string::npos);
        }
    }
}
