#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rfsep/eval.hpp"

using namespace rfsep;
using namespace rfsep::eval;

namespace {

SweepSpec toy_spec() {
    SweepSpec s;
    s.mixture = MixtureKind::scalar_toy;
    s.signal.d_toy = 40;
    s.sir_db_list = {-15, -6};
    s.trials_per_point = 3;
    s.methods = {"mf", "lmmse", "basis_orig", "basis_map", "basis_alpha", "alpha_rgs"};
    s.iterations = 300;
    s.basis_n_inner = 4;
    s.master_seed = 17;
    s.record_timing = false;
    return s;
}

}  // namespace

TEST_CASE("mean and confidence interval") {
    const auto one = mean_ci95({0.25});
    CHECK(one.mean == 0.25);
    CHECK(one.lo == 0.25);
    CHECK(one.hi == 0.25);
    const auto a = mean_ci95({0.1, 0.3});
    const auto b = mean_ci95({0.1, 0.3, 0.1, 0.3});
    CHECK(a.mean == doctest::Approx(b.mean));
    CHECK(b.hi - b.lo < a.hi - a.lo);
    // Bernoulli(0.1) coverage
    Rng rng(1);
    std::bernoulli_distribution bd(0.1);
    int covered = 0;
    for (int m = 0; m < 100; ++m) {
        std::vector<double> v(1000);
        for (auto& x : v) x = bd(rng) ? 1.0 : 0.0;
        const auto c = mean_ci95(v);
        covered += (c.lo <= 0.1 && 0.1 <= c.hi) ? 1 : 0;
    }
    CHECK(covered >= 93);
}

TEST_CASE("aggregate groups by method and SIR") {
    std::vector<ResultRow> rows;
    for (int t = 0; t < 4; ++t) {
        rows.push_back({"mf", -6, 2, t, 0, 0.1 * t, 1.0, 0, 0, ""});
        rows.push_back({"alpha_rgs", -6, 2, t, 0, 0.0, 0.5, 10, 0, ""});
    }
    rows.push_back({"alpha_rgs", -6, 2, 4, 0, NAN, NAN, -1, 0, "boom"});
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].method == "mf");
    CHECK(agg[0].ber_mean == doctest::Approx(0.15));
    CHECK(agg[1].n == 4);
    CHECK(agg[1].n_failed == 1);
    CHECK(agg[1].ber_mean == 0.0);
}

TEST_CASE("sweep rows, seeds and kappa = 0") {
    auto s = toy_spec();
    s.sir_db_list = {-24, INFINITY};
    const auto rows = run_sweep(s, 2);
    REQUIRE(rows.size() == 2 * 3 * 6);
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.seed == trial_seed(17, r.sir_db == -24 ? 0 : 1, r.trial));
        if (r.kappa == 0.0) {
            CHECK(r.ber == 0.0);
        } else {
            CHECK(r.ber >= 0.0);
            CHECK(r.ber <= 1.0);
            CHECK(r.mse >= 0.0);
        }
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK((rows[i].seed != rows[i - 1].seed || rows[i].trial == rows[i - 1].trial));
}

TEST_CASE("mf at -24 dB matches the Gaussian-interference oracle") {
    // interference power at the MF output: each active OFDM tone passes with |H(k/64)|^2 / sps
    const Scenario sc(MixtureKind::qpsk_ofdm_qpsk, SignalParams{});
    const auto& h = sc.rrc()->pulse().taps;
    double g = 0.0;
    for (int k : sc.ofdm_spec().active) {
        cplx H = 0.0;
        for (Eigen::Index m = 0; m < h.size(); ++m) H += h[m] * std::polar(1.0, -2.0 * M_PI * k * m / 64.0);
        g += std::norm(H) / 16.0 / sc.ofdm_spec().n_active();
    }
    const double kappa = sig::kappa_from_sir_db(-24);
    const double oracle = 0.5 * std::erfc(1.0 / std::sqrt(kappa * kappa * g) / std::sqrt(2.0));
    CHECK(oracle == doctest::Approx(0.392).epsilon(0.01));
    SweepSpec s;
    s.sir_db_list = {-24};
    s.trials_per_point = 40;
    s.methods = {"mf"};
    const auto rows = run_sweep(s, 1);
    double m = 0.0;
    for (const auto& r : rows) m += r.ber / rows.size();
    CHECK(std::abs(m - oracle) < 0.015);
}

TEST_CASE("sweep csv is identical across thread counts and matches the serial runner") {
    const auto s = toy_spec();
    const std::string one = sweep_csv_string(run_sweep(s, 1));
    CHECK(sweep_csv_string(run_sweep(s, 3)) == one);
    CHECK(sweep_csv_string(run_sweep_serial(s)) == one);
    CHECK(one.rfind("method,sir_db,kappa,trial,seed,ber,mse,iters,wall_ms\n", 0) == 0);
}

TEST_CASE("sweep csv round trip") {
    const auto rows = run_sweep(toy_spec(), 1);
    const auto p = (std::filesystem::temp_directory_path() / "rfsep_sweep.csv").string();
    write_sweep_csv(p, rows);
    const auto back = read_sweep_csv(p);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].method == rows[i].method);
        CHECK(back[i].seed == rows[i].seed);
        CHECK(back[i].ber == rows[i].ber);
        CHECK(back[i].mse == rows[i].mse);
    }
}

TEST_CASE("failed runs become NaN rows") {
    auto s = toy_spec();
    s.methods = {"alpha_rgs"};
    s.eta_max = 1e4;
    s.eta_min = 1e3;
    const auto rows = run_sweep(s, 1);
    for (const auto& r : rows) {
        CHECK(std::isnan(r.ber));
        CHECK(r.iters == -1);
        CHECK(r.error.find("diverged") != std::string::npos);
    }
    const auto agg = aggregate(rows);
    CHECK(agg[0].n_failed == 3);
}

TEST_CASE("omega ablation") {
    auto s = toy_spec();
    s.methods = {"alpha_rgs"};
    const std::vector<double> ratios{0.01, 1, 100};
    const auto rows = omega_ablation(s, ratios, 2);
    REQUIRE(rows.size() == 2 * 3 * 3);
    const auto again = omega_ablation(s, ratios, 1);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(((rows[i].ber == again[i].ber) || (std::isnan(rows[i].ber) && std::isnan(again[i].ber))));
    // the same mixture is used for every ratio
    CHECK(rows[0].seed == rows[3].seed);
    const auto p = (std::filesystem::temp_directory_path() / "rfsep_abl.csv").string();
    write_ablation_csv(p, rows);
    std::ifstream f(p);
    std::string header;
    std::getline(f, header);
    CHECK(header == "sir_db,kappa,omega_over_kappa2,trial,seed,ber,mse,iters,wall_ms");
    CHECK_THROWS_AS(omega_ablation(s, {}, 1), std::invalid_argument);
    CHECK(aggregate_ablation(rows).size() == 6);
}

TEST_CASE("spec validation") {
    auto s = toy_spec();
    s.methods = {"nope"};
    CHECK_THROWS_AS(run_sweep(s, 1), std::invalid_argument);
    s = toy_spec();
    s.trials_per_point = 0;
    CHECK_THROWS_AS(run_sweep(s, 1), std::invalid_argument);
    s = toy_spec();
    s.sir_db_list = {};
    CHECK_THROWS_AS(run_sweep(s, 1), std::invalid_argument);
}
