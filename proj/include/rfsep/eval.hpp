#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfsep/scenario.hpp"

namespace rfsep::eval {

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> m{"mf", "lmmse", "basis_orig", "basis_map", "basis_alpha", "alpha_rgs"};
    return m;
}

struct SweepSpec {
    std::vector<double> sir_db_list{-24, -21, -18, -15, -12, -9, -6, -3};
    int trials_per_point = 25;
    std::vector<std::string> methods{"mf", "lmmse", "alpha_rgs"};
    MixtureKind mixture = MixtureKind::qpsk_ofdm_qpsk;
    std::uint64_t master_seed = 0;
    SignalParams signal;

    double beta_1 = 1e-4;
    double beta_T = 0.05;
    int T = 50;

    // unset fields fall back to the mixture's defaults
    std::optional<int> iterations;
    std::optional<double> eta_max, eta_min;
    std::optional<int> t_lo, t_hi;
    double omega_over_kappa2 = 1.0;

    int basis_n_inner = 100;
    std::optional<double> basis_lr_orig, basis_lr_variant;

    bool cov_empirical = false;  // estimate C_bb from cov_samples draws instead of the exact form
    int cov_samples = 10000;
    std::string cov_bb_file;  // load C_bb instead of estimating when set

    bool record_timing = true;

    void validate() const;
    sep::SepConfig sep_config(const Scenario& sc) const;
};

struct ResultRow {
    std::string method;
    double sir_db = 0.0;
    double kappa = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double ber = 0.0;
    double mse = 0.0;
    long iters = 0;
    double wall_ms = 0.0;
    std::string error;  // empty on success
};

struct AblationRow {
    double sir_db = 0.0;
    double kappa = 0.0;
    double ratio = 1.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double ber = 0.0;
    double mse = 0.0;
    long iters = 0;
    double wall_ms = 0.0;
    std::string error;
};

struct AggRow {
    std::string method;
    double sir_db = 0.0;
    int n = 0;
    int n_failed = 0;
    double ber_mean = 0.0, ber_lo = 0.0, ber_hi = 0.0;
    double mse_mean = 0.0, mse_lo = 0.0, mse_hi = 0.0;
};

// seed recorded in each row; mixture and method streams derive from it
std::uint64_t trial_seed(std::uint64_t master, std::size_t sir_index, int trial);

// tasks (sir, trial, method) run in parallel; rows come back sorted by (sir index, trial, method order)
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int threads = 0);
std::vector<ResultRow> run_sweep_serial(const SweepSpec& spec);

// alpha_rgs only, omega = ratio * kappa^2; same mixtures across ratios
std::vector<AblationRow> omega_ablation(const SweepSpec& spec, const std::vector<double>& ratios, int threads = 0);

// per (method, sir): mean and 95% normal-approximation CI; failed rows excluded
std::vector<AggRow> aggregate(const std::vector<ResultRow>& rows);
// same for ablation rows, keyed by (sir, ratio) with method "r=<ratio>"
std::vector<AggRow> aggregate_ablation(const std::vector<AblationRow>& rows);

struct MeanCi {
    double mean, lo, hi;
};
MeanCi mean_ci95(const std::vector<double>& v);

void write_sweep_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_sweep_csv(const std::string& path);
void write_ablation_csv(const std::string& path, const std::vector<AblationRow>& rows);
void write_aggregate_csv(const std::string& path, const std::vector<AggRow>& rows);
std::string sweep_csv_string(const std::vector<ResultRow>& rows);

}  // namespace rfsep::eval
