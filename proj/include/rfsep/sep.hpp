#pragma once

#include <cstdint>
#include <vector>

#include "rfsep/oracle.hpp"
#include "rfsep/schedule.hpp"
#include "rfsep/score.hpp"

namespace rfsep::sep {

struct SepConfig {
    int N = 2000;
    double eta_max = 5e-3;
    double eta_min = 1e-6;
    double omega = -1.0;  // < 0 means kappa^2
    int t_lo = 2;
    int t_hi = 50;
    std::uint64_t seed = 0;
    int trace_every = 0;  // 0: no trace
    double divergence_factor = 1e3;

    void validate(const smooth::NoiseSchedule& sched) const;
    double omega_for(double kappa) const { return omega < 0.0 ? kappa * kappa : omega; }
};

struct SeparationResult {
    CVec s_hat;
    CVec b_hat;
    std::vector<int> trace_iter;
    std::vector<double> grad_norm_trace;
    std::vector<double> mse_trace;  // empty unless truth was given
    std::vector<CVec> theta_trace;
    double wall_ms = 0.0;
    int iters = 0;
};

double cosine_lr(int i, int N, double eta_max, double eta_min);

// (gamma_t/sigma_t)(z_hat - z) at s~ = gamma_t theta + sigma_t z
CVec sds_gradient(const CVec& theta, const score::ScoreModel& score_s, const smooth::NoiseSchedule& sched, int t,
                  const CVec& z);

SeparationResult alpha_rgs(const CVec& y, double kappa, const score::ScoreModel& score_s,
                           const score::ScoreModel& score_b, const smooth::NoiseSchedule& sched,
                           const SepConfig& cfg, const CVec& theta0, const CVec* truth = nullptr);

// b_hat = (y - s_hat)/kappa, nudged by ulps (s_hat too if needed) so that
// s_hat + kappa*b_hat reproduces y exactly in floating point
void enforce_hard_constraint(const CVec& y, double kappa, CVec& s_hat, CVec& b_hat);
bool satisfies_hard_constraint(const CVec& y, double kappa, const CVec& s_hat, const CVec& b_hat);

void write_trace_csv(const std::string& path, const SeparationResult& r);

// ---- 1-D landscapes of the smoothed loss

struct LandscapeSpec {
    std::vector<double> theta_grid;
    double y = 0.0;
    double kappa = 1.0;
    double omega = 0.0;  // 0: prior term only
    std::vector<int> levels;
    int mc_draws = 256;
    std::uint64_t seed = 0;
};

struct LandscapeCurves {
    std::vector<int> levels;
    std::vector<double> theta;
    std::vector<std::vector<double>> per_level;  // [level][grid]
    std::vector<double> averaged;
};

// L_t(theta) = -E log p_s,t(gamma theta + sigma z) - omega E log p_b,t(gamma (y-theta)/kappa + sigma z'),
// common random numbers across the grid
LandscapeCurves landscape_1d(const LandscapeSpec& spec, const score::FdOracle& src_s, const score::FdOracle* src_b,
                             const smooth::NoiseSchedule& sched);
LandscapeCurves landscape_1d_serial(const LandscapeSpec& spec, const score::FdOracle& src_s,
                                    const score::FdOracle* src_b, const smooth::NoiseSchedule& sched);

// strict interior local minima
std::vector<double> local_minima(const std::vector<double>& grid, const std::vector<double>& curve);

void write_landscape_csv(const std::string& path, const LandscapeCurves& c);

}  // namespace rfsep::sep
