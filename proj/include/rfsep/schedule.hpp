#pragma once

#include <string>
#include <vector>

#include "rfsep/types.hpp"

namespace rfsep::smooth {

// levels are 1-based: t = 1..T
struct NoiseSchedule {
    int T = 0;
    std::vector<double> beta;
    std::vector<double> alpha_bar;

    double gamma(int t) const;
    double sigma(int t) const;
    double sigma2(int t) const;
    Level level(int t) const;
};

NoiseSchedule build_schedule(double beta_1, double beta_T, int T);

// gamma_t x + sigma_t z
CVec smooth(const CVec& x, int t, const CVec& z, const NoiseSchedule& sched);
CVec smooth(const CVec& x, const Level& lv, const CVec& z);

// complex: re, im each N(0, 1/2); real: re N(0, 1), im 0
CVec draw_noise(Eigen::Index n, Field field, Rng& rng);

void write_schedule_csv(const std::string& path, const NoiseSchedule& s);
NoiseSchedule read_schedule_csv(const std::string& path);

}  // namespace rfsep::smooth
