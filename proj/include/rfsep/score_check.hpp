#pragma once

#include <string>
#include <vector>

#include "rfsep/oracle.hpp"
#include "rfsep/schedule.hpp"

namespace rfsep::score {

struct CheckCase {
    std::string name;
    ScorePtr model;
    ScalarSource source;  // independent oracle source
    double mean = 0.0;    // source mean, grid centre is gamma*mean
    bool complex_line = false;
};

// Gaussian, BPSK, QPSK, symmetric 2-GMM, 4-GMM, 4-atom interference
std::vector<CheckCase> standard_cases();
GmmSpec landscape_gmm4();

struct CheckResult {
    std::string name;
    int t = 0;
    int points = 0;
    double max_rel = 0.0;
    bool pass = false;
};

// 101-point grid over +-3 total std; complex cases use the line x = u(1 + 0.5j) + 0.1j
std::vector<CheckResult> run_score_check(const smooth::NoiseSchedule& sched, const std::vector<int>& levels,
                                         double tol = 1e-5, int points = 101);

// `x,score` fixtures for the real-valued cases, file <name>_t<level>.csv
void dump_fixtures(const std::string& dir, const smooth::NoiseSchedule& sched, const std::vector<int>& levels,
                   int points = 101);
std::vector<CheckResult> check_fixtures(const std::string& dir, const smooth::NoiseSchedule& sched, double tol = 1e-5);

}  // namespace rfsep::score
