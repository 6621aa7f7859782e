#pragma once

#include <vector>

#include "rfsep/types.hpp"

// Elementwise posterior-mean kernels E[a | x~] for i.i.d. scalar priors.
// Each has a serial reference and an OpenMP version; outputs are identical.
namespace rfsep::kernels {

struct DiscretePrior {
    std::vector<cplx> atoms;
    std::vector<double> log_w;
    Field field = Field::complex;
};

// atoms at +-amp_re on the real axis and +-amp_im on the imaginary axis, uniform
struct AntipodalPrior {
    double amp_re = 1.0;
    double amp_im = 0.0;
    Field field = Field::complex;
};

struct GmmPrior {
    std::vector<double> log_w;
    std::vector<double> means;
    std::vector<double> vars;
};

void discrete_pm_serial(const CVec& x, const DiscretePrior& p, const Level& lv, CVec& out);
void discrete_pm_omp(const CVec& x, const DiscretePrior& p, const Level& lv, CVec& out);

void antipodal_pm_serial(const CVec& x, const AntipodalPrior& p, const Level& lv, CVec& out);
void antipodal_pm_omp(const CVec& x, const AntipodalPrior& p, const Level& lv, CVec& out);

void gmm_pm_serial(const CVec& x, const GmmPrior& p, const Level& lv, CVec& out);
void gmm_pm_omp(const CVec& x, const GmmPrior& p, const Level& lv, CVec& out);

// below this length the OpenMP versions run on the calling thread
inline constexpr Eigen::Index kParallelMin = 2048;

}  // namespace rfsep::kernels
