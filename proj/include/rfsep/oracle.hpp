#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rfsep/score.hpp"

namespace rfsep::score {

// scalar source for the numerical oracle
struct ScalarSource {
    enum class Kind { atoms, gmm, pdf };
    Kind kind = Kind::atoms;
    Field field = Field::real;
    std::vector<cplx> atoms;
    std::vector<double> weights;
    GmmSpec gmm;
    std::function<double(double)> log_pdf;
    double lo = 0.0, hi = 0.0;
    int n_grid = 0;

    static ScalarSource from_atoms(std::vector<cplx> atoms, std::vector<double> weights, Field field);
    static ScalarSource uniform_atoms(std::vector<cplx> atoms, Field field);
    // smoothed mixture in closed form (a smoothed GMM is a GMM)
    static ScalarSource from_gmm(GmmSpec g);
    // density on [lo, hi], convolved by trapezoid summation
    static ScalarSource from_pdf(std::function<double(double)> log_pdf, double lo, double hi, int n_grid);
    static ScalarSource gaussian_pdf(double mean, double var, int n_grid = 20001);
    static ScalarSource gmm_pdf(const GmmSpec& g, int n_grid = 40001);

    // per-axis variance of the source about its mean (complex: E|a - m|^2)
    double variance() const;
};

// log p_t by explicit convolution with the smoothing kernel, score by Richardson-extrapolated central
// differences of log p with step h
class FdOracle {
public:
    static constexpr double kStep = 1e-4;

    explicit FdOracle(ScalarSource src, double h = kStep);
    double log_density(cplx x, const Level& lv) const;
    cplx score(cplx x, const Level& lv) const;
    std::vector<std::pair<double, double>> tabulate(const std::vector<double>& grid, const Level& lv) const;
    // sqrt(gamma^2 Var + sigma^2)
    double total_std(const Level& lv) const;
    const ScalarSource& source() const { return src_; }

private:
    ScalarSource src_;
    double h_;
    std::vector<double> log_pdf_table_;  // pdf kind: log p_s on the grid plus trapezoid weights
};

// |a - b| / max(|b|, floor)
double rel_error(cplx a, cplx b, double floor);

}  // namespace rfsep::score
