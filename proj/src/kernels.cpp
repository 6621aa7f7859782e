#include "rfsep/kernels.hpp"

#include <cmath>
#include <limits>

namespace rfsep::kernels {

namespace {

cplx discrete_one(cplx x, const DiscretePrior& p, const Level& lv) {
    const std::size_t K = p.atoms.size();
    const bool real = p.field == Field::real;
    const double den = real ? 2.0 * lv.sigma2 : lv.sigma2;
    double mx = -std::numeric_limits<double>::infinity();
    double logit[64];
    for (std::size_t k = 0; k < K; ++k) {
        const cplx a = p.atoms[k];
        const double dist = real ? (x.real() - lv.gamma * a.real()) * (x.real() - lv.gamma * a.real())
                                 : std::norm(x - lv.gamma * a);
        logit[k] = p.log_w[k] - dist / den;
        if (logit[k] > mx) mx = logit[k];
    }
    double z = 0.0;
    cplx acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double w = std::exp(logit[k] - mx);
        z += w;
        acc += w * p.atoms[k];
    }
    acc /= z;
    return real ? cplx(acc.real(), 0.0) : acc;
}

cplx antipodal_one(cplx x, const AntipodalPrior& p, const Level& lv) {
    // per-axis noise variance is sigma2 (real field) or sigma2/2 (complex field)
    const double c = (p.field == Field::real ? 1.0 : 2.0) * lv.gamma / lv.sigma2;
    const double re = p.amp_re * std::tanh(c * p.amp_re * x.real());
    if (p.field == Field::real) return {re, 0.0};
    const double im = p.amp_im == 0.0 ? 0.0 : p.amp_im * std::tanh(c * p.amp_im * x.imag());
    return {re, im};
}

double gmm_one(double x, const GmmPrior& p, const Level& lv) {
    const std::size_t K = p.means.size();
    double logit[64];
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < K; ++i) {
        const double var = lv.gamma * lv.gamma * p.vars[i] + lv.sigma2;
        const double r = x - lv.gamma * p.means[i];
        logit[i] = p.log_w[i] - 0.5 * std::log(var) - r * r / (2.0 * var);
        if (logit[i] > mx) mx = logit[i];
    }
    double z = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        const double var = lv.gamma * lv.gamma * p.vars[i] + lv.sigma2;
        const double w = std::exp(logit[i] - mx);
        z += w;
        acc += w * (lv.gamma * p.vars[i] * x + lv.sigma2 * p.means[i]) / var;
    }
    return acc / z;
}

void check(const CVec& x, CVec& out, std::size_t K) {
    require(K >= 1 && K <= 64, "kernel: prior must have 1..64 components");
    out.resize(x.size());
}

}  // namespace

void discrete_pm_serial(const CVec& x, const DiscretePrior& p, const Level& lv, CVec& out) {
    check(x, out, p.atoms.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = discrete_one(x[i], p, lv);
}

void discrete_pm_omp(const CVec& x, const DiscretePrior& p, const Level& lv, CVec& out) {
    check(x, out, p.atoms.size());
    const Eigen::Index n = x.size();
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (Eigen::Index i = 0; i < n; ++i) out[i] = discrete_one(x[i], p, lv);
}

void antipodal_pm_serial(const CVec& x, const AntipodalPrior& p, const Level& lv, CVec& out) {
    out.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = antipodal_one(x[i], p, lv);
}

void antipodal_pm_omp(const CVec& x, const AntipodalPrior& p, const Level& lv, CVec& out) {
    out.resize(x.size());
    const Eigen::Index n = x.size();
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (Eigen::Index i = 0; i < n; ++i) out[i] = antipodal_one(x[i], p, lv);
}

void gmm_pm_serial(const CVec& x, const GmmPrior& p, const Level& lv, CVec& out) {
    check(x, out, p.means.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = cplx(gmm_one(x[i].real(), p, lv), 0.0);
}

void gmm_pm_omp(const CVec& x, const GmmPrior& p, const Level& lv, CVec& out) {
    check(x, out, p.means.size());
    const Eigen::Index n = x.size();
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (Eigen::Index i = 0; i < n; ++i) out[i] = cplx(gmm_one(x[i].real(), p, lv), 0.0);
}

}  // namespace rfsep::kernels
