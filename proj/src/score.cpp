#include "rfsep/score.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>

namespace rfsep::score {

namespace {
void check_level(const Level& lv) {
    require(lv.sigma2 > 0.0 && lv.gamma > 0.0, "score: level needs sigma2 > 0 and gamma > 0");
}

CVec real_part_only(CVec v) {
    v.imag().setZero();
    return v;
}
}  // namespace

CVec ScoreModel::tweedie_score(const CVec& x, const Level& lv) const {
    check_level(lv);
    const CVec m = posterior_mean(x, lv);
    CVec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = (lv.gamma * m[i] - x[i]) / lv.sigma2;
    return field() == Field::real ? real_part_only(out) : out;
}

CVec denoiser_from_score(const ScoreModel& m, const CVec& x, const Level& lv) {
    return -lv.sigma() * m.eval(x, lv);
}

// ---- Gaussian

GaussianScore::GaussianScore(CVec mean, RVec var, Field field)
    : mean_(std::move(mean)), var_(std::move(var)), field_(field) {
    require(mean_.size() >= 1 && var_.size() >= 1, "gaussian score: empty mean or variance");
    require(var_.size() == 1 || mean_.size() == 1 || var_.size() == mean_.size(),
            "gaussian score: mean/variance length mismatch");
    require((var_.array() >= 0.0).all() && var_.allFinite(), "gaussian score: variances must be >= 0");
}

GaussianScore::GaussianScore(CVec mean, CMat cov, Field field)
    : mean_(std::move(mean)), var_(RVec::Zero(1)), field_(field) {
    require(cov.rows() == cov.cols() && cov.rows() == mean_.size(), "gaussian score: covariance shape mismatch");
    require((cov - cov.adjoint()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + cov.cwiseAbs().maxCoeff()),
            "gaussian score: covariance not Hermitian");
    cov_ = 0.5 * (cov + cov.adjoint());
}

GaussianScore GaussianScore::scalar(double mean, double var, Field field) {
    return GaussianScore(CVec(CVec::Constant(1, cplx(mean, 0.0))), RVec(RVec::Constant(1, var)), field);
}

CVec GaussianScore::centered(const CVec& x, const Level& lv) const {
    require(mean_.size() == 1 || mean_.size() == x.size(), "gaussian score: input length mismatch");
    if (var_.size() > 1) require(var_.size() == x.size(), "gaussian score: input length mismatch");
    CVec r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = x[i] - lv.gamma * mean_at(i);
    if (field_ == Field::real) r.imag().setZero();
    return r;
}

// (gamma^2 Sigma + sigma^2 I)^{-1} r
CVec GaussianScore::solve_smoothed(const CVec& r, const Level& lv) const {
    if (cov_) {
        CMat S = lv.gamma * lv.gamma * *cov_;
        S.diagonal().array() += lv.sigma2;
        Eigen::LLT<CMat> llt(S);
        if (llt.info() != Eigen::Success) throw NumericalError("gaussian score: smoothed covariance not PD");
        return llt.solve(r);
    }
    CVec out(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) out[i] = r[i] / (lv.gamma * lv.gamma * var_at(i) + lv.sigma2);
    return out;
}

CVec GaussianScore::finish(const CVec& v) const { return field_ == Field::real ? real_part_only(v) : v; }

CVec GaussianScore::eval(const CVec& x, const Level& lv) const {
    check_level(lv);
    return finish(-solve_smoothed(centered(x, lv), lv));
}

CVec GaussianScore::posterior_mean(const CVec& x, const Level& lv) const {
    check_level(lv);
    const CVec w = solve_smoothed(centered(x, lv), lv);
    CVec out(x.size());
    if (cov_) {
        const CVec sw = *cov_ * w;
        for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = mean_at(i) + lv.gamma * sw[i];
    } else {
        for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = mean_at(i) + lv.gamma * var_at(i) * w[i];
    }
    return finish(out);
}

// ---- finite alphabet

namespace {
std::optional<kernels::AntipodalPrior> detect_antipodal(const std::vector<cplx>& a, const std::vector<double>& w,
                                                        Field field) {
    for (double v : w)
        if (std::abs(v - w[0]) > 1e-15) return std::nullopt;
    if (a.size() == 2 && a[0] == -a[1] && a[0].imag() == 0.0 && a[0].real() != 0.0)
        return kernels::AntipodalPrior{std::abs(a[0].real()), 0.0, field};
    if (a.size() == 4 && field == Field::complex) {
        const double r = std::abs(a[0].real()), q = std::abs(a[0].imag());
        if (r == 0.0 || q == 0.0) return std::nullopt;
        int mask = 0;
        for (const cplx& p : a) {
            if (std::abs(p.real()) != r || std::abs(p.imag()) != q) return std::nullopt;
            mask |= 1 << ((p.real() > 0 ? 0 : 1) + (p.imag() > 0 ? 0 : 2));
        }
        if (mask == 0xF) return kernels::AntipodalPrior{r, q, field};
    }
    return std::nullopt;
}
}  // namespace

ConstellationScore::ConstellationScore(const sig::Constellation& c, Field field)
    : ConstellationScore(c.points, std::vector<double>(c.points.size(), 1.0 / c.points.size()), field) {}

ConstellationScore::ConstellationScore(std::vector<cplx> atoms, std::vector<double> weights, Field field) {
    require(!atoms.empty() && atoms.size() <= 64, "constellation score: need 1..64 atoms");
    require(weights.size() == atoms.size(), "constellation score: weights/atoms length mismatch");
    double tot = 0.0;
    for (double w : weights) {
        require(w > 0.0 && std::isfinite(w), "constellation score: weights must be positive");
        tot += w;
    }
    require(std::abs(tot - 1.0) < 1e-9, "constellation score: weights must sum to 1");
    if (field == Field::real)
        for (const cplx& a : atoms) require(a.imag() == 0.0, "constellation score: real field needs real atoms");
    prior_.atoms = std::move(atoms);
    prior_.field = field;
    for (double w : weights) prior_.log_w.push_back(std::log(w));
    antipodal_ = detect_antipodal(prior_.atoms, weights, field);
}

std::vector<double> ConstellationScore::weights() const {
    std::vector<double> w;
    for (double l : prior_.log_w) w.push_back(std::exp(l));
    return w;
}

CVec ConstellationScore::posterior_mean(const CVec& x, const Level& lv) const {
    check_level(lv);
    CVec out;
    if (antipodal_)
        kernels::antipodal_pm_omp(x, *antipodal_, lv, out);
    else
        kernels::discrete_pm_omp(x, prior_, lv, out);
    return out;
}

CVec ConstellationScore::posterior_mean_generic(const CVec& x, const Level& lv) const {
    check_level(lv);
    CVec out;
    kernels::discrete_pm_omp(x, prior_, lv, out);
    return out;
}

CVec ConstellationScore::eval(const CVec& x, const Level& lv) const {
    check_level(lv);
    const bool real = prior_.field == Field::real;
    const double den = real ? 2.0 * lv.sigma2 : lv.sigma2;
    const std::size_t K = prior_.atoms.size();
    std::vector<double> logit(K);
    CVec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const cplx xi = real ? cplx(x[i].real(), 0.0) : x[i];
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            logit[k] = prior_.log_w[k] - std::norm(xi - lv.gamma * prior_.atoms[k]) / den;
            mx = std::max(mx, logit[k]);
        }
        double z = 0.0;
        cplx acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double w = std::exp(logit[k] - mx);
            z += w;
            acc += w * (lv.gamma * prior_.atoms[k] - xi);
        }
        out[i] = acc / (z * lv.sigma2);
    }
    return out;
}

// ---- GMM

void GmmSpec::validate() const {
    require(!means.empty() && means.size() <= 64, "gmm: need 1..64 components");
    require(weights.size() == means.size() && vars.size() == means.size(), "gmm: field lengths differ");
    double tot = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) {
        require(weights[i] > 0.0, "gmm: weights must be > 0");
        require(vars[i] > 0.0 && std::isfinite(vars[i]), "gmm: variances must be > 0");
        require(std::isfinite(means[i]), "gmm: non-finite mean");
        tot += weights[i];
    }
    require(std::abs(tot - 1.0) < 1e-9, "gmm: weights must sum to 1");
}

GmmScore::GmmScore(GmmSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    for (double w : spec_.weights) prior_.log_w.push_back(std::log(w));
    prior_.means = spec_.means;
    prior_.vars = spec_.vars;
}

CVec GmmScore::posterior_mean(const CVec& x, const Level& lv) const {
    check_level(lv);
    CVec out;
    kernels::gmm_pm_omp(x, prior_, lv, out);
    return out;
}

CVec GmmScore::eval(const CVec& x, const Level& lv) const {
    check_level(lv);
    const std::size_t K = spec_.means.size();
    std::vector<double> logit(K), var(K);
    for (std::size_t k = 0; k < K; ++k) var[k] = lv.gamma * lv.gamma * spec_.vars[k] + lv.sigma2;
    CVec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double xi = x[i].real();
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            const double r = xi - lv.gamma * spec_.means[k];
            logit[k] = prior_.log_w[k] - 0.5 * std::log(var[k]) - r * r / (2.0 * var[k]);
            mx = std::max(mx, logit[k]);
        }
        double z = 0.0, acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double w = std::exp(logit[k] - mx);
            z += w;
            acc += w * (lv.gamma * spec_.means[k] - xi) / var[k];
        }
        out[i] = cplx(acc / z, 0.0);
    }
    return out;
}

// ---- transform

TransformScore::TransformScore(ScorePtr inner, std::shared_ptr<const LinearTransform> H)
    : inner_(std::move(inner)), H_(std::move(H)) {
    require(inner_ && H_, "transform score: null inner model or transform");
}

CVec TransformScore::posterior_mean(const CVec& x, const Level& lv) const {
    require(x.size() == H_->rows(), "transform score: input length " + std::to_string(x.size()) +
                                        " does not match transform rows " + std::to_string(H_->rows()));
    return H_->apply(inner_->posterior_mean(H_->pinv(x), lv));
}

}  // namespace rfsep::score
