#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rfsep/kernels.hpp"
#include "rfsep/sig.hpp"
#include "rfsep/transform.hpp"

namespace rfsep::score {

// Score convention: complex field uses the conjugate (Wirtinger) gradient
// 0.5*(d/dre + j d/dim) log p, real field the ordinary derivative. Either way
// the smoothed score is (gamma*E[a|x~] - x~)/sigma^2.
class ScoreModel {
public:
    virtual ~ScoreModel() = default;
    virtual Field field() const = 0;
    virtual CVec posterior_mean(const CVec& x, const Level& lv) const = 0;
    virtual CVec eval(const CVec& x, const Level& lv) const { return tweedie_score(x, lv); }
    CVec tweedie_score(const CVec& x, const Level& lv) const;
};

using ScorePtr = std::shared_ptr<const ScoreModel>;

// z_hat = -sigma * score
CVec denoiser_from_score(const ScoreModel& m, const CVec& x, const Level& lv);

class GaussianScore final : public ScoreModel {
public:
    // diagonal covariance; size-1 mean/var broadcast to any length
    GaussianScore(CVec mean, RVec var, Field field = Field::complex);
    // full Hermitian PSD covariance
    GaussianScore(CVec mean, CMat cov, Field field = Field::complex);
    static GaussianScore scalar(double mean, double var, Field field = Field::real);

    Field field() const override { return field_; }
    CVec posterior_mean(const CVec& x, const Level& lv) const override;
    CVec eval(const CVec& x, const Level& lv) const override;

private:
    cplx mean_at(Eigen::Index i) const { return mean_.size() == 1 ? mean_[0] : mean_[i]; }
    double var_at(Eigen::Index i) const { return var_.size() == 1 ? var_[0] : var_[i]; }
    CVec centered(const CVec& x, const Level& lv) const;
    CVec solve_smoothed(const CVec& r, const Level& lv) const;
    CVec finish(const CVec& v) const;

    CVec mean_;
    RVec var_;
    std::optional<CMat> cov_;
    Field field_;
};

// finite alphabet with prior weights; i.i.d. per element
class ConstellationScore final : public ScoreModel {
public:
    explicit ConstellationScore(const sig::Constellation& c, Field field = Field::complex);
    ConstellationScore(std::vector<cplx> atoms, std::vector<double> weights, Field field);

    Field field() const override { return prior_.field; }
    // factorized tanh path for BPSK/QPSK-shaped uniform alphabets
    CVec posterior_mean(const CVec& x, const Level& lv) const override;
    CVec posterior_mean_generic(const CVec& x, const Level& lv) const;
    // sum_k phi_k (gamma a_k - x)/sigma^2, computed without the posterior mean
    CVec eval(const CVec& x, const Level& lv) const override;
    bool factorized() const { return antipodal_.has_value(); }
    const std::vector<cplx>& atoms() const { return prior_.atoms; }
    std::vector<double> weights() const;

private:
    kernels::DiscretePrior prior_;
    std::optional<kernels::AntipodalPrior> antipodal_;
};

struct GmmSpec {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> vars;
    int K() const { return static_cast<int>(means.size()); }
    void validate() const;
};

// real scalar K-component Gaussian mixture
class GmmScore final : public ScoreModel {
public:
    explicit GmmScore(GmmSpec spec);
    Field field() const override { return Field::real; }
    CVec posterior_mean(const CVec& x, const Level& lv) const override;
    // responsibility-weighted per-component Gaussian scores
    CVec eval(const CVec& x, const Level& lv) const override;
    const GmmSpec& spec() const { return spec_; }

private:
    GmmSpec spec_;
    kernels::GmmPrior prior_;
};

// x~ = H a + noise: E[x|x~] ~ H E[a | H^+ x~] with the inner per-symbol posterior mean
class TransformScore final : public ScoreModel {
public:
    TransformScore(ScorePtr inner, std::shared_ptr<const LinearTransform> H);
    Field field() const override { return inner_->field(); }
    CVec posterior_mean(const CVec& x, const Level& lv) const override;
    const LinearTransform& transform() const { return *H_; }

private:
    ScorePtr inner_;
    std::shared_ptr<const LinearTransform> H_;
};

}  // namespace rfsep::score
