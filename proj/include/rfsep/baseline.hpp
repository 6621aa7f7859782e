#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include <Eigen/Cholesky>

#include "rfsep/schedule.hpp"
#include "rfsep/score.hpp"
#include "rfsep/transform.hpp"

namespace rfsep::baseline {

struct CovOracle {
    CMat C_ss;
    CMat C_bb;
    void validate(double tol = 1e-8) const;
};

// W = C_ss (C_ss + kappa^2 C_bb + eps I)^{-1}, eps = 1e-9 trace/d; factor once, apply many
class Lmmse {
public:
    Lmmse(const CovOracle& cov, double kappa);
    Lmmse(std::shared_ptr<const CMat> C_ss, const CMat& C_bb, double kappa);
    CVec apply(const CVec& y) const;
    double epsilon() const { return eps_; }
    // explicit W for tests only
    CMat weight_matrix() const;

private:
    std::shared_ptr<const CMat> Css_;
    Eigen::LLT<CMat> llt_;
    double eps_ = 0.0;
};

CVec lmmse(const CVec& y, const CovOracle& cov, double kappa);

using Sampler = std::function<CVec(Rng&)>;

// (1/M) sum x x^H, Hermitian-symmetrized; samples drawn in order from rng
CMat estimate_cov(const Sampler& sampler, int M, Rng& rng);

// H H^H for a symbol-domain transform with unit-power i.i.d. symbols
CMat transform_cov(const score::LinearTransform& H);

// covariance of H a circularly shifted by an offset uniform on 0..L-1 (any phase);
// circulant when L divides d
CMat shifted_transform_cov(const score::LinearTransform& H, int L);

// 16-byte header: uint64 d, uint64 flags (bit 0: complex), then row-major float64
// (complex entries as re,im pairs), little-endian
void write_cov_bin(const std::string& path, const CMat& C, bool complex_entries = true);
CMat read_cov_bin(const std::string& path);

enum class BasisVariant { original, map_constrained, alpha_modified };
BasisVariant basis_variant_from_string(const std::string& s);
std::string to_string(BasisVariant v);

struct BasisConfig {
    BasisVariant variant = BasisVariant::alpha_modified;
    int n_inner = 100;
    double lr_scale = 2e-6;  // step at the largest noise level
    double omega = -1.0;     // alpha_modified only; < 0 means kappa^2
    std::uint64_t seed = 0;
    double divergence_factor = 1e3;
    bool langevin_noise = true;
    void validate() const;
};

struct BasisResult {
    CVec s_hat;
    CVec b_hat;
    int iters = 0;
    double wall_ms = 0.0;
};

// eta = lr_scale * sigma_t^2 / sigma_T^2 (annealing starts at level T)
double basis_lr(double lr_scale, const smooth::NoiseSchedule& sched, int t);

// levels visited T..1, n_inner Langevin steps each; psi_b0 only used by the original variant
// (default (y - theta0)/kappa)
BasisResult basis_separate(const CVec& y, double kappa, const score::ScoreModel& score_s,
                           const score::ScoreModel& score_b, const smooth::NoiseSchedule& sched,
                           const BasisConfig& cfg, const CVec& theta0, const CVec* psi_b0 = nullptr);

}  // namespace rfsep::baseline
