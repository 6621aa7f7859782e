#include <chrono>
#include <cmath>

#include "rfsep/baseline.hpp"
#include "rfsep/sep.hpp"

namespace rfsep::baseline {

BasisVariant basis_variant_from_string(const std::string& s) {
    if (s == "original" || s == "basis_orig") return BasisVariant::original;
    if (s == "map_constrained" || s == "basis_map") return BasisVariant::map_constrained;
    if (s == "alpha_modified" || s == "basis_alpha") return BasisVariant::alpha_modified;
    throw std::invalid_argument("unknown BASIS variant: " + s);
}

std::string to_string(BasisVariant v) {
    switch (v) {
    case BasisVariant::original: return "original";
    case BasisVariant::map_constrained: return "map_constrained";
    case BasisVariant::alpha_modified: return "alpha_modified";
    }
    return "?";
}

void BasisConfig::validate() const {
    require(n_inner >= 1, "basis: n_inner must be >= 1");
    require(lr_scale > 0.0 && std::isfinite(lr_scale), "basis: lr_scale must be > 0");
    require(divergence_factor > 0.0, "basis: divergence_factor must be > 0");
}

double basis_lr(double lr_scale, const smooth::NoiseSchedule& sched, int t) {
    return lr_scale * sched.sigma2(t) / sched.sigma2(sched.T);
}

namespace {
void guard(const CVec& v, double limit, int t, int i) {
    if (!v.allFinite())
        throw NumericalError("basis: non-finite state at level " + std::to_string(t) + ", step " + std::to_string(i));
    if (v.cwiseAbs().maxCoeff() > limit)
        throw NumericalError("basis: diverged at level " + std::to_string(t) + ", step " + std::to_string(i));
}
}  // namespace

BasisResult basis_separate(const CVec& y, double kappa, const score::ScoreModel& score_s,
                           const score::ScoreModel& score_b, const smooth::NoiseSchedule& sched,
                           const BasisConfig& cfg, const CVec& theta0, const CVec* psi_b0) {
    cfg.validate();
    require(kappa > 0.0 && std::isfinite(kappa), "basis: kappa must be > 0");
    require(theta0.size() == y.size(), "basis: theta0 and y lengths differ");
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index d = y.size();
    const double limit =
        cfg.divergence_factor * std::max({y.cwiseAbs().maxCoeff(), theta0.cwiseAbs().maxCoeff(), 1.0});
    Rng rng(cfg.seed);
    BasisResult res;

    if (cfg.variant == BasisVariant::original) {
        CVec ps = theta0;
        CVec pb = psi_b0 ? *psi_b0 : CVec((y - theta0) / kappa);
        require(pb.size() == d, "basis: psi_b0 length mismatch");
        for (int t = sched.T; t >= 1; --t) {
            const Level lv = sched.level(t);
            const double eta = basis_lr(cfg.lr_scale, sched, t);
            const double nz = cfg.langevin_noise ? std::sqrt(2.0 * eta) : 0.0;
            for (int i = 0; i < cfg.n_inner; ++i) {
                const CVec es = smooth::draw_noise(d, score_s.field(), rng);
                const CVec eb = smooth::draw_noise(d, score_b.field(), rng);
                const CVec Ss = score_s.eval(ps, lv);
                const CVec Sb = score_b.eval(pb, lv);
                const CVec r = y - ps - kappa * pb;
                // ascent on log prior + Gaussian likelihood N(y; ps + kappa pb, sigma_t^2)
                const CVec ps_new = ps + eta * Ss + (eta / lv.sigma2) * r + nz * es;
                pb = pb + eta * Sb + (eta * kappa / lv.sigma2) * r + nz * eb;
                ps = ps_new;
                guard(ps, limit, t, i);
                guard(pb, limit, t, i);
            }
        }
        res.s_hat = ps;
        res.b_hat = pb;
        res.iters = sched.T * cfg.n_inner;
    } else {
        const double w = cfg.variant == BasisVariant::original       ? 0.0
                         : cfg.variant == BasisVariant::map_constrained ? 1.0
                                                                        : (cfg.omega < 0.0 ? kappa * kappa : cfg.omega);
        CVec th = theta0;
        for (int t = sched.T; t >= 1; --t) {
            const Level lv = sched.level(t);
            const double eta = basis_lr(cfg.lr_scale, sched, t);
            const double nz = cfg.langevin_noise ? std::sqrt(2.0 * eta) : 0.0;
            for (int i = 0; i < cfg.n_inner; ++i) {
                const CVec eps = smooth::draw_noise(d, score_s.field(), rng);
                const CVec Ss = score_s.eval(th, lv);
                const CVec Sb = score_b.eval((y - th) / kappa, lv);
                th = th + eta * Ss - (w / kappa) * eta * Sb + nz * eps;
                guard(th, limit, t, i);
            }
        }
        res.s_hat = th;
        sep::enforce_hard_constraint(y, kappa, res.s_hat, res.b_hat);
        res.iters = sched.T * cfg.n_inner;
    }
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace rfsep::baseline
