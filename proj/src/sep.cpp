#include "rfsep/sep.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "rfsep/signal_io.hpp"

namespace rfsep::sep {

void SepConfig::validate(const smooth::NoiseSchedule& sched) const {
    require(N >= 1, "sep: N must be >= 1");
    require(eta_min > 0.0 && eta_max >= eta_min, "sep: need eta_max >= eta_min > 0");
    require(1 <= t_lo && t_lo <= t_hi && t_hi <= sched.T, "sep: need 1 <= t_lo <= t_hi <= T");
    require(trace_every >= 0, "sep: trace_every must be >= 0");
    require(divergence_factor > 0.0, "sep: divergence_factor must be > 0");
}

double cosine_lr(int i, int N, double eta_max, double eta_min) {
    require(N >= 1 && i >= 0 && i <= N, "cosine_lr: need 0 <= i <= N");
    return eta_min + 0.5 * (eta_max - eta_min) * (1.0 + std::cos(std::numbers::pi * i / N));
}

CVec sds_gradient(const CVec& theta, const score::ScoreModel& score_s, const smooth::NoiseSchedule& sched, int t,
                  const CVec& z) {
    const Level lv = sched.level(t);
    const CVec st = smooth::smooth(theta, lv, z);
    const CVec zh = score::denoiser_from_score(score_s, st, lv);
    return (lv.gamma / lv.sigma()) * (zh - z);
}

namespace {

double constrained_b(double y, double s, double kappa) {
    double b = (y - s) / kappa;
    if (s + kappa * b == y) return b;
    double up = b, dn = b;
    for (int k = 0; k < 64; ++k) {
        up = std::nextafter(up, INFINITY);
        if (s + kappa * up == y) return up;
        dn = std::nextafter(dn, -INFINITY);
        if (s + kappa * dn == y) return dn;
    }
    return NAN;
}

void fix_component(double y, double kappa, double& s, double& b) {
    b = constrained_b(y, s, kappa);
    if (!std::isnan(b)) return;
    // move s by ulps until some b works
    double su = s, sd = s;
    for (int k = 0; k < 64; ++k) {
        su = std::nextafter(su, INFINITY);
        b = constrained_b(y, su, kappa);
        if (!std::isnan(b)) {
            s = su;
            return;
        }
        sd = std::nextafter(sd, -INFINITY);
        b = constrained_b(y, sd, kappa);
        if (!std::isnan(b)) {
            s = sd;
            return;
        }
    }
    s = y;
    b = 0.0;
}

}  // namespace

void enforce_hard_constraint(const CVec& y, double kappa, CVec& s_hat, CVec& b_hat) {
    require(kappa > 0.0, "hard constraint: kappa must be > 0");
    require(y.size() == s_hat.size(), "hard constraint: length mismatch");
    b_hat.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double sr = s_hat[i].real(), si = s_hat[i].imag(), br, bi;
        fix_component(y[i].real(), kappa, sr, br);
        fix_component(y[i].imag(), kappa, si, bi);
        s_hat[i] = cplx(sr, si);
        b_hat[i] = cplx(br, bi);
    }
}

bool satisfies_hard_constraint(const CVec& y, double kappa, const CVec& s_hat, const CVec& b_hat) {
    if (y.size() != s_hat.size() || y.size() != b_hat.size()) return false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const cplx r = s_hat[i] + kappa * b_hat[i];
        if (r.real() != y[i].real() || r.imag() != y[i].imag()) return false;
    }
    return true;
}

SeparationResult alpha_rgs(const CVec& y, double kappa, const score::ScoreModel& score_s,
                           const score::ScoreModel& score_b, const smooth::NoiseSchedule& sched,
                           const SepConfig& cfg, const CVec& theta0, const CVec* truth) {
    cfg.validate(sched);
    require(kappa > 0.0 && std::isfinite(kappa), "alpha_rgs: kappa must be > 0 (kappa = 0 is a degenerate mixture)");
    require(theta0.size() == y.size(), "alpha_rgs: theta0 and y lengths differ");
    if (truth) require(truth->size() == y.size(), "alpha_rgs: truth length differs");
    const double omega = cfg.omega_for(kappa);
    require(omega >= 0.0, "alpha_rgs: omega must be >= 0");

    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index d = y.size();
    const double scale =
        std::max({y.size() ? y.cwiseAbs().maxCoeff() : 0.0, theta0.size() ? theta0.cwiseAbs().maxCoeff() : 0.0, 1.0});
    const double limit = cfg.divergence_factor * scale;

    Rng rng(cfg.seed);
    std::uniform_int_distribution<int> level(cfg.t_lo, cfg.t_hi);
    SeparationResult res;
    CVec theta = theta0;

    auto record = [&](int it, double gnorm) {
        res.trace_iter.push_back(it);
        res.grad_norm_trace.push_back(gnorm);
        if (truth) res.mse_trace.push_back(sig::mse(theta, *truth));
        res.theta_trace.push_back(theta);
    };

    for (int i = 0; i < cfg.N; ++i) {
        const double eta = cosine_lr(i, cfg.N, cfg.eta_max, cfg.eta_min);
        const int t = level(rng);
        const int u = level(rng);
        const CVec zs = smooth::draw_noise(d, score_s.field(), rng);
        const CVec zb = smooth::draw_noise(d, score_b.field(), rng);

        CVec g = sds_gradient(theta, score_s, sched, t, zs);
        if (omega > 0.0) {
            const Level lu = sched.level(u);
            CVec bt(d);
            for (Eigen::Index k = 0; k < d; ++k) bt[k] = lu.gamma * (y[k] - theta[k]) / kappa + lu.sigma() * zb[k];
            const CVec zhb = score::denoiser_from_score(score_b, bt, lu);
            g -= (omega / kappa) * (lu.gamma / lu.sigma()) * (zhb - zb);
        }
        theta -= eta * g;

        if (!theta.allFinite())
            throw NumericalError("alpha_rgs: non-finite iterate at iteration " + std::to_string(i) + " (level t=" +
                                 std::to_string(t) + ", u=" + std::to_string(u) + ")");
        const double mx = theta.cwiseAbs().maxCoeff();
        if (mx > limit)
            throw NumericalError("alpha_rgs: diverged at iteration " + std::to_string(i) + ", |theta|_inf = " +
                                 std::to_string(mx) + " > " + std::to_string(limit));
        if (cfg.trace_every > 0 && (i % cfg.trace_every == 0 || i == cfg.N - 1)) record(i, g.norm());
    }
    res.iters = cfg.N;
    res.s_hat = theta;
    enforce_hard_constraint(y, kappa, res.s_hat, res.b_hat);
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

void write_trace_csv(const std::string& path, const SeparationResult& r) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    const bool truth = !r.mse_trace.empty();
    f << (truth ? "iter,grad_norm,theta_mse_vs_truth\n" : "iter,grad_norm\n");
    for (std::size_t k = 0; k < r.trace_iter.size(); ++k) {
        f << r.trace_iter[k] << ',' << io::fmt_double(r.grad_norm_trace[k]);
        if (truth) f << ',' << io::fmt_double(r.mse_trace[k]);
        f << '\n';
    }
}

}  // namespace rfsep::sep
