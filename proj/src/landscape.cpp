#include <fstream>

#include "rfsep/sep.hpp"
#include "rfsep/signal_io.hpp"

namespace rfsep::sep {

namespace {

void check_spec(const LandscapeSpec& s, const score::FdOracle* src_b, const smooth::NoiseSchedule& sched) {
    require(s.theta_grid.size() >= 3, "landscape: grid needs >= 3 points");
    require(!s.levels.empty(), "landscape: no levels");
    for (int t : s.levels) require(t >= 1 && t <= sched.T, "landscape: level out of range");
    require(s.mc_draws >= 1, "landscape: mc_draws must be >= 1");
    require(s.omega >= 0.0, "landscape: omega must be >= 0");
    if (s.omega > 0.0) {
        require(src_b != nullptr, "landscape: omega > 0 needs an interference source");
        require(s.kappa > 0.0, "landscape: kappa must be > 0");
    }
}

struct Draws {
    std::vector<std::vector<double>> zs, zb;  // [level][draw]
};

Draws draw_all(const LandscapeSpec& s) {
    Draws d;
    Rng rng(s.seed);
    std::normal_distribution<double> nd;
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        std::vector<double> a(static_cast<std::size_t>(s.mc_draws)), b(a.size());
        for (auto& v : a) v = nd(rng);
        for (auto& v : b) v = nd(rng);
        d.zs.push_back(std::move(a));
        d.zb.push_back(std::move(b));
    }
    return d;
}

double point_loss(double th, const Level& lv, const std::vector<double>& zs, const std::vector<double>& zb,
                  const LandscapeSpec& s, const score::FdOracle& src_s, const score::FdOracle* src_b) {
    const double sg = lv.sigma();
    double ls = 0.0, lb = 0.0;
    for (std::size_t j = 0; j < zs.size(); ++j) {
        ls -= src_s.log_density(cplx(lv.gamma * th + sg * zs[j], 0.0), lv);
        if (s.omega > 0.0) lb -= src_b->log_density(cplx(lv.gamma * (s.y - th) / s.kappa + sg * zb[j], 0.0), lv);
    }
    return (ls + s.omega * lb) / static_cast<double>(zs.size());
}

LandscapeCurves run(const LandscapeSpec& s, const score::FdOracle& src_s, const score::FdOracle* src_b,
                    const smooth::NoiseSchedule& sched, bool parallel) {
    check_spec(s, src_b, sched);
    const Draws dr = draw_all(s);
    LandscapeCurves c;
    c.levels = s.levels;
    c.theta = s.theta_grid;
    const std::size_t G = s.theta_grid.size();
    const std::size_t NL = s.levels.size();
    c.per_level.assign(NL, std::vector<double>(G, 0.0));
    const long total = static_cast<long>(NL * G);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long k = 0; k < total; ++k) {
        const std::size_t l = static_cast<std::size_t>(k) / G, g = static_cast<std::size_t>(k) % G;
        c.per_level[l][g] = point_loss(s.theta_grid[g], sched.level(s.levels[l]), dr.zs[l], dr.zb[l], s, src_s, src_b);
    }
    c.averaged.assign(G, 0.0);
    for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t l = 0; l < NL; ++l) c.averaged[g] += c.per_level[l][g];
        c.averaged[g] /= static_cast<double>(NL);
    }
    return c;
}

}  // namespace

LandscapeCurves landscape_1d(const LandscapeSpec& spec, const score::FdOracle& src_s, const score::FdOracle* src_b,
                             const smooth::NoiseSchedule& sched) {
    return run(spec, src_s, src_b, sched, true);
}

LandscapeCurves landscape_1d_serial(const LandscapeSpec& spec, const score::FdOracle& src_s,
                                    const score::FdOracle* src_b, const smooth::NoiseSchedule& sched) {
    return run(spec, src_s, src_b, sched, false);
}

std::vector<double> local_minima(const std::vector<double>& grid, const std::vector<double>& curve) {
    require(grid.size() == curve.size(), "local_minima: length mismatch");
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i)
        if (curve[i] < curve[i - 1] && curve[i] < curve[i + 1]) out.push_back(grid[i]);
    return out;
}

void write_landscape_csv(const std::string& path, const LandscapeCurves& c) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f << "level,theta,loss\n";
    for (std::size_t l = 0; l < c.levels.size(); ++l)
        for (std::size_t g = 0; g < c.theta.size(); ++g)
            f << c.levels[l] << ',' << io::fmt_double(c.theta[g]) << ',' << io::fmt_double(c.per_level[l][g]) << '\n';
    // level 0 marks the level-averaged curve
    for (std::size_t g = 0; g < c.theta.size(); ++g)
        f << 0 << ',' << io::fmt_double(c.theta[g]) << ',' << io::fmt_double(c.averaged[g]) << '\n';
}

}  // namespace rfsep::sep
