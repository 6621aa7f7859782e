#include "rfsep/schedule.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rfsep/signal_io.hpp"

namespace rfsep::smooth {

namespace {
void check_level(const NoiseSchedule& s, int t) {
    require(t >= 1 && t <= s.T, "noise level " + std::to_string(t) + " outside 1.." + std::to_string(s.T));
}
}  // namespace

double NoiseSchedule::gamma(int t) const {
    check_level(*this, t);
    return std::sqrt(alpha_bar[t - 1]);
}

double NoiseSchedule::sigma2(int t) const {
    check_level(*this, t);
    return 1.0 - alpha_bar[t - 1];
}

double NoiseSchedule::sigma(int t) const { return std::sqrt(sigma2(t)); }

Level NoiseSchedule::level(int t) const { return {gamma(t), sigma2(t)}; }

NoiseSchedule build_schedule(double beta_1, double beta_T, int T) {
    require(T >= 2, "build_schedule: T must be >= 2");
    require(beta_1 > 0.0 && beta_1 < beta_T && beta_T < 1.0, "build_schedule: need 0 < beta_1 < beta_T < 1");
    NoiseSchedule s;
    s.T = T;
    s.beta.resize(T);
    s.alpha_bar.resize(T);
    double prod = 1.0;
    for (int i = 0; i < T; ++i) {
        s.beta[i] = beta_1 + (beta_T - beta_1) * static_cast<double>(i) / (T - 1);
        prod *= 1.0 - s.beta[i];
        s.alpha_bar[i] = prod;
    }
    return s;
}

CVec smooth(const CVec& x, const Level& lv, const CVec& z) {
    require(x.size() == z.size(), "smooth: length mismatch");
    const double sg = lv.sigma();
    CVec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = lv.gamma * x[i] + sg * z[i];
    return out;
}

CVec smooth(const CVec& x, int t, const CVec& z, const NoiseSchedule& sched) {
    return smooth(x, sched.level(t), z);
}

CVec draw_noise(Eigen::Index n, Field field, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    CVec z(n);
    if (field == Field::real) {
        for (Eigen::Index i = 0; i < n; ++i) z[i] = cplx(nd(rng), 0.0);
    } else {
        const double s = std::sqrt(0.5);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = nd(rng);
            const double im = nd(rng);
            z[i] = cplx(s * re, s * im);
        }
    }
    return z;
}

void write_schedule_csv(const std::string& path, const NoiseSchedule& s) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f << "t,beta,alpha_bar\n";
    for (int t = 1; t <= s.T; ++t)
        f << t << ',' << io::fmt_double(s.beta[t - 1]) << ',' << io::fmt_double(s.alpha_bar[t - 1]) << '\n';
}

NoiseSchedule read_schedule_csv(const std::string& path) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open schedule file: " + path);
    std::string line;
    std::getline(f, line);
    require(line == "t,beta,alpha_bar", path + ": expected header 't,beta,alpha_bar'");
    NoiseSchedule s;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        require(std::getline(ss, a, ',') && std::getline(ss, b, ',') && std::getline(ss, c), path + ": bad row");
        require(std::stoi(a) == s.T + 1, path + ": levels must be consecutive from 1");
        s.beta.push_back(std::stod(b));
        s.alpha_bar.push_back(std::stod(c));
        ++s.T;
    }
    require(s.T >= 2, path + ": need at least two levels");
    for (int i = 0; i < s.T; ++i) {
        require(s.beta[i] > 0.0 && s.beta[i] < 1.0, path + ": beta out of (0,1)");
        require(s.alpha_bar[i] > 0.0 && s.alpha_bar[i] <= 1.0, path + ": alpha_bar out of (0,1]");
        if (i > 0) require(s.alpha_bar[i] < s.alpha_bar[i - 1], path + ": alpha_bar must decrease");
    }
    return s;
}

}  // namespace rfsep::smooth
