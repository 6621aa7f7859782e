#include "rfsep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rfsep::score {

namespace {
double log_sum_exp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}
}  // namespace

ScalarSource ScalarSource::from_atoms(std::vector<cplx> atoms, std::vector<double> weights, Field field) {
    require(!atoms.empty() && atoms.size() <= 64, "oracle: pmf needs 1..64 atoms");
    require(atoms.size() == weights.size(), "oracle: atoms/weights length mismatch");
    if (field == Field::real)
        for (const cplx& a : atoms) require(a.imag() == 0.0, "oracle: real field needs real atoms");
    ScalarSource s;
    s.kind = Kind::atoms;
    s.field = field;
    s.atoms = std::move(atoms);
    s.weights = std::move(weights);
    return s;
}

ScalarSource ScalarSource::uniform_atoms(std::vector<cplx> atoms, Field field) {
    const std::size_t n = atoms.size();
    return from_atoms(std::move(atoms), std::vector<double>(n, 1.0 / static_cast<double>(n)), field);
}

ScalarSource ScalarSource::from_gmm(GmmSpec g) {
    g.validate();
    ScalarSource s;
    s.kind = Kind::gmm;
    s.gmm = std::move(g);
    return s;
}

ScalarSource ScalarSource::from_pdf(std::function<double(double)> log_pdf, double lo, double hi, int n_grid) {
    require(lo < hi && n_grid >= 3, "oracle: pdf grid needs lo < hi and >= 3 points");
    ScalarSource s;
    s.kind = Kind::pdf;
    s.log_pdf = std::move(log_pdf);
    s.lo = lo;
    s.hi = hi;
    s.n_grid = n_grid;
    return s;
}

ScalarSource ScalarSource::gaussian_pdf(double mean, double var, int n_grid) {
    require(var > 0.0, "oracle: gaussian variance must be > 0");
    const double sd = std::sqrt(var);
    auto f = [mean, var](double a) {
        return -0.5 * std::log(2.0 * std::numbers::pi * var) - (a - mean) * (a - mean) / (2.0 * var);
    };
    return from_pdf(f, mean - 14.0 * sd, mean + 14.0 * sd, n_grid);
}

ScalarSource ScalarSource::gmm_pdf(const GmmSpec& g, int n_grid) {
    g.validate();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < g.K(); ++i) {
        const double sd = std::sqrt(g.vars[i]);
        lo = std::min(lo, g.means[i] - 14.0 * sd);
        hi = std::max(hi, g.means[i] + 14.0 * sd);
    }
    // cover the +-3 total-std check grid with margin so truncation never dominates the tails
    double m = 0.0, m2 = 0.0;
    for (int i = 0; i < g.K(); ++i) {
        m += g.weights[i] * g.means[i];
        m2 += g.weights[i] * (g.vars[i] + g.means[i] * g.means[i]);
    }
    const double reach = 4.0 * std::sqrt(m2 - m * m + 1.0);
    lo = std::min(lo, m - reach);
    hi = std::max(hi, m + reach);
    auto f = [g](double a) {
        std::vector<double> t(g.means.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = std::log(g.weights[i]) - 0.5 * std::log(2.0 * std::numbers::pi * g.vars[i]) -
                   (a - g.means[i]) * (a - g.means[i]) / (2.0 * g.vars[i]);
        return log_sum_exp(t);
    };
    auto s = from_pdf(f, lo, hi, n_grid);
    s.gmm = g;  // kept for variance() only
    return s;
}

double ScalarSource::variance() const {
    switch (kind) {
    case Kind::atoms: {
        cplx m = 0.0;
        for (std::size_t k = 0; k < atoms.size(); ++k) m += weights[k] * atoms[k];
        double v = 0.0;
        for (std::size_t k = 0; k < atoms.size(); ++k) v += weights[k] * std::norm(atoms[k] - m);
        return v;
    }
    case Kind::gmm:
    case Kind::pdf: {
        if (!gmm.means.empty()) {
            double m = 0.0, m2 = 0.0;
            for (int i = 0; i < gmm.K(); ++i) {
                m += gmm.weights[i] * gmm.means[i];
                m2 += gmm.weights[i] * (gmm.vars[i] + gmm.means[i] * gmm.means[i]);
            }
            return m2 - m * m;
        }
        // numerical moments of the tabulated pdf
        const double da = (hi - lo) / (n_grid - 1);
        double z = 0.0, m = 0.0, m2 = 0.0;
        for (int i = 0; i < n_grid; ++i) {
            const double a = lo + i * da;
            const double p = std::exp(log_pdf(a));
            z += p;
            m += p * a;
            m2 += p * a * a;
        }
        m /= z;
        return m2 / z - m * m;
    }
    }
    return 0.0;
}

FdOracle::FdOracle(ScalarSource src, double h) : src_(std::move(src)), h_(h) {
    require(h_ > 0.0, "oracle: step must be > 0");
    if (src_.kind == ScalarSource::Kind::pdf) {
        const int n = src_.n_grid;
        const double da = (src_.hi - src_.lo) / (n - 1);
        log_pdf_table_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double wt = (i == 0 || i == n - 1) ? std::log(0.5) : 0.0;
            log_pdf_table_[static_cast<std::size_t>(i)] = wt + src_.log_pdf(src_.lo + i * da);
        }
    }
}

double FdOracle::total_std(const Level& lv) const {
    return std::sqrt(lv.gamma * lv.gamma * src_.variance() + lv.sigma2);
}

double FdOracle::log_density(cplx x, const Level& lv) const {
    require(lv.sigma2 > 0.0, "oracle: sigma2 must be > 0");
    const double s2 = lv.sigma2;
    const double g = lv.gamma;
    switch (src_.kind) {
    case ScalarSource::Kind::atoms: {
        std::vector<double> t(src_.atoms.size());
        if (src_.field == Field::complex) {
            // circular kernel, E|z|^2 = sigma^2
            for (std::size_t k = 0; k < t.size(); ++k)
                t[k] = std::log(src_.weights[k]) - std::norm(x - g * src_.atoms[k]) / s2;
            return log_sum_exp(t) - std::log(std::numbers::pi * s2);
        }
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double r = x.real() - g * src_.atoms[k].real();
            t[k] = std::log(src_.weights[k]) - r * r / (2.0 * s2);
        }
        return log_sum_exp(t) - 0.5 * std::log(2.0 * std::numbers::pi * s2);
    }
    case ScalarSource::Kind::gmm: {
        const auto& m = src_.gmm;
        std::vector<double> t(m.means.size());
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double var = g * g * m.vars[k] + s2;
            const double r = x.real() - g * m.means[k];
            t[k] = std::log(m.weights[k]) - 0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var);
        }
        return log_sum_exp(t);
    }
    case ScalarSource::Kind::pdf: {
        const int n = src_.n_grid;
        const double da = (src_.hi - src_.lo) / (n - 1);
        std::vector<double> t(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double a = src_.lo + i * da;
            const double r = x.real() - g * a;
            t[static_cast<std::size_t>(i)] = log_pdf_table_[static_cast<std::size_t>(i)] - r * r / (2.0 * s2);
        }
        return log_sum_exp(t) + std::log(da) - 0.5 * std::log(2.0 * std::numbers::pi * s2);
    }
    }
    return 0.0;
}

cplx FdOracle::score(cplx x, const Level& lv) const {
    // central differences at h and h/2 combined by Richardson extrapolation (O(h^4))
    auto diff = [&](cplx dir) {
        auto d = [&](double h) { return (log_density(x + h * dir, lv) - log_density(x - h * dir, lv)) / (2.0 * h); };
        return (4.0 * d(0.5 * h_) - d(h_)) / 3.0;
    };
    const double dre = diff(1.0);
    if (src_.field == Field::real || src_.kind != ScalarSource::Kind::atoms) return {dre, 0.0};
    return {0.5 * dre, 0.5 * diff(cplx(0.0, 1.0))};
}

std::vector<std::pair<double, double>> FdOracle::tabulate(const std::vector<double>& grid, const Level& lv) const {
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double x : grid) out.emplace_back(x, score(cplx(x, 0.0), lv).real());
    return out;
}

double rel_error(cplx a, cplx b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

}  // namespace rfsep::score
