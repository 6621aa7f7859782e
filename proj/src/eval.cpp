#include "rfsep/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <omp.h>

#include "rfsep/signal_io.hpp"

namespace rfsep::eval {

void SweepSpec::validate() const {
    require(!sir_db_list.empty(), "sweep: sir list is empty");
    for (double s : sir_db_list) require(!std::isnan(s) && s != -INFINITY, "sweep: SIR must be a number or +inf");
    require(trials_per_point >= 1, "sweep: trials must be >= 1");
    require(!methods.empty(), "sweep: method list is empty");
    for (const auto& m : methods) {
        require(std::find(known_methods().begin(), known_methods().end(), m) != known_methods().end(),
                "sweep: unknown method '" + m + "'");
        require(std::count(methods.begin(), methods.end(), m) == 1, "sweep: duplicate method '" + m + "'");
    }
    signal.validate();
    require(omega_over_kappa2 >= 0.0, "sweep: omega_over_kappa2 must be >= 0");
    require(basis_n_inner >= 1, "sweep: basis_n_inner must be >= 1");
    require(cov_samples >= 1, "sweep: cov_samples must be >= 1");
    if (iterations) require(*iterations >= 1, "sweep: iterations must be >= 1");
}

sep::SepConfig SweepSpec::sep_config(const Scenario& sc) const {
    sep::SepConfig c = sc.default_sep();
    if (iterations) c.N = *iterations;
    if (eta_max) c.eta_max = *eta_max;
    if (eta_min) c.eta_min = *eta_min;
    if (t_lo) c.t_lo = *t_lo;
    c.t_hi = t_hi ? *t_hi : T;
    if (!t_lo) c.t_lo = std::min(c.t_lo, c.t_hi);
    return c;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t sir_index, int trial) {
    Rng r = make_rng(master, sir_index, static_cast<std::uint64_t>(trial));
    return r();
}

namespace {

std::uint64_t method_seed(std::uint64_t tseed, std::size_t method_index) {
    Rng r = make_rng(tseed, method_index + 1, 0x5eed);
    return r();
}

struct Prepared {
    Scenario sc;
    smooth::NoiseSchedule sched;
    sep::SepConfig sep;
    std::vector<std::shared_ptr<const baseline::Lmmse>> lmmse;  // per SIR, empty if unused
};

Prepared prepare(const SweepSpec& spec, bool need_lmmse) {
    spec.validate();
    Prepared p{Scenario(spec.mixture, spec.signal), smooth::build_schedule(spec.beta_1, spec.beta_T, spec.T), {}, {}};
    p.sep = spec.sep_config(p.sc);
    p.sep.validate(p.sched);
    p.lmmse.resize(spec.sir_db_list.size());
    if (!need_lmmse) return p;
    baseline::CovOracle cov;
    if (!spec.cov_bb_file.empty() && !p.sc.is_toy()) {
        cov.C_ss = baseline::transform_cov(*p.sc.rrc());
        cov.C_bb = baseline::read_cov_bin(spec.cov_bb_file);
        require(cov.C_bb.rows() == cov.C_ss.rows(), "sweep: C_bb file dimension does not match d");
    } else {
        cov = p.sc.covariance(spec.cov_samples, make_rng(spec.master_seed, 0xC0BB)(), spec.cov_empirical);
    }
    auto css = std::make_shared<const CMat>(std::move(cov.C_ss));
    const long n = static_cast<long>(spec.sir_db_list.size());
    std::vector<std::string> errs(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            const double kappa = sig::kappa_from_sir_db(spec.sir_db_list[static_cast<std::size_t>(i)]);
            p.lmmse[static_cast<std::size_t>(i)] = std::make_shared<const baseline::Lmmse>(css, cov.C_bb, kappa);
        } catch (const std::exception& e) {
            errs[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (const auto& e : errs)
        if (!e.empty()) throw NumericalError("lmmse setup: " + e);
    return p;
}

struct Outcome {
    double ber, mse;
    long iters;
};

Outcome run_method(const std::string& m, const Prepared& pr, const SweepSpec& spec, const MixtureDraw& mx,
                   std::size_t sir_index, std::uint64_t seed, double ratio) {
    const Scenario& sc = pr.sc;
    const double kappa = mx.kappa;
    auto finish = [&](const CVec& s_hat, const sig::Bits& bits, long iters) {
        return Outcome{sig::ber(bits, mx.bits_s), sig::mse(s_hat, mx.s), iters};
    };
    if (m == "mf") return finish(sc.mf_estimate(mx.y), sc.decode_soi(mx.y), 0);
    if (m == "lmmse") {
        const CVec s_hat = pr.lmmse[sir_index]->apply(mx.y);
        return finish(s_hat, sc.decode_soi(s_hat), 0);
    }
    // kappa = 0: y is the SOI itself
    if (kappa == 0.0) return finish(mx.y, sc.decode_soi(mx.y), 0);
    const CVec theta0 = sc.init_theta(mx.y, kappa);
    const auto sb = sc.interference_score(mx);
    if (m == "alpha_rgs") {
        sep::SepConfig cfg = pr.sep;
        cfg.seed = seed;
        cfg.omega = ratio * kappa * kappa;
        const auto r = sep::alpha_rgs(mx.y, kappa, *sc.soi_score(), *sb, pr.sched, cfg, theta0);
        return finish(r.s_hat, sc.decode_soi(r.s_hat), r.iters);
    }
    baseline::BasisConfig bc;
    bc.variant = baseline::basis_variant_from_string(m);
    bc.n_inner = spec.basis_n_inner;
    bc.seed = seed;
    bc.omega = ratio * kappa * kappa;
    const bool orig = bc.variant == baseline::BasisVariant::original;
    const auto& lr = orig ? spec.basis_lr_orig : spec.basis_lr_variant;
    bc.lr_scale = lr ? *lr : sc.default_basis_lr(bc.variant);
    const auto r = baseline::basis_separate(mx.y, kappa, *sc.soi_score(), *sb, pr.sched, bc, theta0);
    return finish(r.s_hat, sc.decode_soi(r.s_hat), r.iters);
}

template <class Row>
void run_one(Row& row, const std::string& method, const Prepared& pr, const SweepSpec& spec, std::size_t si,
             int trial, std::size_t method_index, double ratio) {
    const auto t0 = std::chrono::steady_clock::now();
    row.sir_db = spec.sir_db_list[si];
    row.kappa = sig::kappa_from_sir_db(row.sir_db);
    row.trial = trial;
    row.seed = trial_seed(spec.master_seed, si, trial);
    try {
        Rng mrng(row.seed);
        const MixtureDraw mx = pr.sc.draw(row.kappa, mrng);
        const Outcome o = run_method(method, pr, spec, mx, si, method_seed(row.seed, method_index), ratio);
        row.ber = o.ber;
        row.mse = o.mse;
        row.iters = o.iters;
    } catch (const std::exception& e) {
        row.ber = row.mse = NAN;
        row.iters = -1;
        row.error = method + " sir=" + io::fmt_double(row.sir_db) + " trial=" + std::to_string(trial) + ": " + e.what();
    }
    row.wall_ms = spec.record_timing
                      ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()
                      : 0.0;
}

std::size_t method_index(const std::string& m) {
    const auto& k = known_methods();
    return static_cast<std::size_t>(std::find(k.begin(), k.end(), m) - k.begin());
}

std::vector<ResultRow> sweep_impl(const SweepSpec& spec, bool parallel, int threads) {
    const bool need_lmmse = std::find(spec.methods.begin(), spec.methods.end(), "lmmse") != spec.methods.end();
    const Prepared pr = prepare(spec, need_lmmse);
    const std::size_t S = spec.sir_db_list.size(), M = spec.methods.size();
    const std::size_t Tn = static_cast<std::size_t>(spec.trials_per_point);
    std::vector<ResultRow> rows(S * Tn * M);
    const long total = static_cast<long>(rows.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (parallel)
    for (long k = 0; k < total; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k);
        const std::size_t si = idx / (Tn * M), trial = (idx / M) % Tn, mi = idx % M;
        ResultRow& r = rows[idx];
        r.method = spec.methods[mi];
        run_one(r, r.method, pr, spec, si, static_cast<int>(trial), method_index(r.method), spec.omega_over_kappa2);
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int threads) { return sweep_impl(spec, true, threads); }

std::vector<ResultRow> run_sweep_serial(const SweepSpec& spec) { return sweep_impl(spec, false, 1); }

std::vector<AblationRow> omega_ablation(const SweepSpec& spec, const std::vector<double>& ratios, int threads) {
    require(!ratios.empty(), "ablation: ratio grid is empty");
    for (double r : ratios) require(r > 0.0 && std::isfinite(r), "ablation: ratios must be finite and > 0");
    const Prepared pr = prepare(spec, false);
    const std::size_t S = spec.sir_db_list.size(), R = ratios.size();
    const std::size_t Tn = static_cast<std::size_t>(spec.trials_per_point);
    std::vector<AblationRow> rows(S * R * Tn);
    const long total = static_cast<long>(rows.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();
    const std::size_t mi = method_index("alpha_rgs");
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (long k = 0; k < total; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k);
        const std::size_t si = idx / (R * Tn), ri = (idx / Tn) % R, trial = idx % Tn;
        AblationRow& r = rows[idx];
        r.ratio = ratios[ri];
        run_one(r, "alpha_rgs", pr, spec, si, static_cast<int>(trial), mi, ratios[ri]);
    }
    return rows;
}

MeanCi mean_ci95(const std::vector<double>& v) {
    require(!v.empty(), "mean_ci95: empty input");
    const double n = static_cast<double>(v.size());
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    if (v.size() == 1) return {m, m, m};
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double half = 1.959963984540054 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return {m, m - half, m + half};
}

namespace {
template <class Key, class Get>
std::vector<AggRow> aggregate_by(std::size_t n, Key key, Get get) {
    // first-appearance order of (label, sir)
    std::vector<std::pair<std::string, double>> order;
    std::map<std::pair<std::string, double>, std::pair<std::vector<double>, std::vector<double>>> groups;
    std::map<std::pair<std::string, double>, int> failed;
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = key(i);
        if (!groups.count(k)) {
            order.push_back(k);
            groups[k];
            failed[k] = 0;
        }
        const auto [ber, mse] = get(i);
        if (std::isnan(ber) || std::isnan(mse)) {
            ++failed[k];
            continue;
        }
        groups[k].first.push_back(ber);
        groups[k].second.push_back(mse);
    }
    std::vector<AggRow> out;
    for (const auto& k : order) {
        AggRow a;
        a.method = k.first;
        a.sir_db = k.second;
        const auto& g = groups[k];
        a.n = static_cast<int>(g.first.size());
        a.n_failed = failed[k];
        if (a.n > 0) {
            const auto b = mean_ci95(g.first);
            const auto m = mean_ci95(g.second);
            a.ber_mean = b.mean, a.ber_lo = b.lo, a.ber_hi = b.hi;
            a.mse_mean = m.mean, a.mse_lo = m.lo, a.mse_hi = m.hi;
        } else {
            a.ber_mean = a.ber_lo = a.ber_hi = a.mse_mean = a.mse_lo = a.mse_hi = NAN;
        }
        out.push_back(a);
    }
    std::map<std::string, std::size_t> rank;
    for (const auto& k : order) rank.emplace(k.first, rank.size());
    std::stable_sort(out.begin(), out.end(), [&](const AggRow& x, const AggRow& y) {
        const auto rx = rank[x.method], ry = rank[y.method];
        return rx != ry ? rx < ry : x.sir_db < y.sir_db;
    });
    return out;
}
}  // namespace

std::vector<AggRow> aggregate(const std::vector<ResultRow>& rows) {
    return aggregate_by(
        rows.size(), [&](std::size_t i) { return std::make_pair(rows[i].method, rows[i].sir_db); },
        [&](std::size_t i) { return std::make_pair(rows[i].ber, rows[i].mse); });
}

namespace {
// shortest round-trip form, e.g. "r=0.1"
std::string ratio_label(double r) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, r);
    return "r=" + std::string(buf, res.ptr);
}
}  // namespace

std::vector<AggRow> aggregate_ablation(const std::vector<AblationRow>& rows) {
    return aggregate_by(
        rows.size(), [&](std::size_t i) { return std::make_pair(ratio_label(rows[i].ratio), rows[i].sir_db); },
        [&](std::size_t i) { return std::make_pair(rows[i].ber, rows[i].mse); });
}

std::string sweep_csv_string(const std::vector<ResultRow>& rows) {
    std::ostringstream f;
    f << "method,sir_db,kappa,trial,seed,ber,mse,iters,wall_ms\n";
    for (const auto& r : rows)
        f << r.method << ',' << io::fmt_double(r.sir_db) << ',' << io::fmt_double(r.kappa) << ',' << r.trial << ','
          << r.seed << ',' << io::fmt_double(r.ber) << ',' << io::fmt_double(r.mse) << ',' << r.iters << ','
          << io::fmt_double(r.wall_ms) << '\n';
    return f.str();
}

void write_sweep_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f << sweep_csv_string(rows);
}

std::vector<ResultRow> read_sweep_csv(const std::string& path) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open sweep file: " + path);
    std::string line;
    std::getline(f, line);
    require(line == "method,sir_db,kappa,trial,seed,ber,mse,iters,wall_ms", path + ": unexpected sweep header");
    std::vector<ResultRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> c;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) c.push_back(cell);
        require(c.size() == 9, path + ": expected 9 columns");
        ResultRow r;
        r.method = c[0];
        r.sir_db = std::stod(c[1]);
        r.kappa = std::stod(c[2]);
        r.trial = std::stoi(c[3]);
        r.seed = std::stoull(c[4]);
        r.ber = std::stod(c[5]);
        r.mse = std::stod(c[6]);
        r.iters = std::stol(c[7]);
        r.wall_ms = std::stod(c[8]);
        rows.push_back(r);
    }
    return rows;
}

void write_ablation_csv(const std::string& path, const std::vector<AblationRow>& rows) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f << "sir_db,kappa,omega_over_kappa2,trial,seed,ber,mse,iters,wall_ms\n";
    for (const auto& r : rows)
        f << io::fmt_double(r.sir_db) << ',' << io::fmt_double(r.kappa) << ',' << io::fmt_double(r.ratio) << ','
          << r.trial << ',' << r.seed << ',' << io::fmt_double(r.ber) << ',' << io::fmt_double(r.mse) << ','
          << r.iters << ',' << io::fmt_double(r.wall_ms) << '\n';
}

void write_aggregate_csv(const std::string& path, const std::vector<AggRow>& rows) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f << "method,sir_db,n,n_failed,ber_mean,ber_ci_lo,ber_ci_hi,mse_mean,mse_ci_lo,mse_ci_hi\n";
    for (const auto& a : rows)
        f << a.method << ',' << io::fmt_double(a.sir_db) << ',' << a.n << ',' << a.n_failed << ','
          << io::fmt_double(a.ber_mean) << ',' << io::fmt_double(a.ber_lo) << ',' << io::fmt_double(a.ber_hi) << ','
          << io::fmt_double(a.mse_mean) << ',' << io::fmt_double(a.mse_lo) << ',' << io::fmt_double(a.mse_hi) << '\n';
}

}  // namespace rfsep::eval
