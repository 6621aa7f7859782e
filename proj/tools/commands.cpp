#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "rfsep/baseline.hpp"
#include "rfsep/eval.hpp"
#include "rfsep/score_check.hpp"
#include "rfsep/sep.hpp"
#include "rfsep/signal_io.hpp"

#ifndef RFSEP_GIT_HASH
#define RFSEP_GIT_HASH "unknown"
#endif

namespace rfsep::cli {

using json = nlohmann::json;

namespace {

std::string out_path(const Common& c, const std::string& name) {
    std::filesystem::create_directories(c.out_dir);
    return (std::filesystem::path(c.out_dir) / name).string();
}

void write_manifest(const Common& c, const std::string& command, const config::RunConfig& cfg,
                    const std::vector<std::string>& outputs, const json& errors = json::array(),
                    const json& extra = json::object()) {
    json m;
    m["command"] = command;
    m["git_hash"] = RFSEP_GIT_HASH;
    m["config"] = cfg.effective();
    m["full"] = c.full;
    m["outputs"] = outputs;
    m["errors"] = errors;
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    std::ofstream f(out_path(c, "manifest_" + command + ".json"));
    f << m.dump(2) << '\n';
}

smooth::NoiseSchedule schedule_of(const config::RunConfig& cfg) {
    return smooth::build_schedule(cfg.get_double("beta_1"), cfg.get_double("beta_T"), cfg.get_int("T"));
}

std::string join(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + io::fmt_double(v[i]);
    return s + "]";
}

template <class Row>
json error_list(const std::vector<Row>& rows) {
    json e = json::array();
    for (const auto& r : rows)
        if (!r.error.empty()) e.push_back({{"sir_db", r.sir_db}, {"trial", r.trial}, {"error", r.error}});
    return e;
}

}  // namespace

std::string help_keys() {
    std::ostringstream os;
    os << "Config keys (key = value; [section] prefixes keys):\n";
    for (const auto& k : config::known_keys())
        os << "  " << k.key << " = " << (k.default_value.empty() ? "\"\"" : k.default_value) << "    " << k.help
           << '\n';
    return os.str();
}

config::RunConfig load_config(const Common& c) {
    config::RunConfig cfg = c.config_path.empty() ? config::RunConfig{} : config::RunConfig::load(c.config_path);
    if (c.full) {
        if (!cfg.has("trials")) cfg.set("trials", "100");
        if (!cfg.has("iterations")) cfg.set("iterations", "20000");
        if (!cfg.has("ablation.trials")) cfg.set("ablation.trials", "400");
    }
    if (c.seed_set) cfg.set("seed", std::to_string(c.seed));
    return cfg;
}

int cmd_gen(const Common& c, bool binary) {
    const auto cfg = load_config(c);
    const auto spec = config::to_sweep_spec(cfg);
    const eval::Scenario sc(spec.mixture, spec.signal);
    const double sir = cfg.get_double("gen.sir_db");
    const double kappa = sig::kappa_from_sir_db(sir);
    Rng rng = make_rng(spec.master_seed, 0x9e4, 0);
    const auto m = sc.draw(kappa, rng);
    std::vector<std::string> outs;
    for (const auto& [name, x] : std::vector<std::pair<std::string, const CVec*>>{{"s", &m.s}, {"b", &m.b}, {"y", &m.y}}) {
        io::write_signal(out_path(c, name + ".csv"), *x);
        outs.push_back(name + ".csv");
        if (binary) {
            io::write_signal(out_path(c, name + ".bin"), *x);
            outs.push_back(name + ".bin");
        }
    }
    json meta{{"mixture", eval::to_string(spec.mixture)},
              {"sir_db", sir},
              {"kappa", kappa},
              {"offset", m.offset},
              {"phase", m.phase},
              {"length", m.y.size()}};
    std::ofstream(out_path(c, "meta.json")) << meta.dump(2) << '\n';
    outs.push_back("meta.json");
    write_manifest(c, "gen", cfg, outs);
    std::cout << "wrote " << m.y.size() << " samples at SIR " << sir << " dB to " << c.out_dir << '\n';
    return 0;
}

int cmd_separate(const Common& c, const std::string& mixture_file, const std::string& meta_file,
                 const std::string& truth_file) {
    auto cfg = load_config(c);
    std::ifstream mf(meta_file);
    require(static_cast<bool>(mf), "meta file not found: " + meta_file);
    json meta;
    try {
        mf >> meta;
    } catch (const json::exception& e) {
        throw std::invalid_argument("meta file: " + std::string(e.what()));
    }
    if (meta.contains("mixture") && !cfg.has("mixture")) cfg.set("mixture", meta["mixture"].get<std::string>());
    const auto spec = config::to_sweep_spec(cfg);
    const eval::Scenario sc(spec.mixture, spec.signal);
    require(meta.contains("kappa"), "meta file: missing kappa");
    const double kappa = meta["kappa"].get<double>();
    require(kappa > 0.0 && std::isfinite(kappa), "separate: kappa must be positive and finite");

    eval::MixtureDraw m;
    m.kappa = kappa;
    m.offset = meta.value("offset", 0);
    m.phase = meta.value("phase", 0.0);
    m.y = io::read_signal(mixture_file);
    require(m.y.size() == sc.dim(), "separate: mixture length " + std::to_string(m.y.size()) + " != " +
                                        std::to_string(sc.dim()));
    CVec truth;
    if (!truth_file.empty()) {
        truth = io::read_signal(truth_file);
        require(truth.size() == m.y.size(), "separate: truth length mismatch");
    }

    const auto sched = smooth::build_schedule(spec.beta_1, spec.beta_T, spec.T);
    auto sep_cfg = spec.sep_config(sc);
    sep_cfg.omega = spec.omega_over_kappa2 * kappa * kappa;
    sep_cfg.seed = spec.master_seed;
    sep_cfg.trace_every = cfg.get_int("trace_every");
    const CVec theta0 = sc.init_theta(m.y, kappa);
    const auto r = sep::alpha_rgs(m.y, kappa, *sc.soi_score(), *sc.interference_score(m), sched, sep_cfg, theta0,
                                  truth.size() ? &truth : nullptr);

    io::write_signal(out_path(c, "s_hat.csv"), r.s_hat);
    io::write_signal(out_path(c, "b_hat.csv"), r.b_hat);
    std::vector<std::string> outs{"s_hat.csv", "b_hat.csv", "result.json"};
    if (sep_cfg.trace_every > 0) {
        sep::write_trace_csv(out_path(c, "trace.csv"), r);
        outs.push_back("trace.csv");
    }
    json res{{"iters", r.iters},
             {"wall_ms", r.wall_ms},
             {"kappa", kappa},
             {"hard_constraint", sep::satisfies_hard_constraint(m.y, kappa, r.s_hat, r.b_hat)}};
    if (truth.size()) {
        res["mse"] = sig::mse(r.s_hat, truth);
        res["ber"] = sig::ber(sc.decode_soi(r.s_hat), sc.decode_soi(truth));
    }
    std::ofstream(out_path(c, "result.json")) << res.dump(2) << '\n';
    write_manifest(c, "separate", cfg, outs, json::array(), {{"mixture_file", mixture_file}});
    std::cout << res.dump() << '\n';
    return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& sirs, int trials, const std::vector<std::string>& methods,
              bool no_timing) {
    auto cfg = load_config(c);
    if (!sirs.empty()) cfg.set("sir_db", join(sirs));
    if (trials > 0) cfg.set("trials", std::to_string(trials));
    if (!methods.empty()) {
        std::string s = "[";
        for (std::size_t i = 0; i < methods.size(); ++i) s += (i ? ", " : "") + methods[i];
        cfg.set("methods", s + "]");
    }
    auto spec = config::to_sweep_spec(cfg);
    spec.record_timing = !no_timing;
    const auto rows = eval::run_sweep(spec, c.threads);
    eval::write_sweep_csv(out_path(c, "sweep.csv"), rows);
    eval::write_aggregate_csv(out_path(c, "sweep_agg.csv"), eval::aggregate(rows));
    const json errors = error_list(rows);
    write_manifest(c, "sweep", cfg, {"sweep.csv", "sweep_agg.csv"}, errors, {{"record_timing", spec.record_timing}});
    std::cout << "wrote " << rows.size() << " rows to " << out_path(c, "sweep.csv") << '\n';
    for (const auto& a : eval::aggregate(rows))
        std::printf("  %-12s sir %6.1f  ber %.4g [%.4g, %.4g]  mse %.4g  n=%d failed=%d\n", a.method.c_str(),
                    a.sir_db, a.ber_mean, a.ber_lo, a.ber_hi, a.mse_mean, a.n, a.n_failed);
    return 0;
}

int cmd_ablation(const Common& c, const std::vector<double>& sirs, int trials, bool no_timing) {
    auto cfg = load_config(c);
    if (!sirs.empty()) cfg.set("sir_db", join(sirs));
    if (trials > 0) cfg.set("ablation.trials", std::to_string(trials));
    auto spec = config::to_sweep_spec(cfg);
    spec.mixture = eval::mixture_from_string(cfg.get_string("ablation.mixture"));
    spec.trials_per_point = cfg.get_int("ablation.trials");
    spec.methods = {"alpha_rgs"};
    spec.record_timing = !no_timing;
    spec.validate();
    const auto ratios = cfg.get_doubles("ablation.ratios");
    require(!ratios.empty(), "ablation: empty ratio grid");
    const auto rows = eval::omega_ablation(spec, ratios, c.threads);
    eval::write_ablation_csv(out_path(c, "ablation.csv"), rows);
    const auto agg = eval::aggregate_ablation(rows);
    eval::write_aggregate_csv(out_path(c, "ablation_agg.csv"), agg);
    write_manifest(c, "ablation", cfg, {"ablation.csv", "ablation_agg.csv"}, error_list(rows));
    std::cout << "wrote " << rows.size() << " rows to " << out_path(c, "ablation.csv") << '\n';
    for (const auto& a : agg)
        std::printf("  sir %6.1f  %-8s ber %.4g [%.4g, %.4g]\n", a.sir_db, a.method.c_str(), a.ber_mean, a.ber_lo,
                    a.ber_hi);
    return 0;
}

int cmd_landscape(const Common& c, const std::string& which) {
    auto cfg = load_config(c);
    if (!which.empty()) cfg.set("landscape.case", which);
    const std::string kase = cfg.get_string("landscape.case");
    const auto sched = schedule_of(cfg);

    sep::LandscapeSpec ls;
    ls.mc_draws = cfg.get_int("landscape.mc_draws");
    ls.seed = cfg.get_u64("seed");
    for (int t = 1; t <= sched.T; ++t) ls.levels.push_back(t);

    std::optional<score::FdOracle> src_s, src_b;
    double lo = -2.0, hi = 2.0;
    if (kase == "bpsk") {
        src_s.emplace(score::ScalarSource::uniform_atoms({1.0, -1.0}, Field::real));
    } else if (kase == "gmm4") {
        src_s.emplace(score::ScalarSource::from_gmm(score::landscape_gmm4()));
        lo = -3.0;
        hi = 5.0;
    } else if (kase == "toy") {
        src_s.emplace(score::ScalarSource::uniform_atoms({1.0, -1.0}, Field::real));
        src_b.emplace(score::ScalarSource::uniform_atoms(eval::toy_interference_atoms(), Field::real));
        ls.kappa = cfg.get_double("landscape.kappa");
        require(ls.kappa > 0.0, "landscape: kappa must be positive");
        ls.y = 1.0 - ls.kappa * 2.0 / std::sqrt(20.0);
        ls.omega = cfg.get_double("landscape.omega_over_kappa2") * ls.kappa * ls.kappa;
    } else {
        throw std::invalid_argument("landscape: unknown case '" + kase + "' (bpsk | gmm4 | toy)");
    }
    if (!cfg.is_auto("landscape.grid_lo")) lo = cfg.get_double("landscape.grid_lo");
    if (!cfg.is_auto("landscape.grid_hi")) hi = cfg.get_double("landscape.grid_hi");
    const double step = cfg.get_double("landscape.grid_step");
    require(step > 0.0 && hi > lo, "landscape: need grid_hi > grid_lo and grid_step > 0");
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) ls.theta_grid.push_back(lo + step * static_cast<double>(i));

    const auto curves = sep::landscape_1d(ls, *src_s, src_b ? &*src_b : nullptr, sched);
    const std::string name = "landscape_" + kase + ".csv";
    sep::write_landscape_csv(out_path(c, name), curves);
    const auto mins = sep::local_minima(curves.theta, curves.averaged);
    write_manifest(c, "landscape", cfg, {name}, json::array(), {{"averaged_minima", mins}});
    std::cout << "averaged-curve local minima:";
    for (double m : mins) std::cout << ' ' << m;
    std::cout << '\n';
    return 0;
}

int cmd_score_check(const Common& c, const std::string& fixtures, const std::string& dump_dir) {
    const auto cfg = load_config(c);
    const auto sched = schedule_of(cfg);
    const std::vector<int> levels{2, 10, 25, 49};
    for (int t : levels) require(t <= sched.T, "score-check: schedule has fewer than 49 levels");
    if (!dump_dir.empty()) {
        score::dump_fixtures(dump_dir, sched, levels);
        std::cout << "wrote fixtures to " << dump_dir << '\n';
        return 0;
    }
    const auto results = fixtures.empty() ? score::run_score_check(sched, levels) : score::check_fixtures(fixtures, sched);
    require(!results.empty(), "score-check: no cases found");
    bool ok = true;
    json report = json::array();
    for (const auto& r : results) {
        std::printf("%-4s %-14s t=%-3d max_rel=%.3e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.t, r.max_rel);
        ok = ok && r.pass;
        report.push_back({{"case", r.name}, {"t", r.t}, {"max_rel", r.max_rel}, {"pass", r.pass}});
    }
    std::ofstream(out_path(c, "score_check.json")) << report.dump(2) << '\n';
    return ok ? 0 : 1;
}

int cmd_cov(const Common& c) {
    const auto cfg = load_config(c);
    const auto spec = config::to_sweep_spec(cfg);
    const eval::Scenario sc(spec.mixture, spec.signal);
    const auto cov = sc.covariance(spec.cov_samples, make_rng(spec.master_seed, 0xC0BB)(), spec.cov_empirical);
    baseline::write_cov_bin(out_path(c, "c_bb.bin"), cov.C_bb);
    write_manifest(c, "cov", cfg, {"c_bb.bin"});
    std::cout << "wrote " << cov.C_bb.rows() << "x" << cov.C_bb.cols() << " covariance\n";
    return 0;
}

}  // namespace rfsep::cli
