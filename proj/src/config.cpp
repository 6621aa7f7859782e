#include "rfsep/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rfsep::config {

const std::vector<KeyInfo>& known_keys() {
    static const std::vector<KeyInfo> k{
        {"seed", "0", "master seed; every random stream derives from it"},
        {"mixture", "qpsk+ofdm_qpsk", "qpsk+ofdm_qpsk | qpsk+ofdm_bpsk | scalar_toy"},
        {"methods", "[mf, lmmse, alpha_rgs]", "subset of mf, lmmse, basis_orig, basis_map, basis_alpha, alpha_rgs"},
        {"sir_db", "[-24, -21, -18, -15, -12, -9, -6, -3]", "SIR points in dB (inf gives kappa = 0)"},
        {"trials", "25", "trials per SIR point (--full: 100)"},
        {"d", "2560", "waveform length in samples"},
        {"tau", "8", "sample index of the first SOI symbol peak"},
        {"rolloff", "0.5", "RRC roll-off"},
        {"span", "8", "RRC span in symbols"},
        {"sps", "16", "samples per symbol"},
        {"d_toy", "400", "scalar pairs per toy trial"},
        {"beta_1", "1e-4", "first schedule beta"},
        {"beta_T", "0.05", "last schedule beta"},
        {"T", "50", "number of noise levels"},
        {"iterations", "auto", "alpha_rgs iterations N (RF 2000, toy 5000; --full: 20000)"},
        {"eta_max", "auto", "cosine LR start (RF 5e-3, toy 2e-4)"},
        {"eta_min", "auto", "cosine LR end (1e-6)"},
        {"t_lo", "auto", "lowest sampled level (RF 2, toy 1)"},
        {"t_hi", "auto", "highest sampled level (T)"},
        {"omega_over_kappa2", "1", "alpha-posterior weight omega / kappa^2"},
        {"trace_every", "100", "trace sampling period for `separate` (0 disables)"},
        {"basis.n_inner", "100", "BASIS Langevin steps per level"},
        {"basis.lr_orig", "auto", "BASIS original lr_scale (RF 2e-8, toy 5e-3)"},
        {"basis.lr_variant", "auto", "BASIS hard-constraint variants lr_scale (RF 2e-6, toy 5e-3)"},
        {"cov_bb_method", "oracle", "oracle (exact under the random offset/phase model) | empirical"},
        {"cov_samples", "10000", "realizations for the empirical interference covariance"},
        {"cov_bb_file", "", "load C_bb from this binary instead of estimating"},
        {"ablation.ratios", "[0.01, 0.1, 1, 10, 100]", "omega / kappa^2 grid"},
        {"ablation.trials", "10", "trials per (SIR, ratio) (--full: 400)"},
        {"ablation.mixture", "scalar_toy", "mixture used by the ablation"},
        {"landscape.case", "bpsk", "bpsk | gmm4 | toy"},
        {"landscape.grid_lo", "auto", "grid start (bpsk -2, gmm4 -3, toy -2)"},
        {"landscape.grid_hi", "auto", "grid end (bpsk 2, gmm4 5, toy 2)"},
        {"landscape.grid_step", "0.01", "grid spacing"},
        {"landscape.mc_draws", "256", "Monte Carlo draws per level"},
        {"landscape.kappa", "15.85", "toy case kappa"},
        {"landscape.omega_over_kappa2", "1", "toy case omega / kappa^2"},
        {"gen.sir_db", "-6", "SIR for `gen`"},
    };
    return k;
}

namespace {

const KeyInfo* find_key(const std::string& key) {
    for (const auto& k : known_keys())
        if (k.key == key) return &k;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

std::string unquote(const std::string& s) {
    const std::string t = trim(s);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
    return t;
}

std::vector<std::string> split_list(const std::string& v) {
    std::string t = trim(v);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::string u = unquote(cell);
        if (!u.empty()) out.push_back(u);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    const std::string t = unquote(v);
    if (t == "inf" || t == "+inf") return INFINITY;
    if (t == "-inf") return -INFINITY;
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(t.c_str(), &end);
    require(!t.empty() && end == t.c_str() + t.size() && errno == 0 && std::isfinite(d),
            "config: '" + key + "' expects a number, got '" + t + "'");
    return d;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos) {
            section = trim(t.substr(1, t.size() - 2));
            require(!section.empty(), where + ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        require(eq != std::string::npos, where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        require(!key.empty(), where + ": missing key");
        const std::string full = section.empty() ? key : section + "." + key;
        require(!c.has(full), where + ": duplicate key '" + full + "'");
        try {
            c.set(full, trim(t.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "config file not found: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
    require(find_key(key) != nullptr, "unknown config key '" + key + "'");
    values_[key] = value;
}

std::string RunConfig::raw(const std::string& key) const {
    const KeyInfo* k = find_key(key);
    require(k != nullptr, "unknown config key '" + key + "'");
    const auto it = values_.find(key);
    return it == values_.end() ? k->default_value : it->second;
}

bool RunConfig::is_auto(const std::string& key) const { return unquote(raw(key)) == "auto"; }

std::string RunConfig::get_string(const std::string& key) const { return unquote(raw(key)); }

double RunConfig::get_double(const std::string& key) const { return parse_double(key, raw(key)); }

int RunConfig::get_int(const std::string& key) const {
    const double d = get_double(key);
    require(d == std::floor(d) && std::abs(d) < 2e9, "config: '" + key + "' expects an integer");
    return static_cast<int>(d);
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
    const std::string t = unquote(raw(key));
    require(!t.empty() && std::all_of(t.begin(), t.end(), ::isdigit),
            "config: '" + key + "' expects a non-negative integer");
    return std::stoull(t);
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string t = unquote(raw(key));
    require(t == "true" || t == "false", "config: '" + key + "' expects true or false");
    return t == "true";
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& c : split_list(raw(key))) out.push_back(parse_double(key, c));
    return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key) const { return split_list(raw(key)); }

std::map<std::string, std::string> RunConfig::effective() const {
    std::map<std::string, std::string> out;
    for (const auto& k : known_keys()) out[k.key] = raw(k.key);
    return out;
}

eval::SweepSpec to_sweep_spec(const RunConfig& c) {
    eval::SweepSpec s;
    s.master_seed = c.get_u64("seed");
    s.mixture = eval::mixture_from_string(c.get_string("mixture"));
    s.methods = c.get_strings("methods");
    s.sir_db_list = c.get_doubles("sir_db");
    s.trials_per_point = c.get_int("trials");
    s.signal.d = c.get_int("d");
    s.signal.tau = c.get_int("tau");
    s.signal.rolloff = c.get_double("rolloff");
    s.signal.span = c.get_int("span");
    s.signal.sps = c.get_int("sps");
    s.signal.d_toy = c.get_int("d_toy");
    s.beta_1 = c.get_double("beta_1");
    s.beta_T = c.get_double("beta_T");
    s.T = c.get_int("T");
    if (!c.is_auto("iterations")) s.iterations = c.get_int("iterations");
    if (!c.is_auto("eta_max")) s.eta_max = c.get_double("eta_max");
    if (!c.is_auto("eta_min")) s.eta_min = c.get_double("eta_min");
    if (!c.is_auto("t_lo")) s.t_lo = c.get_int("t_lo");
    if (!c.is_auto("t_hi")) s.t_hi = c.get_int("t_hi");
    s.omega_over_kappa2 = c.get_double("omega_over_kappa2");
    s.basis_n_inner = c.get_int("basis.n_inner");
    if (!c.is_auto("basis.lr_orig")) s.basis_lr_orig = c.get_double("basis.lr_orig");
    if (!c.is_auto("basis.lr_variant")) s.basis_lr_variant = c.get_double("basis.lr_variant");
    const std::string cm = c.get_string("cov_bb_method");
    if (cm != "oracle" && cm != "empirical")
        throw std::invalid_argument("config: cov_bb_method must be oracle or empirical, got " + cm);
    s.cov_empirical = cm == "empirical";
    s.cov_samples = c.get_int("cov_samples");
    s.cov_bb_file = c.get_string("cov_bb_file");
    s.validate();
    return s;
}

}  // namespace rfsep::config
