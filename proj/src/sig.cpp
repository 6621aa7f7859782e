#include "rfsep/sig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rfsep::sig {

namespace {
constexpr double kPi = std::numbers::pi;
}

Constellation Constellation::bpsk() { return {"bpsk", {{1.0, 0.0}, {-1.0, 0.0}}, 1}; }

Constellation Constellation::qpsk() {
    const double r = 1.0 / std::sqrt(2.0);
    // 00, 01, 10, 11
    return {"qpsk", {{r, r}, {-r, r}, {r, -r}, {-r, -r}}, 2};
}

Constellation Constellation::by_name(const std::string& name) {
    if (name == "bpsk") return bpsk();
    if (name == "qpsk") return qpsk();
    throw std::invalid_argument("unknown constellation: " + name);
}

bool Constellation::is_real() const {
    return std::all_of(points.begin(), points.end(), [](cplx p) { return p.imag() == 0.0; });
}

void OfdmSpec::validate() const {
    require(fft_size >= 2, "ofdm: fft_size must be >= 2");
    require(cp_len >= 0 && cp_len < fft_size, "ofdm: cp_len must be in [0, fft_size)");
    require(!active.empty() && static_cast<int>(active.size()) <= fft_size - 1,
            "ofdm: need 1..fft_size-1 active carriers");
    std::vector<int> seen;
    for (int k : active) {
        require(k > 0 && k < fft_size, "ofdm: carrier index out of range or DC");
        seen.push_back(k);
    }
    std::sort(seen.begin(), seen.end());
    require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(), "ofdm: duplicate carrier");
}

OfdmSpec OfdmSpec::standard(const Constellation& c) {
    OfdmSpec s;
    s.constellation = c;
    for (int k = 1; k <= 28; ++k) s.active.push_back(k);
    for (int k = 36; k <= 63; ++k) s.active.push_back(k);
    return s;
}

CVec map_bits_to_symbols(const Bits& bits, const Constellation& c) {
    const std::size_t m = static_cast<std::size_t>(c.bits_per_symbol);
    require(bits.size() % m == 0, "map_bits_to_symbols: bit count not divisible by bits_per_symbol");
    CVec out(static_cast<Eigen::Index>(bits.size() / m));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < m; ++b) idx = (idx << 1) | (bits[i * m + b] & 1u);
        out[i] = c.points[idx];
    }
    return out;
}

std::vector<int> nearest_points(const CVec& soft, const Constellation& c) {
    std::vector<int> idx(static_cast<std::size_t>(soft.size()));
    for (Eigen::Index i = 0; i < soft.size(); ++i) {
        int best = 0;
        double bd = std::norm(soft[i] - c.points[0]);
        for (std::size_t k = 1; k < c.points.size(); ++k) {
            const double dk = std::norm(soft[i] - c.points[k]);
            if (dk < bd) {
                bd = dk;
                best = static_cast<int>(k);
            }
        }
        idx[static_cast<std::size_t>(i)] = best;
    }
    return idx;
}

Bits indices_to_bits(const std::vector<int>& idx, const Constellation& c) {
    const int m = c.bits_per_symbol;
    Bits out;
    out.reserve(idx.size() * static_cast<std::size_t>(m));
    for (int v : idx)
        for (int b = m - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    return out;
}

Demod decide(const CVec& soft, const Constellation& c) {
    const auto idx = nearest_points(soft, c);
    Demod d;
    d.symbols.resize(soft.size());
    for (std::size_t i = 0; i < idx.size(); ++i) d.symbols[static_cast<Eigen::Index>(i)] = c.points[idx[i]];
    d.bits = indices_to_bits(idx, c);
    return d;
}

Bits random_bits(std::size_t n, Rng& rng) {
    Bits out(n);
    std::uniform_int_distribution<int> coin(0, 1);
    for (auto& b : out) b = static_cast<std::uint8_t>(coin(rng));
    return out;
}

PulseShape rrc_taps(double rolloff, int span_symbols, int sps) {
    require(rolloff > 0.0 && rolloff <= 1.0, "rrc_taps: rolloff must be in (0,1]");
    require(sps >= 1, "rrc_taps: sps must be >= 1");
    require(span_symbols >= 2 && span_symbols % 2 == 0, "rrc_taps: span must be even and >= 2");
    const int n = span_symbols * sps + 1;
    const int c = n / 2;
    const double b = rolloff;
    RVec h(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - c) / sps;
        if (i == c) {
            h[i] = 1.0 - b + 4.0 * b / kPi;
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-12) {
            h[i] = b / std::sqrt(2.0) *
                   ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * b)) + (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * b)));
        } else {
            const double num = std::sin(kPi * t * (1.0 - b)) + 4.0 * b * t * std::cos(kPi * t * (1.0 + b));
            const double den = kPi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t));
            h[i] = num / den;
        }
    }
    // exact symmetry, then unit energy
    for (int i = 0; i < c; ++i) h[n - 1 - i] = h[i];
    h /= h.norm();
    return {h, sps, span_symbols, rolloff};
}

int sc_symbol_count(int d, int tau, int sps) {
    require(d > 0 && tau >= 0 && tau < d && sps >= 1, "sc_symbol_count: need 0 <= tau < d, sps >= 1");
    return (d - tau + sps - 1) / sps;
}

CVec modulate_sc(const CVec& symbols, const PulseShape& p, int tau, int d) {
    const int P = sc_symbol_count(d, tau, p.sps);
    require(symbols.size() == P, "modulate_sc: expected " + std::to_string(P) + " symbols, got " +
                                     std::to_string(symbols.size()));
    const double g = std::sqrt(static_cast<double>(p.sps));
    const int L = static_cast<int>(p.taps.size());
    const int half = p.half();
    CVec x = CVec::Zero(d);
    for (int q = 0; q < P; ++q) {
        const int c = tau + q * p.sps;
        const cplx a = symbols[q] * g;
        for (int k = std::max(0, half - c); k < L && c - half + k < d; ++k) x[c - half + k] += a * p.taps[k];
    }
    return x;
}

CVec matched_filter(const CVec& y, const PulseShape& p, int tau) {
    const int d = static_cast<int>(y.size());
    const int P = sc_symbol_count(d, tau, p.sps);
    const int L = static_cast<int>(p.taps.size());
    const int half = p.half();
    const double g = 1.0 / std::sqrt(static_cast<double>(p.sps));
    CVec m(P);
    for (int q = 0; q < P; ++q) {
        const int c = tau + q * p.sps;
        cplx acc = 0.0;
        for (int k = std::max(0, half - c); k < L && c - half + k < d; ++k) acc += p.taps[k] * y[c - half + k];
        m[q] = acc * g;
    }
    return m;
}

Demod matched_filter_demod(const CVec& y, const PulseShape& p, int tau, const Constellation& c) {
    return decide(matched_filter(y, p, tau), c);
}

int ofdm_symbol_count(int d, const OfdmSpec& spec) {
    require(d > 0 && d % spec.symbol_len() == 0,
            "ofdm: d must be a multiple of the OFDM symbol length " + std::to_string(spec.symbol_len()));
    return d / spec.symbol_len();
}

CVec modulate_ofdm(const CVec& symbols, const OfdmSpec& spec, int d) {
    spec.validate();
    const int nsym = ofdm_symbol_count(d, spec);
    const int K = spec.n_active();
    require(symbols.size() == static_cast<Eigen::Index>(K) * nsym,
            "modulate_ofdm: expected " + std::to_string(K * nsym) + " symbols");
    const int L = spec.fft_size;
    const int S = spec.symbol_len();
    const double norm = 1.0 / std::sqrt(static_cast<double>(K));
    CVec x(d);
    for (int m = 0; m < nsym; ++m) {
        for (int i = 0; i < S; ++i) {
            const int n = i < spec.cp_len ? i + L - spec.cp_len : i - spec.cp_len;
            cplx acc = 0.0;
            for (int k = 0; k < K; ++k) {
                const double ang = 2.0 * kPi * ((static_cast<long>(spec.active[k]) * n) % L) / L;
                acc += symbols[m * K + k] * cplx(std::cos(ang), std::sin(ang));
            }
            x[m * S + i] = acc * norm;
        }
    }
    return x;
}

CVec ofdm_demod_soft(const CVec& x, const OfdmSpec& spec, int offset, double phase) {
    spec.validate();
    const int d = static_cast<int>(x.size());
    const int nsym = ofdm_symbol_count(d, spec);
    const CVec u = remove_impairment(x, offset, phase);
    const int K = spec.n_active();
    const int L = spec.fft_size;
    const double scale = std::sqrt(static_cast<double>(K)) / L;
    CVec out(static_cast<Eigen::Index>(K) * nsym);
    for (int m = 0; m < nsym; ++m) {
        const int base = m * spec.symbol_len() + spec.cp_len;
        for (int k = 0; k < K; ++k) {
            cplx acc = 0.0;
            for (int n = 0; n < L; ++n) {
                const double ang = -2.0 * kPi * ((static_cast<long>(spec.active[k]) * n) % L) / L;
                acc += u[base + n] * cplx(std::cos(ang), std::sin(ang));
            }
            out[m * K + k] = acc * scale;
        }
    }
    return out;
}

Demod ofdm_demod(const CVec& x, const OfdmSpec& spec, int offset, double phase) {
    return decide(ofdm_demod_soft(x, spec, offset, phase), spec.constellation);
}

CVec apply_impairment(const CVec& x, int offset, double phase) {
    const Eigen::Index d = x.size();
    require(d > 0, "impairment: empty signal");
    const Eigen::Index off = ((offset % d) + d) % d;
    const cplx rot = std::polar(1.0, phase);
    CVec out(d);
    for (Eigen::Index n = 0; n < d; ++n) out[(n + off) % d] = rot * x[n];
    return out;
}

CVec remove_impairment(const CVec& x, int offset, double phase) {
    const Eigen::Index d = x.size();
    require(d > 0, "impairment: empty signal");
    const Eigen::Index off = ((offset % d) + d) % d;
    const cplx rot = std::polar(1.0, -phase);
    CVec out(d);
    for (Eigen::Index n = 0; n < d; ++n) out[n] = rot * x[(n + off) % d];
    return out;
}

Impaired random_impairment(const CVec& x, int symbol_len, Rng& rng) {
    require(symbol_len >= 1, "random_impairment: symbol_len must be >= 1");
    std::uniform_int_distribution<int> off(0, symbol_len - 1);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    Impaired r;
    r.offset = off(rng);
    r.phase = ph(rng);
    r.x = apply_impairment(x, r.offset, r.phase);
    return r;
}

CVec mix(const CVec& s, const CVec& b, double kappa) {
    require(s.size() == b.size(), "mix: length mismatch");
    require(kappa >= 0.0 && std::isfinite(kappa), "mix: kappa must be finite and >= 0");
    CVec y(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) y[i] = s[i] + kappa * b[i];
    return y;
}

double kappa_from_sir_db(double sir_db) { return std::pow(10.0, -sir_db / 20.0); }

double ber(const Bits& bits_hat, const Bits& bits_true) {
    require(bits_hat.size() == bits_true.size(), "ber: length mismatch");
    require(!bits_true.empty(), "ber: empty input");
    std::size_t errs = 0;
    for (std::size_t i = 0; i < bits_true.size(); ++i) errs += (bits_hat[i] & 1u) != (bits_true[i] & 1u);
    return static_cast<double>(errs) / static_cast<double>(bits_true.size());
}

double mse(const CVec& x_hat, const CVec& x) {
    require(x_hat.size() == x.size(), "mse: length mismatch");
    require(x.size() > 0, "mse: empty input");
    return (x_hat - x).squaredNorm() / static_cast<double>(x.size());
}

}  // namespace rfsep::sig
