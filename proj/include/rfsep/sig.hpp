#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfsep/types.hpp"

namespace rfsep::sig {

using Bits = std::vector<std::uint8_t>;

// point index i carries bits of i, most significant bit first
struct Constellation {
    std::string name;
    std::vector<cplx> points;
    int bits_per_symbol = 1;

    static Constellation bpsk();
    static Constellation qpsk();
    static Constellation by_name(const std::string& name);
    bool is_real() const;
};

struct PulseShape {
    RVec taps;
    int sps = 16;
    int span_symbols = 8;
    double rolloff = 0.5;
    int half() const { return static_cast<int>(taps.size() / 2); }
};

struct OfdmSpec {
    int fft_size = 64;
    int cp_len = 16;
    std::vector<int> active;  // subcarrier indices mod fft_size, DC excluded
    Constellation constellation = Constellation::qpsk();

    int symbol_len() const { return fft_size + cp_len; }
    int n_active() const { return static_cast<int>(active.size()); }
    void validate() const;
    // 64-point FFT, CP 16, carriers +-1..+-28
    static OfdmSpec standard(const Constellation& c);
};

struct Demod {
    CVec symbols;  // decided points
    Bits bits;
};

struct Impaired {
    CVec x;
    int offset = 0;
    double phase = 0.0;
};

CVec map_bits_to_symbols(const Bits& bits, const Constellation& c);
std::vector<int> nearest_points(const CVec& soft, const Constellation& c);
Bits indices_to_bits(const std::vector<int>& idx, const Constellation& c);
Demod decide(const CVec& soft, const Constellation& c);
Bits random_bits(std::size_t n, Rng& rng);

PulseShape rrc_taps(double rolloff, int span_symbols, int sps);

int sc_symbol_count(int d, int tau, int sps);
CVec modulate_sc(const CVec& symbols, const PulseShape& p, int tau, int d);
// matched-filter statistics at tau + p*sps, scaled so a noiseless interior symbol maps to itself
CVec matched_filter(const CVec& y, const PulseShape& p, int tau);
Demod matched_filter_demod(const CVec& y, const PulseShape& p, int tau, const Constellation& c);

int ofdm_symbol_count(int d, const OfdmSpec& spec);
CVec modulate_ofdm(const CVec& symbols, const OfdmSpec& spec, int d);
CVec ofdm_demod_soft(const CVec& x, const OfdmSpec& spec, int offset = 0, double phase = 0.0);
Demod ofdm_demod(const CVec& x, const OfdmSpec& spec, int offset = 0, double phase = 0.0);

// x'[n] = e^{j phase} x[(n - offset) mod d]
CVec apply_impairment(const CVec& x, int offset, double phase);
CVec remove_impairment(const CVec& x, int offset, double phase);
Impaired random_impairment(const CVec& x, int symbol_len, Rng& rng);

CVec mix(const CVec& s, const CVec& b, double kappa);
double kappa_from_sir_db(double sir_db);

double ber(const Bits& bits_hat, const Bits& bits_true);
double mse(const CVec& x_hat, const CVec& x);

}  // namespace rfsep::sig
