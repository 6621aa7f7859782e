#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "rfsep/sig.hpp"
#include "rfsep/signal_io.hpp"

using namespace rfsep;
using namespace rfsep::sig;

namespace {

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

CVec random_qpsk(int n, Rng& rng, Bits* bits = nullptr) {
    const Bits b = random_bits(static_cast<std::size_t>(2 * n), rng);
    if (bits) *bits = b;
    return map_bits_to_symbols(b, Constellation::qpsk());
}

}  // namespace

TEST_CASE("gray mapping conventions") {
    const auto q = map_bits_to_symbols({0, 0}, Constellation::qpsk());
    CHECK(std::abs(q[0] - cplx(1, 1) / std::sqrt(2.0)) < 1e-15);
    const auto b = map_bits_to_symbols({0, 1}, Constellation::bpsk());
    CHECK(b[0] == cplx(1, 0));
    CHECK(b[1] == cplx(-1, 0));
    // adjacent QPSK points differ in one bit
    const auto& pts = Constellation::qpsk().points;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(std::abs(pts[i] - pts[j]) - std::sqrt(2.0)) < 1e-12) CHECK(__builtin_popcount(i ^ j) == 1);
}

TEST_CASE("bits round trip") {
    Rng rng(1);
    for (const auto& c : {Constellation::bpsk(), Constellation::qpsk()}) {
        const Bits bits = random_bits(256, rng);
        CHECK(decide(map_bits_to_symbols(bits, c), c).bits == bits);
    }
    CHECK_THROWS_AS(map_bits_to_symbols({0, 1, 1}, Constellation::qpsk()), std::invalid_argument);
}

TEST_CASE("rrc taps") {
    const auto p = rrc_taps(0.5, 8, 16);
    REQUIRE(p.taps.size() == 129);
    for (int i = 0; i < 129; ++i) CHECK(p.taps[i] == doctest::Approx(p.taps[128 - i]).epsilon(1e-14));
    Eigen::Index imax;
    p.taps.maxCoeff(&imax);
    CHECK(imax == 64);
    CHECK(std::abs(p.taps.squaredNorm() - 1.0) < 1e-9);
}

TEST_CASE("single-carrier modulation") {
    const auto p = rrc_taps(0.5, 8, 16);
    CHECK(sc_symbol_count(2560, 8, 16) == 160);
    SUBCASE("unit impulse gives shifted taps") {
        CVec a = CVec::Zero(160);
        a[10] = 1.0;
        const CVec x = modulate_sc(a, p, 8, 2560);
        const int c = 8 + 10 * 16;
        for (int k = -64; k <= 64; ++k) CHECK(std::abs(x[c + k] - std::sqrt(16.0) * p.taps[k + 64]) < 1e-14);
        CHECK(x.head(c - 64).norm() == 0.0);
    }
    SUBCASE("noiseless round trip") {
        Rng rng(2);
        Bits bits;
        const CVec a = random_qpsk(160, rng, &bits);
        const CVec x = modulate_sc(a, p, 8, 2560);
        CHECK(matched_filter_demod(x, p, 8, Constellation::qpsk()).bits == bits);
        // unit mean sample power
        CHECK(x.squaredNorm() / 2560 == doctest::Approx(1.0).epsilon(0.03));
    }
}

TEST_CASE("matched filter BER under AWGN follows Q(sqrt(2 Eb/N0))") {
    const auto p = rrc_taps(0.5, 8, 16);
    for (double ebn0_db : {0.0, 4.0, 8.0}) {
        Rng rng(100 + static_cast<int>(ebn0_db));
        const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
        // sample power 1, Es = sps per symbol, Eb = Es/2; per-sample complex noise variance N0
        const double n0 = 16.0 / (2.0 * ebn0);
        std::normal_distribution<double> nd(0.0, std::sqrt(n0 / 2.0));
        long errors = 0, total = 0;
        while (total < 100000) {
            Bits bits;
            const CVec a = random_qpsk(160, rng, &bits);
            CVec y = modulate_sc(a, p, 8, 2560);
            for (auto& v : y) v += cplx(nd(rng), nd(rng));
            const auto d = matched_filter_demod(y, p, 8, Constellation::qpsk());
            // interior symbols only: edge symbols lose part of their pulse energy
            for (std::size_t i = 16; i < bits.size() - 16; ++i) errors += d.bits[i] != bits[i];
            total += static_cast<long>(bits.size()) - 32;
        }
        const double pb = qfunc(std::sqrt(2.0 * ebn0));
        const double sd = std::sqrt(pb * (1 - pb) / total);
        CHECK(std::abs(static_cast<double>(errors) / total - pb) < 3.0 * sd);
    }
}

TEST_CASE("matched filter under overwhelming interference") {
    const auto p = rrc_taps(0.5, 8, 16);
    Rng rng(5);
    Bits bits;
    const CVec s = modulate_sc(random_qpsk(160, rng, &bits), p, 8, 2560);
    const CVec b = modulate_sc(random_qpsk(160, rng), p, 8, 2560);
    const double e = ber(matched_filter_demod(mix(s, b, 1e4), p, 8, Constellation::qpsk()).bits, bits);
    CHECK(std::abs(e - 0.5) < 0.1);
}

TEST_CASE("ofdm") {
    const auto spec = OfdmSpec::standard(Constellation::qpsk());
    CHECK(spec.symbol_len() == 80);
    CHECK(spec.n_active() == 56);
    CHECK(ofdm_symbol_count(2560, spec) == 32);
    CHECK(modulate_ofdm(CVec::Zero(32 * 56), spec, 2560).norm() == 0.0);
    Rng rng(3);
    const CVec a = random_qpsk(32 * 56, rng);
    const CVec x = modulate_ofdm(a, spec, 2560);
    CHECK((ofdm_demod_soft(x, spec) - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ofdm_demod(x, spec).symbols == decide(a, spec.constellation).symbols);
    // cyclic prefix copies the block tail
    for (int k = 0; k < 16; ++k) CHECK(std::abs(x[k] - x[64 + k]) < 1e-14);
    CHECK_THROWS_AS(modulate_ofdm(a, spec, 2500), std::invalid_argument);
}

TEST_CASE("impairment") {
    Rng rng(4);
    const auto spec = OfdmSpec::standard(Constellation::qpsk());
    const CVec a = random_qpsk(32 * 56, rng);
    const CVec x = modulate_ofdm(a, spec, 2560);
    CHECK(apply_impairment(x, 0, 0.0) == x);
    const CVec r = apply_impairment(x, 0, 1.3);
    CHECK((r.cwiseAbs() - x.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    const auto imp = random_impairment(x, 80, rng);
    CHECK(imp.offset >= 0);
    CHECK(imp.offset < 80);
    CHECK((remove_impairment(imp.x, imp.offset, imp.phase) - x).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((ofdm_demod_soft(imp.x, spec, imp.offset, imp.phase) - a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mixing and metrics") {
    CHECK(kappa_from_sir_db(-12) == doctest::Approx(3.981071705534972));
    CHECK(kappa_from_sir_db(INFINITY) == 0.0);
    Rng rng(6);
    const CVec s = random_qpsk(64, rng), b = random_qpsk(64, rng);
    CHECK(mix(s, b, 0.0) == s);
    const CVec y = mix(s, b, 0.5);  // power-of-two kappa: exact
    CHECK(CVec(y - 0.5 * b) == s);
    const Bits bits = random_bits(100, rng);
    Bits inv = bits;
    for (auto& v : inv) v ^= 1;
    CHECK(ber(bits, bits) == 0.0);
    CHECK(ber(inv, bits) == 1.0);
    CHECK(mse(CVec(-s), s) == doctest::Approx(4.0 * s.squaredNorm() / 64));
    CHECK_THROWS_AS(ber(bits, Bits(3)), std::invalid_argument);
}

TEST_CASE("signal io round trip") {
    Rng rng(7);
    const CVec x = random_qpsk(50, rng) * 1.2345678901234567;
    const auto dir = std::filesystem::temp_directory_path() / "rfsep_io_test";
    std::filesystem::create_directories(dir);
    for (const char* name : {"x.csv", "x.bin"}) {
        const std::string p = (dir / name).string();
        io::write_signal(p, x);
        CHECK(io::read_signal(p) == x);
    }
    CHECK(std::filesystem::file_size(dir / "x.bin") == 50 * 16);
    CHECK_THROWS_AS(io::read_signal((dir / "missing.csv").string()), std::invalid_argument);
}
