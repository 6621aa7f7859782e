#include "rfsep/scenario.hpp"

#include <cmath>

namespace rfsep::eval {

MixtureKind mixture_from_string(const std::string& s) {
    if (s == "qpsk+ofdm_bpsk") return MixtureKind::qpsk_ofdm_bpsk;
    if (s == "qpsk+ofdm_qpsk") return MixtureKind::qpsk_ofdm_qpsk;
    if (s == "scalar_toy") return MixtureKind::scalar_toy;
    throw std::invalid_argument("unknown mixture: " + s + " (expected qpsk+ofdm_bpsk, qpsk+ofdm_qpsk, scalar_toy)");
}

std::string to_string(MixtureKind k) {
    switch (k) {
    case MixtureKind::qpsk_ofdm_bpsk: return "qpsk+ofdm_bpsk";
    case MixtureKind::qpsk_ofdm_qpsk: return "qpsk+ofdm_qpsk";
    case MixtureKind::scalar_toy: return "scalar_toy";
    }
    return "?";
}

void SignalParams::validate() const {
    require(d >= 1 && d_toy >= 1, "signal: lengths must be >= 1");
    require(tau >= 0 && tau < d, "signal: need 0 <= tau < d");
    require(sps >= 1 && span >= 2 && span % 2 == 0, "signal: need sps >= 1 and even span >= 2");
    require(rolloff > 0.0 && rolloff <= 1.0, "signal: rolloff must be in (0,1]");
}

std::vector<cplx> toy_interference_atoms() {
    const double r = 1.0 / std::sqrt(20.0);
    return {-6.0 * r, -2.0 * r, 2.0 * r, 6.0 * r};
}

Scenario::Scenario(MixtureKind kind, SignalParams params) : kind_(kind), p_(params) {
    p_.validate();
    if (is_toy()) {
        soi_score_ = std::make_shared<score::ConstellationScore>(sig::Constellation::bpsk(), Field::real);
        toy_b_score_ = std::make_shared<score::ConstellationScore>(
            toy_interference_atoms(), std::vector<double>(4, 0.25), Field::real);
        return;
    }
    const auto bc = kind == MixtureKind::qpsk_ofdm_bpsk ? sig::Constellation::bpsk() : sig::Constellation::qpsk();
    ofdm_spec_ = sig::OfdmSpec::standard(bc);
    rrc_ = std::make_shared<score::RrcTransform>(sig::rrc_taps(p_.rolloff, p_.span, p_.sps), p_.tau, p_.d);
    ofdm0_ = std::make_shared<score::OfdmTransform>(ofdm_spec_, p_.d, 0, 0.0);
    soi_score_ = std::make_shared<score::TransformScore>(std::make_shared<score::ConstellationScore>(soi_c_), rrc_);
    b_symbol_score_ = std::make_shared<score::ConstellationScore>(bc);
}

Eigen::Index Scenario::dim() const { return is_toy() ? p_.d_toy : p_.d; }

namespace {
CVec random_symbols(Eigen::Index n, const sig::Constellation& c, Rng& rng, sig::Bits* bits) {
    sig::Bits b = sig::random_bits(static_cast<std::size_t>(n) * c.bits_per_symbol, rng);
    CVec s = sig::map_bits_to_symbols(b, c);
    if (bits) *bits = std::move(b);
    return s;
}
}  // namespace

CVec Scenario::sample_interference(Rng& rng) const {
    if (is_toy()) {
        const auto atoms = toy_interference_atoms();
        std::uniform_int_distribution<int> pick(0, 3);
        CVec b(p_.d_toy);
        for (auto& v : b) v = atoms[pick(rng)];
        return b;
    }
    const CVec sym = random_symbols(ofdm0_->cols(), ofdm_spec_.constellation, rng, nullptr);
    return sig::random_impairment(ofdm0_->apply(sym), ofdm_spec_.symbol_len(), rng).x;
}

MixtureDraw Scenario::draw(double kappa, Rng& rng) const {
    MixtureDraw m;
    m.kappa = kappa;
    if (is_toy()) {
        m.s = random_symbols(p_.d_toy, sig::Constellation::bpsk(), rng, &m.bits_s);
        m.b = sample_interference(rng);
    } else {
        m.s = rrc_->apply(random_symbols(rrc_->cols(), soi_c_, rng, &m.bits_s));
        const CVec sym = random_symbols(ofdm0_->cols(), ofdm_spec_.constellation, rng, nullptr);
        const auto imp = sig::random_impairment(ofdm0_->apply(sym), ofdm_spec_.symbol_len(), rng);
        m.b = imp.x;
        m.offset = imp.offset;
        m.phase = imp.phase;
    }
    m.y = sig::mix(m.s, m.b, kappa);
    return m;
}

sig::Bits Scenario::decode_soi(const CVec& s_hat) const {
    if (is_toy()) return sig::decide(s_hat.real().cast<cplx>(), sig::Constellation::bpsk()).bits;
    return sig::matched_filter_demod(s_hat, rrc_->pulse(), p_.tau, soi_c_).bits;
}

CVec Scenario::mf_estimate(const CVec& y) const {
    if (is_toy()) return sig::decide(y.real().cast<cplx>(), sig::Constellation::bpsk()).symbols;
    return rrc_->apply(sig::matched_filter_demod(y, rrc_->pulse(), p_.tau, soi_c_).symbols);
}

CVec Scenario::init_theta(const CVec& y, double kappa) const {
    if (is_toy()) return y / (1.0 + kappa);
    return mf_estimate(y);
}

score::ScorePtr Scenario::interference_score(const MixtureDraw& m) const {
    if (is_toy()) return toy_b_score_;
    auto H = std::make_shared<score::OfdmTransform>(ofdm_spec_, p_.d, m.offset, m.phase);
    return std::make_shared<score::TransformScore>(b_symbol_score_, H);
}

baseline::CovOracle Scenario::covariance(int M, std::uint64_t seed, bool empirical) const {
    baseline::CovOracle c;
    if (is_toy()) {
        c.C_ss = CMat::Identity(p_.d_toy, p_.d_toy);
        c.C_bb = CMat::Identity(p_.d_toy, p_.d_toy);
        return c;
    }
    c.C_ss = baseline::transform_cov(*rrc_);
    if (!empirical) {
        c.C_bb = baseline::shifted_transform_cov(*ofdm0_, ofdm_spec_.symbol_len());
        return c;
    }
    Rng rng(seed);
    c.C_bb = baseline::estimate_cov([this](Rng& r) { return sample_interference(r); }, M, rng);
    return c;
}

sep::SepConfig Scenario::default_sep() const {
    sep::SepConfig c;
    if (is_toy()) {
        c.N = 5000;
        c.eta_max = 2e-4;
        c.eta_min = 1e-6;
        c.t_lo = 1;
        c.t_hi = 50;
    } else {
        c.N = 2000;
        c.eta_max = 5e-3;
        c.eta_min = 1e-6;
        c.t_lo = 2;
        c.t_hi = 50;
    }
    return c;
}

double Scenario::default_basis_lr(baseline::BasisVariant v) const {
    if (is_toy()) return 5e-3;
    return v == baseline::BasisVariant::original ? 2e-8 : 2e-6;
}

}  // namespace rfsep::eval
