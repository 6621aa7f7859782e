#pragma once

#include <memory>
#include <string>

#include "rfsep/baseline.hpp"
#include "rfsep/score.hpp"
#include "rfsep/sep.hpp"
#include "rfsep/sig.hpp"

namespace rfsep::eval {

enum class MixtureKind { qpsk_ofdm_bpsk, qpsk_ofdm_qpsk, scalar_toy };
MixtureKind mixture_from_string(const std::string& s);
std::string to_string(MixtureKind k);

struct SignalParams {
    int d = 2560;
    int tau = 8;
    double rolloff = 0.5;
    int span = 8;
    int sps = 16;
    int d_toy = 400;
    void validate() const;
};

struct MixtureDraw {
    CVec s, b, y;
    sig::Bits bits_s;
    int offset = 0;
    double phase = 0.0;
    double kappa = 0.0;
};

// Synthesis, priors and decoding for one mixture family.
// RF: RRC-QPSK SOI (tau, sps) + OFDM interference with random offset/phase.
// Toy: i.i.d. real BPSK SOI + uniform {+-6,+-2}/sqrt(20) interference.
class Scenario {
public:
    Scenario(MixtureKind kind, SignalParams params);

    MixtureKind kind() const { return kind_; }
    bool is_toy() const { return kind_ == MixtureKind::scalar_toy; }
    Eigen::Index dim() const;

    MixtureDraw draw(double kappa, Rng& rng) const;
    CVec sample_interference(Rng& rng) const;

    sig::Bits decode_soi(const CVec& s_hat) const;
    // RF: MF-decided symbols re-modulated through H; toy: sign(y)
    CVec mf_estimate(const CVec& y) const;
    CVec init_theta(const CVec& y, double kappa) const;

    score::ScorePtr soi_score() const { return soi_score_; }
    // OFDM prior with the realization's offset and phase known
    score::ScorePtr interference_score(const MixtureDraw& m) const;

    // RF: C_ss = H H^H; C_bb exact under the random offset/phase model, or
    // estimated from M samples when empirical; toy: identities
    baseline::CovOracle covariance(int M, std::uint64_t seed, bool empirical = false) const;

    // kind-specific defaults for the iterative methods
    sep::SepConfig default_sep() const;
    double default_basis_lr(baseline::BasisVariant v) const;

    const std::shared_ptr<const score::RrcTransform>& rrc() const { return rrc_; }
    const sig::OfdmSpec& ofdm_spec() const { return ofdm_spec_; }

private:
    MixtureKind kind_;
    SignalParams p_;
    sig::Constellation soi_c_ = sig::Constellation::qpsk();
    sig::OfdmSpec ofdm_spec_;
    std::shared_ptr<const score::RrcTransform> rrc_;
    std::shared_ptr<const score::OfdmTransform> ofdm0_;
    score::ScorePtr soi_score_;
    score::ScorePtr b_symbol_score_;
    score::ScorePtr toy_b_score_;
};

std::vector<cplx> toy_interference_atoms();

}  // namespace rfsep::eval
