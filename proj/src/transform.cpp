#include "rfsep/transform.hpp"

#include <cmath>
#include <numbers>

namespace rfsep::score {

CVec IdentityTransform::apply(const CVec& a) const {
    require(a.size() == n_, "identity transform: length mismatch");
    return a;
}
CVec IdentityTransform::adjoint(const CVec& x) const { return apply(x); }
CVec IdentityTransform::pinv(const CVec& x) const { return apply(x); }

RrcTransform::RrcTransform(sig::PulseShape p, int tau, int d)
    : p_(std::move(p)), tau_(tau), d_(d), P_(sig::sc_symbol_count(d, tau, p_.sps)) {
    // columns are shifted copies of the taps; G is banded
    const int L = static_cast<int>(p_.taps.size());
    const int half = p_.half();
    const double g2 = static_cast<double>(p_.sps);
    gram_ = RMat::Zero(P_, P_);
    for (int a = 0; a < P_; ++a) {
        const int ca = tau_ + a * p_.sps;
        for (int b = a; b < P_; ++b) {
            const int cb = tau_ + b * p_.sps;
            if (cb - ca >= L) break;
            const int lo = std::max({0, ca - half, cb - half});
            const int hi = std::min({d_ - 1, ca - half + L - 1, cb - half + L - 1});
            double acc = 0.0;
            for (int n = lo; n <= hi; ++n) acc += p_.taps[n - ca + half] * p_.taps[n - cb + half];
            gram_(a, b) = gram_(b, a) = g2 * acc;
        }
    }
    gram_llt_.compute(gram_);
    require(gram_llt_.info() == Eigen::Success, "rrc transform: Gram matrix not positive definite");
}

CVec RrcTransform::apply(const CVec& a) const { return sig::modulate_sc(a, p_, tau_, d_); }

CVec RrcTransform::adjoint(const CVec& x) const {
    require(x.size() == d_, "rrc transform: waveform length mismatch");
    // matched_filter divides by sqrt(sps); H^H carries sqrt(sps)
    return sig::matched_filter(x, p_, tau_) * static_cast<double>(p_.sps);
}

CVec RrcTransform::pinv(const CVec& x) const {
    CVec r = adjoint(x);
    Eigen::MatrixX2d ri(P_, 2);
    ri.col(0) = r.real();
    ri.col(1) = r.imag();
    gram_llt_.solveInPlace(ri);
    CVec out(P_);
    out.real() = ri.col(0);
    out.imag() = ri.col(1);
    return out;
}

OfdmTransform::OfdmTransform(sig::OfdmSpec spec, int d, int offset, double phase)
    : spec_(std::move(spec)), d_(d), offset_(offset), phase_(phase) {
    spec_.validate();
    nsym_ = sig::ofdm_symbol_count(d_, spec_);
    const int K = spec_.n_active();
    const int S = spec_.symbol_len();
    const int L = spec_.fft_size;
    // A = modulate_ofdm applied to unit vectors of one block
    A_.resize(S, K);
    const double norm = 1.0 / std::sqrt(static_cast<double>(K));
    for (int i = 0; i < S; ++i) {
        const int n = i < spec_.cp_len ? i + L - spec_.cp_len : i - spec_.cp_len;
        for (int k = 0; k < K; ++k) {
            const double ang = 2.0 * std::numbers::pi * ((static_cast<long>(spec_.active[k]) * n) % L) / L;
            A_(i, k) = cplx(std::cos(ang), std::sin(ang)) * norm;
        }
    }
    Ah_ = A_.adjoint();
    const CMat G = Ah_ * A_;
    Eigen::LLT<CMat> llt(G);
    require(llt.info() == Eigen::Success, "ofdm transform: block Gram not positive definite");
    Apinv_ = llt.solve(Ah_);
}

CVec OfdmTransform::blockwise(const CMat& M, const CVec& in, Eigen::Index in_len, Eigen::Index out_len) const {
    CVec out(out_len * nsym_);
    for (int m = 0; m < nsym_; ++m) out.segment(m * out_len, out_len).noalias() = M * in.segment(m * in_len, in_len);
    return out;
}

CVec OfdmTransform::apply(const CVec& a) const {
    require(a.size() == cols(), "ofdm transform: symbol length mismatch");
    const CVec x = blockwise(A_, a, spec_.n_active(), spec_.symbol_len());
    return sig::apply_impairment(x, offset_, phase_);
}

CVec OfdmTransform::adjoint(const CVec& x) const {
    require(x.size() == d_, "ofdm transform: waveform length mismatch");
    const CVec u = sig::remove_impairment(x, offset_, phase_);
    return blockwise(Ah_, u, spec_.symbol_len(), spec_.n_active());
}

CVec OfdmTransform::pinv(const CVec& x) const {
    require(x.size() == d_, "ofdm transform: waveform length mismatch");
    const CVec u = sig::remove_impairment(x, offset_, phase_);
    return blockwise(Apinv_, u, spec_.symbol_len(), spec_.n_active());
}

}  // namespace rfsep::score
