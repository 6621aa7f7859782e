#pragma once

#include <memory>

#include <Eigen/Cholesky>

#include "rfsep/sig.hpp"

namespace rfsep::score {

// symbol domain (cols) -> waveform domain (rows)
class LinearTransform {
public:
    virtual ~LinearTransform() = default;
    virtual Eigen::Index rows() const = 0;
    virtual Eigen::Index cols() const = 0;
    virtual CVec apply(const CVec& a) const = 0;
    virtual CVec adjoint(const CVec& x) const = 0;
    virtual CVec pinv(const CVec& x) const = 0;
};

class IdentityTransform final : public LinearTransform {
public:
    explicit IdentityTransform(Eigen::Index n) : n_(n) {}
    Eigen::Index rows() const override { return n_; }
    Eigen::Index cols() const override { return n_; }
    CVec apply(const CVec& a) const override;
    CVec adjoint(const CVec& x) const override;
    CVec pinv(const CVec& x) const override;

private:
    Eigen::Index n_;
};

// H: upsample by sps, filter with sqrt(sps)*taps; pinv = (H^H H)^{-1} H^H
class RrcTransform final : public LinearTransform {
public:
    RrcTransform(sig::PulseShape p, int tau, int d);
    Eigen::Index rows() const override { return d_; }
    Eigen::Index cols() const override { return P_; }
    CVec apply(const CVec& a) const override;
    CVec adjoint(const CVec& x) const override;
    CVec pinv(const CVec& x) const override;
    const RMat& gram() const { return gram_; }
    const sig::PulseShape& pulse() const { return p_; }
    int tau() const { return tau_; }

private:
    sig::PulseShape p_;
    int tau_;
    int d_;
    int P_;
    RMat gram_;
    Eigen::LLT<RMat> gram_llt_;
};

// per block: CP + IDFT (A, S x K), then circular shift and phase rotation
class OfdmTransform final : public LinearTransform {
public:
    OfdmTransform(sig::OfdmSpec spec, int d, int offset = 0, double phase = 0.0);
    Eigen::Index rows() const override { return d_; }
    Eigen::Index cols() const override { return static_cast<Eigen::Index>(nsym_) * spec_.n_active(); }
    CVec apply(const CVec& a) const override;
    CVec adjoint(const CVec& x) const override;
    CVec pinv(const CVec& x) const override;
    const CMat& block() const { return A_; }

private:
    CVec blockwise(const CMat& M, const CVec& in, Eigen::Index in_len, Eigen::Index out_len) const;

    sig::OfdmSpec spec_;
    int d_;
    int nsym_;
    int offset_;
    double phase_;
    CMat A_;
    CMat Ah_;
    CMat Apinv_;
};

}  // namespace rfsep::score
