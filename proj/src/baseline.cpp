#include <cstdio>
#include <fstream>
#include <iostream>

#include "rfsep/baseline.hpp"

namespace rfsep::baseline {

namespace {
void validate_pair(const CMat& C_ss, const CMat& C_bb, double tol) {
    for (const CMat* C : {&C_ss, &C_bb}) {
        require(C->rows() == C->cols() && C->rows() > 0, "cov: covariance must be square and nonempty");
        const double scale = std::max(1.0, C->cwiseAbs().maxCoeff());
        require((*C - C->adjoint()).cwiseAbs().maxCoeff() <= tol * scale, "cov: covariance not Hermitian");
    }
    require(C_ss.rows() == C_bb.rows(), "cov: C_ss and C_bb sizes differ");
}
}  // namespace

void CovOracle::validate(double tol) const { validate_pair(C_ss, C_bb, tol); }

Lmmse::Lmmse(const CovOracle& cov, double kappa) : Lmmse(std::make_shared<const CMat>(cov.C_ss), cov.C_bb, kappa) {}

Lmmse::Lmmse(std::shared_ptr<const CMat> C_ss, const CMat& C_bb, double kappa) : Css_(std::move(C_ss)) {
    require(Css_ != nullptr, "lmmse: null C_ss");
    validate_pair(*Css_, C_bb, 1e-8);
    require(kappa >= 0.0 && std::isfinite(kappa), "lmmse: kappa must be finite and >= 0");
    const Eigen::Index d = Css_->rows();
    CMat Cyy = *Css_ + (kappa * kappa) * C_bb;
    Cyy = 0.5 * (Cyy + Cyy.adjoint()).eval();
    eps_ = 1e-9 * Cyy.trace().real() / static_cast<double>(d);
    if (!(eps_ > 0.0)) eps_ = 1e-300;
    Cyy.diagonal().array() += eps_;
    llt_.compute(Cyy);
    if (llt_.info() != Eigen::Success) throw NumericalError("lmmse: C_ss + kappa^2 C_bb is not positive definite");
}

CVec Lmmse::apply(const CVec& y) const {
    require(y.size() == Css_->rows(), "lmmse: input length mismatch");
    return *Css_ * llt_.solve(y);
}

CMat Lmmse::weight_matrix() const {
    return *Css_ * llt_.solve(CMat::Identity(Css_->rows(), Css_->rows()));
}

CVec lmmse(const CVec& y, const CovOracle& cov, double kappa) { return Lmmse(cov, kappa).apply(y); }

CMat estimate_cov(const Sampler& sampler, int M, Rng& rng) {
    require(M >= 1, "estimate_cov: M must be >= 1");
    CVec first = sampler(rng);
    const Eigen::Index d = first.size();
    require(d > 0, "estimate_cov: empty sample");
    if (M < d)
        std::cerr << "warning: estimate_cov with M=" << M << " < d=" << d << " gives a rank-deficient estimate\n";
    CMat acc = CMat::Zero(d, d);
    constexpr int kChunk = 64;
    CMat X(d, kChunk);
    int filled = 0;
    auto flush = [&]() {
        if (filled == 0) return;
        acc.selfadjointView<Eigen::Lower>().rankUpdate(X.leftCols(filled));
        filled = 0;
    };
    for (int m = 0; m < M; ++m) {
        CVec x = m == 0 ? std::move(first) : sampler(rng);
        require(x.size() == d, "estimate_cov: sampler changed length");
        X.col(filled++) = x;
        if (filled == kChunk) flush();
    }
    flush();
    CMat C = acc.selfadjointView<Eigen::Lower>();
    C /= static_cast<double>(M);
    return 0.5 * (C + C.adjoint());
}

CMat transform_cov(const score::LinearTransform& H) {
    const Eigen::Index P = H.cols();
    CMat Hm(H.rows(), P);
    CVec e = CVec::Zero(P);
    for (Eigen::Index p = 0; p < P; ++p) {
        e[p] = 1.0;
        Hm.col(p) = H.apply(e);
        e[p] = 0.0;
    }
    CMat C = Hm * Hm.adjoint();
    return 0.5 * (C + C.adjoint());
}

CMat shifted_transform_cov(const score::LinearTransform& H, int L) {
    const Eigen::Index d = H.rows();
    require(L >= 1 && L <= d, "shifted_transform_cov: need 1 <= L <= d");
    auto wrap = [d](Eigen::Index i) { return ((i % d) + d) % d; };
    CMat C(d, d);
    if (d % L != 0) {
        const CMat C0 = transform_cov(H);
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index i = 0; i < d; ++i) {
                cplx acc = 0.0;
                for (int o = 0; o < L; ++o) acc += C0(wrap(i - o), wrap(j - o));
                C(i, j) = acc / static_cast<double>(L);
            }
        return C;
    }
    // c[k] = E[x_k conj(x_0)] = (1/L) sum_o C0(k-o, -o); column -o of C0 is H H^H e_{-o}
    CVec c = CVec::Zero(d);
    CVec e = CVec::Zero(d);
    for (int o = 0; o < L; ++o) {
        const Eigen::Index j = wrap(-o);
        e[j] = 1.0;
        const CVec col = H.apply(H.adjoint(e));
        e[j] = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) c[k] += col[wrap(k - o)];
    }
    c /= static_cast<double>(L);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) C(i, j) = c[wrap(i - j)];
    return 0.5 * (C + C.adjoint());
}

void write_cov_bin(const std::string& path, const CMat& C, bool complex_entries) {
    require(C.rows() == C.cols(), "write_cov_bin: matrix must be square");
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    const std::uint64_t hdr[2] = {static_cast<std::uint64_t>(C.rows()), complex_entries ? 1u : 0u};
    f.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    for (Eigen::Index r = 0; r < C.rows(); ++r)
        for (Eigen::Index c = 0; c < C.cols(); ++c) {
            const double v[2] = {C(r, c).real(), C(r, c).imag()};
            f.write(reinterpret_cast<const char*>(v), complex_entries ? 16 : 8);
        }
}

CMat read_cov_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    require(static_cast<bool>(f), "cannot open covariance file: " + path);
    const auto bytes = static_cast<std::uint64_t>(f.tellg());
    require(bytes >= 16, path + ": missing header");
    f.seekg(0);
    std::uint64_t hdr[2];
    f.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    const std::uint64_t d = hdr[0];
    require((hdr[1] & ~std::uint64_t{1}) == 0, path + ": unknown flag bits");
    const bool cx = hdr[1] & 1u;
    const std::uint64_t width = cx ? 16 : 8;
    require(d > 0 && d < (1u << 20) && bytes == 16 + d * d * width, path + ": size does not match header");
    CMat C(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < C.rows(); ++r)
        for (Eigen::Index c = 0; c < C.cols(); ++c) {
            double v[2] = {0.0, 0.0};
            f.read(reinterpret_cast<char*>(v), static_cast<std::streamsize>(width));
            C(r, c) = cplx(v[0], v[1]);
        }
    return C;
}

}  // namespace rfsep::baseline
