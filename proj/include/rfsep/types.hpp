#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rfsep {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// real-field sources live in the real parts; imaginary parts stay zero
enum class Field { real, complex };

// thrown for NaN/inf or divergence; validation errors use std::invalid_argument
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// independent stream per (master, a, b); same inputs give the same stream
inline Rng make_rng(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

// one smoothing level: x~ = gamma*x + sigma*z, sigma2 = 1 - alpha_bar
struct Level {
    double gamma = 1.0;
    double sigma2 = 0.0;
    double sigma() const { return std::sqrt(sigma2); }
};

}  // namespace rfsep
