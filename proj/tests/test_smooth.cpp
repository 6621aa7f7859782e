#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "rfsep/schedule.hpp"

using namespace rfsep;
using namespace rfsep::smooth;

TEST_CASE("schedule values") {
    const auto s = build_schedule(1e-4, 0.05, 50);
    CHECK(s.T == 50);
    CHECK(1.0 - s.alpha_bar[0] == doctest::Approx(1e-4).epsilon(1e-12));
    // independent cumulative-product evaluation
    CHECK(s.sigma2(2) == doctest::Approx(1.2182555102041581e-3).epsilon(1e-9));
    CHECK(s.sigma2(50) == doctest::Approx(0.720327499807116).epsilon(1e-9));
    CHECK(s.sigma2(50) >= 0.71);
    CHECK(s.sigma2(50) <= 0.73);
    for (int t = 1; t <= 50; ++t) {
        CHECK(std::abs(s.gamma(t) * s.gamma(t) + s.sigma2(t) - 1.0) < 1e-12);
        if (t > 1) {
            CHECK(s.beta[t - 1] > s.beta[t - 2]);
            CHECK(s.alpha_bar[t - 1] < s.alpha_bar[t - 2]);
        }
    }
    CHECK_THROWS_AS(s.level(0), std::invalid_argument);
    CHECK_THROWS_AS(s.level(51), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(0.1, 0.05, 50), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(1e-4, 1.0, 50), std::invalid_argument);
}

TEST_CASE("smoothing") {
    Rng rng(1);
    const CVec x = draw_noise(1000, Field::complex, rng);
    const CVec z = draw_noise(1000, Field::complex, rng);
    CHECK(smooth::smooth(x, Level{1.0, 0.0}, z) == x);
    CHECK(smooth::smooth(CVec::Zero(1000), Level{0.6, 0.64}, z) == CVec(0.8 * z));
}

TEST_CASE("noise statistics and variance bookkeeping") {
    Rng rng(2);
    const auto s = build_schedule(1e-4, 0.05, 50);
    const int n = 200000;
    const CVec zc = draw_noise(n, Field::complex, rng);
    CHECK(zc.real().squaredNorm() / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(zc.imag().squaredNorm() / n == doctest::Approx(0.5).epsilon(0.02));
    const CVec zr = draw_noise(n, Field::real, rng);
    CHECK(zr.imag().norm() == 0.0);
    CHECK(zr.squaredNorm() / n == doctest::Approx(1.0).epsilon(0.02));
    const CVec x = 2.0 * draw_noise(n, Field::complex, rng);
    const CVec xs = smooth::smooth(x, 30, zc, s);
    const double expect = s.gamma(30) * s.gamma(30) * x.squaredNorm() / n + s.sigma2(30) * zc.squaredNorm() / n;
    CHECK(xs.squaredNorm() / n == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("schedule csv round trip") {
    const auto s = build_schedule(1e-4, 0.05, 50);
    const auto p = (std::filesystem::temp_directory_path() / "rfsep_sched.csv").string();
    write_schedule_csv(p, s);
    const auto r = read_schedule_csv(p);
    CHECK(r.beta == s.beta);
    CHECK(r.alpha_bar == s.alpha_bar);
}

TEST_CASE("schedule matches the independently computed fixture") {
    const auto f = read_schedule_csv(std::string(RFSEP_FIXTURE_DIR) + "/schedule/schedule.csv");
    const auto s = build_schedule(1e-4, 0.05, 50);
    REQUIRE(f.T == s.T);
    for (int i = 0; i < s.T; ++i) {
        CHECK(std::abs(s.beta[i] - f.beta[i]) <= 1e-15);
        CHECK(std::abs(s.alpha_bar[i] - f.alpha_bar[i]) <= 1e-13 * f.alpha_bar[i]);
    }
}
