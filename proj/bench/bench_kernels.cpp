// Serial reference vs OpenMP kernels: posterior means, a full score evaluation and the landscape sweep.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "rfsep/kernels.hpp"
#include "rfsep/schedule.hpp"
#include "rfsep/score_check.hpp"
#include "rfsep/sep.hpp"

using namespace rfsep;

namespace {

CVec input(Eigen::Index n) {
    Rng rng(1);
    return 1.5 * smooth::draw_noise(n, Field::complex, rng);
}

const Level kLevel{std::sqrt(0.7), 0.3};

template <void (*F)(const CVec&, const kernels::DiscretePrior&, const Level&, CVec&)>
void BM_discrete(benchmark::State& st) {
    const CVec x = input(st.range(0));
    const kernels::DiscretePrior p{{cplx(6, 0), cplx(-6, 0), cplx(2, 0), cplx(-2, 0)},
                                   std::vector<double>(4, std::log(0.25)),
                                   Field::real};
    CVec out(x.size());
    for (auto _ : st) {
        F(x, p, kLevel, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * x.size());
}

template <void (*F)(const CVec&, const kernels::AntipodalPrior&, const Level&, CVec&)>
void BM_antipodal(benchmark::State& st) {
    const CVec x = input(st.range(0));
    const kernels::AntipodalPrior p{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), Field::complex};
    CVec out(x.size());
    for (auto _ : st) {
        F(x, p, kLevel, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * x.size());
}

template <void (*F)(const CVec&, const kernels::GmmPrior&, const Level&, CVec&)>
void BM_gmm(benchmark::State& st) {
    const CVec x = input(st.range(0)).real().cast<cplx>();
    const auto g = score::landscape_gmm4();
    kernels::GmmPrior p{{}, g.means, g.vars};
    for (double w : g.weights) p.log_w.push_back(std::log(w));
    CVec out(x.size());
    for (auto _ : st) {
        F(x, p, kLevel, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * x.size());
}

template <bool Parallel>
void BM_landscape(benchmark::State& st) {
    const auto sched = smooth::build_schedule(1e-4, 0.05, 50);
    const score::FdOracle bpsk(score::ScalarSource::uniform_atoms({1.0, -1.0}, Field::real));
    sep::LandscapeSpec ls;
    for (int i = 0; i <= 400; ++i) ls.theta_grid.push_back(-2.0 + 0.01 * i);
    for (int t = 1; t <= 50; ++t) ls.levels.push_back(t);
    ls.mc_draws = 64;
    for (auto _ : st) {
        auto c = Parallel ? sep::landscape_1d(ls, bpsk, nullptr, sched) : sep::landscape_1d_serial(ls, bpsk, nullptr, sched);
        benchmark::DoNotOptimize(c.averaged.data());
    }
}

}  // namespace

BENCHMARK(BM_discrete<kernels::discrete_pm_serial>)->Name("discrete_pm/serial")->Arg(2560)->Arg(1 << 16);
BENCHMARK(BM_discrete<kernels::discrete_pm_omp>)->Name("discrete_pm/omp")->Arg(2560)->Arg(1 << 16);
BENCHMARK(BM_antipodal<kernels::antipodal_pm_serial>)->Name("antipodal_pm/serial")->Arg(2560)->Arg(1 << 16);
BENCHMARK(BM_antipodal<kernels::antipodal_pm_omp>)->Name("antipodal_pm/omp")->Arg(2560)->Arg(1 << 16);
BENCHMARK(BM_gmm<kernels::gmm_pm_serial>)->Name("gmm_pm/serial")->Arg(2560)->Arg(1 << 16);
BENCHMARK(BM_gmm<kernels::gmm_pm_omp>)->Name("gmm_pm/omp")->Arg(2560)->Arg(1 << 16);
BENCHMARK(BM_landscape<false>)->Name("landscape_bpsk/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_landscape<true>)->Name("landscape_bpsk/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
