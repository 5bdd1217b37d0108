// Serial vs OpenMP timings for the batch kernels and the force sweep.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <nullgauge/compiled.hpp>
#include <nullgauge/forcedyn.hpp>
#include <nullgauge/kernels.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/variational.hpp>

using namespace nullgauge;

namespace
{

template <class F> double seconds(F &&f, int reps = 3)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
        best = std::min(best, d.count());
    }
    return best;
}

void report(const char *name, double serial, double parallel)
{
    std::printf("%-18s serial %9.4f s  parallel %9.4f s  speedup %5.2fx\n", name, serial, parallel, serial / parallel);
}

} // namespace

int main()
{
    std::printf("threads: %d\n", kernels::max_threads());

    const Lagrangian L(parse("xdot^2/2 + sin(x*t) - x^2*t + f1(t)*x*xdot"));
    const CompiledExpr program(euler_lagrange_raw(L));
    std::mt19937_64 rng(7);
    std::vector<TimeFunction> fns;
    for (std::size_t i = 0; i < program.functions().size(); ++i) {
        fns.push_back(random_time_function(rng));
    }
    const std::size_t n = 2'000'000;
    const auto stride = program.slots().size();
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> points(n * stride);
    for (auto &p : points) {
        p = u(rng);
    }
    std::vector<double> out;
    report("evaluate_points", seconds([&] { out = kernels::evaluate_points_serial(program, points, fns); }),
           seconds([&] { out = kernels::evaluate_points_parallel(program, points, fns); }));

    std::vector<double> f(20'000'001);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = std::sin(1e-6 * static_cast<double>(i));
    }
    volatile double sink = 0.0;
    report("simpson", seconds([&] { sink = kernels::simpson_serial(f, 1e-6); }),
           seconds([&] { sink = kernels::simpson_parallel(f, 1e-6); }));
    report("max_abs", seconds([&] { sink = kernels::max_abs_serial(f); }),
           seconds([&] { sink = kernels::max_abs_parallel(f); }));

    const auto frame = Frame::numeric(1, 2, 0.5, 1, 4);
    std::vector<ForceLaw> laws;
    for (int k = 1; k <= 32; ++k) {
        laws.push_back(derive_force(frame, parse(std::to_string(k) + "*t + sin(t)")));
    }
    report("integrate_sweep", seconds([&] { integrate_sweep_serial(laws, 1.0, 0.5, 0.0, 4.0, 1e-4); }, 1),
           seconds([&] { integrate_sweep_parallel(laws, 1.0, 0.5, 0.0, 4.0, 1e-4); }, 1));
    (void)sink;
    return 0;
}
