#include <nullgauge/kernels.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace nullgauge::kernels
{

namespace
{

double eval_row(const CompiledExpr &program, std::span<const double> row, std::span<const TimeFunction> fns)
{
    try {
        return program.run(row, fns);
    } catch (const std::exception &) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::size_t row_count(const CompiledExpr &program, std::span<const double> points)
{
    const auto stride = program.slots().size();
    if (stride == 0) {
        return points.size();
    }
    if (points.size() % stride != 0) {
        throw std::invalid_argument("points size is not a multiple of the slot count");
    }
    return points.size() / stride;
}

double simpson_weight(std::size_t i, std::size_t n_simpson)
{
    if (i == 0 || i == n_simpson) {
        return 1.0;
    }
    return (i % 2 == 1) ? 4.0 : 2.0;
}

// Both Simpson kernels sum fixed-size blocks and then add the block sums in
// order, so the result does not depend on the thread count.
constexpr std::size_t simpson_block = 4096;

double block_sum(std::span<const double> f, std::size_t begin, std::size_t end, std::size_t n_simpson)
{
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        s += simpson_weight(i, n_simpson) * f[i];
    }
    return s;
}

void check_simpson(std::span<const double> f)
{
    if (f.size() < 3) {
        throw std::invalid_argument("Simpson quadrature needs at least two intervals");
    }
}

double three_eighths_tail(std::span<const double> f, double h)
{
    const auto n = f.size() - 1;
    return 3.0 * h / 8.0 * (f[n - 3] + 3.0 * f[n - 2] + 3.0 * f[n - 1] + f[n]);
}

} // namespace

std::vector<double> evaluate_points_serial(const CompiledExpr &program, std::span<const double> points,
                                           std::span<const TimeFunction> fns)
{
    const auto stride = program.slots().size();
    const auto n = row_count(program, points);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = eval_row(program, points.subspan(i * stride, stride), fns);
    }
    return out;
}

std::vector<double> evaluate_points_parallel(const CompiledExpr &program, std::span<const double> points,
                                             std::span<const TimeFunction> fns)
{
    const auto stride = program.slots().size();
    const auto n = static_cast<long long>(row_count(program, points));
    std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = eval_row(program, points.subspan(k * stride, stride), fns);
    }
    return out;
}

double max_abs_serial(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        if (!std::isnan(x)) {
            m = std::max(m, std::abs(x));
        }
    }
    return m;
}

double max_abs_parallel(std::span<const double> v)
{
    double m = 0.0;
    const auto n = static_cast<long long>(v.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long long i = 0; i < n; ++i) {
        const double x = v[static_cast<std::size_t>(i)];
        if (!std::isnan(x)) {
            m = std::max(m, std::abs(x));
        }
    }
    return m;
}

double simpson_serial(std::span<const double> f, double h)
{
    check_simpson(f);
    const auto n = f.size() - 1;
    const auto n_simpson = (n % 2 == 0) ? n : n - 3;
    double sum = 0.0;
    for (std::size_t begin = 0; begin <= n_simpson; begin += simpson_block) {
        sum += block_sum(f, begin, std::min(begin + simpson_block, n_simpson + 1), n_simpson);
    }
    double total = n_simpson > 0 ? sum * h / 3.0 : 0.0;
    if (n_simpson != n) {
        total += three_eighths_tail(f, h);
    }
    return total;
}

double simpson_parallel(std::span<const double> f, double h)
{
    check_simpson(f);
    const auto n = f.size() - 1;
    const auto n_simpson = (n % 2 == 0) ? n : n - 3;
    const auto blocks = static_cast<long long>((n_simpson + 1 + simpson_block - 1) / simpson_block);
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < blocks; ++b) {
        const auto begin = static_cast<std::size_t>(b) * simpson_block;
        partial[static_cast<std::size_t>(b)] =
            block_sum(f, begin, std::min(begin + simpson_block, n_simpson + 1), n_simpson);
    }
    double sum = 0.0;
    for (double s : partial) {
        sum += s;
    }
    double total = n_simpson > 0 ? sum * h / 3.0 : 0.0;
    if (n_simpson != n) {
        total += three_eighths_tail(f, h);
    }
    return total;
}

int max_threads()
{
    return omp_get_max_threads();
}

} // namespace nullgauge::kernels
