#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include <nullgauge/compiled.hpp>
#include <nullgauge/kernels.hpp>
#include <nullgauge/parse.hpp>

using namespace nullgauge;

namespace
{

bool bitwise_equal(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

TEST_SUITE("kernels")
{

TEST_CASE("serial and parallel point evaluation are bitwise identical")
{
    const CompiledExpr program(parse("sin(x)*xdot + t^2/(1 + x^2) + log(xdot)"));
    const auto width = program.slots().size();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> points(width * 20000);
    for (auto &p : points) {
        p = u(rng);
    }
    const auto s = kernels::evaluate_points_serial(program, points, {});
    const auto p = kernels::evaluate_points_parallel(program, points, {});
    REQUIRE(s.size() == 20000);
    REQUIRE(p.size() == s.size());
    std::size_t nan_count = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        nan_count += std::isnan(s[i]) ? 1 : 0;
        CHECK(bitwise_equal(s[i], p[i]));
    }
    // log of a negative xdot is reported as NaN, not thrown.
    CHECK(nan_count > 0);
    CHECK(kernels::max_abs_serial(s) == kernels::max_abs_parallel(p));
}

TEST_CASE("max_abs")
{
    const std::vector<double> v{1.0, -7.5, 3.0};
    CHECK(kernels::max_abs_serial(v) == 7.5);
    CHECK(kernels::max_abs_parallel(v) == 7.5);
    CHECK(kernels::max_abs_serial({}) == 0.0);
}

TEST_CASE("simpson is exact for cubics and parallel matches serial")
{
    for (std::size_t n : {2u, 3u, 4u, 5u, 101u, 10000u, 12345u}) {
        const double h = 2.0 / static_cast<double>(n);
        std::vector<double> f(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = h * static_cast<double>(i);
            f[i] = t * t * t - 2 * t + 1;
        }
        const double exact = 4.0 - 4.0 + 2.0;
        const double s = kernels::simpson_serial(f, h);
        const double p = kernels::simpson_parallel(f, h);
        INFO(n);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
        CHECK(bitwise_equal(s, p));
    }
    CHECK_THROWS(kernels::simpson_serial(std::vector<double>{1.0, 2.0}, 0.1));
}

TEST_CASE("simpson converges at fourth order")
{
    auto integrate = [](std::size_t n) {
        const double h = 1.0 / static_cast<double>(n);
        std::vector<double> f(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            f[i] = std::exp(h * static_cast<double>(i));
        }
        return kernels::simpson_parallel(f, h);
    };
    const double exact = std::exp(1.0) - 1.0;
    const double ratio = std::abs(integrate(16) - exact) / std::abs(integrate(32) - exact);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("thread count")
{
    CHECK(kernels::max_threads() >= 1);
}

}
