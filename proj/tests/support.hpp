#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <nullgauge/evaluate.hpp>
#include <nullgauge/expr.hpp>

namespace testsupport
{

using nullgauge::Expr;

// Random smooth expressions over a fixed symbol set. Denominators are kept
// away from zero and log arguments positive so every draw evaluates.
class ExprGen
{
public:
    explicit ExprGen(std::uint64_t seed, std::vector<std::string> symbols = {"x", "xdot", "t", "a", "b"})
        : rng_(seed), symbols_(std::move(symbols))
    {
    }

    Expr operator()(int depth)
    {
        using namespace nullgauge;
        if (depth <= 0 || pick(4) == 0) {
            return leaf();
        }
        switch (pick(9)) {
        case 0:
        case 1:
            return (*this)(depth - 1) + (*this)(depth - 1);
        case 2:
            return (*this)(depth - 1) - (*this)(depth - 1);
        case 3:
        case 4:
            return (*this)(depth - 1) * (*this)(depth - 1);
        case 5:
            return (*this)(depth - 1) / positive(depth - 1);
        case 6:
            return pow((*this)(depth - 1), num(static_cast<long long>(pick(3) + 1)));
        case 7:
            return pick(2) == 0 ? sin((*this)(depth - 1)) : cos((*this)(depth - 1));
        default:
            return pick(2) == 0 ? exp(bounded(depth - 1)) : log(positive(depth - 1));
        }
    }

    Expr leaf()
    {
        using namespace nullgauge;
        if (pick(3) == 0) {
            return num(static_cast<long long>(pick(13)) - 6, 2 * static_cast<long long>(pick(2) + 1));
        }
        return sym(symbols_[pick(symbols_.size())]);
    }

    // 1 + e^2, bounded below by one.
    Expr positive(int depth)
    {
        using namespace nullgauge;
        return num(1) + pow((*this)(depth), num(2));
    }

    Expr bounded(int depth)
    {
        using namespace nullgauge;
        return sin((*this)(depth));
    }

    nullgauge::Bindings bindings(double range = 1.5)
    {
        std::uniform_real_distribution<double> u(-range, range);
        nullgauge::Bindings b;
        for (const auto &s : symbols_) {
            b.values[s] = u(rng_);
        }
        return b;
    }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::mt19937_64 &rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::vector<std::string> symbols_;
};

inline bool close(double a, double b, double rel, double abs = 0.0)
{
    return std::abs(a - b) <= abs + rel * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace testsupport

namespace testsupport
{

// Polynomial gauge in x and t with random half-integer coefficients, plus
// 1/2 f(t) x^2 for a time function drawn from {sin t, t^2, exp t}.
inline Expr random_gauge(std::mt19937_64 &rng, Expr *f1_out = nullptr)
{
    using namespace nullgauge;
    std::uniform_int_distribution<int> coef(-6, 6);
    std::uniform_int_distribution<int> which(0, 2);
    const auto x = vars::x();
    const auto t = vars::t();
    Expr phi = num(0);
    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; j <= 3; ++j) {
            const int c = coef(rng);
            if (c != 0) {
                phi = phi + num(c, 2) * pow(x, num(i)) * pow(t, num(j));
            }
        }
    }
    const Expr choices[] = {sin(t), pow(t, num(2)), exp(t)};
    const auto f1 = choices[which(rng)];
    if (f1_out) {
        *f1_out = f1;
    }
    return phi + num(1, 2) * f1 * pow(x, num(2));
}

} // namespace testsupport
