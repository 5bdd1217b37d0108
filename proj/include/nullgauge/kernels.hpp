#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nullgauge/compiled.hpp>

// Data-parallel numeric kernels. Each kernel has a serial reference and an
// OpenMP version with identical per-element arithmetic, so results agree
// bit for bit; tests compare the two.
namespace nullgauge::kernels
{

// Evaluates `program` at n points stored row-major in `points`, each row
// holding program.slots().size() values. A point whose evaluation raises a
// domain or binding error yields NaN.
std::vector<double> evaluate_points_serial(const CompiledExpr &program, std::span<const double> points,
                                           std::span<const TimeFunction> fns);
std::vector<double> evaluate_points_parallel(const CompiledExpr &program, std::span<const double> points,
                                             std::span<const TimeFunction> fns);

// max |v_i| ignoring NaN entries; 0 for an empty span.
double max_abs_serial(std::span<const double> v);
double max_abs_parallel(std::span<const double> v);

// Composite Simpson over uniformly spaced values (3/8 rule on the last three
// intervals when the count is odd). Requires at least two intervals.
double simpson_serial(std::span<const double> f, double h);
double simpson_parallel(std::span<const double> f, double h);

int max_threads();

} // namespace nullgauge::kernels
