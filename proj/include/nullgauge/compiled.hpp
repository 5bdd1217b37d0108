#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nullgauge/evaluate.hpp>
#include <nullgauge/expr.hpp>

namespace nullgauge
{

// Flattened stack program for repeated numeric evaluation of one
// expression. Semantics match evaluate(), including the domain errors.
class CompiledExpr
{
public:
    explicit CompiledExpr(const Expr &e);

    // Symbol names in slot order (sorted). Includes "t" whenever the
    // expression contains time-functions.
    const std::vector<std::string> &slots() const { return slots_; }
    // Time-function names in function-table order (sorted).
    const std::vector<std::string> &functions() const { return functions_; }

    std::optional<std::size_t> slot_of(const std::string &name) const;

    double run(std::span<const double> values, std::span<const TimeFunction> fns) const;

    // Lays out a Bindings object into slot/function tables.
    std::vector<double> slot_values(const Bindings &b) const;
    std::vector<TimeFunction> function_table(const Bindings &b) const;

private:
    enum class Op : std::uint8_t { constant, load, call, neg, sin, cos, exp, log, add, sub, mul, div, pow };

    struct Instr {
        Op op;
        std::uint32_t index = 0;
        int order = 0;
        double value = 0.0;
    };

    void emit(const Expr &e);

    std::vector<std::string> slots_;
    std::vector<std::string> functions_;
    std::vector<Instr> code_;
    std::size_t stack_depth_ = 0;
    std::optional<std::size_t> t_slot_;
};

} // namespace nullgauge
