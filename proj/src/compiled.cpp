#include <nullgauge/compiled.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nullgauge/calculus.hpp>

namespace nullgauge
{

namespace
{

std::size_t index_in(const std::vector<std::string> &names, const std::string &name)
{
    const auto it = std::lower_bound(names.begin(), names.end(), name);
    return static_cast<std::size_t>(it - names.begin());
}

std::size_t depth_of(const Expr &e)
{
    return std::visit(
        [](const auto &n) -> std::size_t {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>) {
                return depth_of(n.arg);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return std::max(depth_of(n.lhs), depth_of(n.rhs) + 1);
            } else {
                return 1;
            }
        },
        e.node().v);
}

} // namespace

CompiledExpr::CompiledExpr(const Expr &e)
{
    std::set<std::string> names;
    for (const auto &s : free_symbols(e)) {
        if (s.size() < 3 || s.substr(s.size() - 3) != "(t)") {
            names.insert(s);
        }
    }
    slots_.assign(names.begin(), names.end());
    for (const auto &[name, order] : time_functions(e)) {
        functions_.push_back(name);
    }
    if (!functions_.empty()) {
        t_slot_ = index_in(slots_, "t");
    }
    stack_depth_ = depth_of(e);
    emit(e);
}

std::optional<std::size_t> CompiledExpr::slot_of(const std::string &name) const
{
    const auto i = index_in(slots_, name);
    if (i < slots_.size() && slots_[i] == name) {
        return i;
    }
    return std::nullopt;
}

void CompiledExpr::emit(const Expr &e)
{
    std::visit(
        [this](const auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                code_.push_back({Op::constant, 0, 0, to_double(n.value)});
            } else if constexpr (std::is_same_v<T, Symbol>) {
                code_.push_back({Op::load, static_cast<std::uint32_t>(index_in(slots_, n.name)), 0, 0.0});
            } else if constexpr (std::is_same_v<T, Opaque>) {
                code_.push_back({Op::call, static_cast<std::uint32_t>(index_in(functions_, n.name)), n.order, 0.0});
            } else if constexpr (std::is_same_v<T, Unary>) {
                emit(n.arg);
                static constexpr Op ops[] = {Op::neg, Op::sin, Op::cos, Op::exp, Op::log};
                code_.push_back({ops[static_cast<int>(n.op)], 0, 0, 0.0});
            } else {
                emit(n.lhs);
                emit(n.rhs);
                static constexpr Op ops[] = {Op::add, Op::sub, Op::mul, Op::div, Op::pow};
                code_.push_back({ops[static_cast<int>(n.op)], 0, 0, 0.0});
            }
        },
        e.node().v);
}

double CompiledExpr::run(std::span<const double> values, std::span<const TimeFunction> fns) const
{
    if (values.size() < slots_.size()) {
        throw BindingError("compiled expression: not enough slot values");
    }
    if (fns.size() < functions_.size()) {
        throw BindingError("compiled expression: not enough time-functions");
    }
    // Small fixed buffer covers nearly all expressions without allocating.
    double small[64] = {};
    std::vector<double> big;
    double *stack = small;
    if (stack_depth_ > 64) {
        big.resize(stack_depth_);
        stack = big.data();
    }
    std::size_t sp = 0;
    for (const auto &ins : code_) {
        switch (ins.op) {
        case Op::constant:
            stack[sp++] = ins.value;
            break;
        case Op::load:
            stack[sp++] = values[ins.index];
            break;
        case Op::call:
            stack[sp++] = fns[ins.index](values[*t_slot_], ins.order);
            break;
        case Op::neg:
            stack[sp - 1] = -stack[sp - 1];
            break;
        case Op::sin:
            stack[sp - 1] = std::sin(stack[sp - 1]);
            break;
        case Op::cos:
            stack[sp - 1] = std::cos(stack[sp - 1]);
            break;
        case Op::exp:
            stack[sp - 1] = std::exp(stack[sp - 1]);
            break;
        case Op::log:
            if (!(stack[sp - 1] > 0.0)) {
                throw std::domain_error("log of a non-positive value");
            }
            stack[sp - 1] = std::log(stack[sp - 1]);
            break;
        default: {
            const double r = stack[--sp];
            double &l = stack[sp - 1];
            switch (ins.op) {
            case Op::add:
                l += r;
                break;
            case Op::sub:
                l -= r;
                break;
            case Op::mul:
                l *= r;
                break;
            case Op::div:
                if (r == 0.0) {
                    throw std::domain_error("division by zero");
                }
                l /= r;
                break;
            case Op::pow: {
                if (l == 0.0 && r < 0.0) {
                    throw std::domain_error("division by zero");
                }
                const double p = std::pow(l, r);
                if (std::isnan(p) && !std::isnan(l) && !std::isnan(r)) {
                    throw std::domain_error("non-real power");
                }
                l = p;
                break;
            }
            default:
                break;
            }
        }
        }
    }
    return stack[0];
}

std::vector<double> CompiledExpr::slot_values(const Bindings &b) const
{
    std::vector<double> out;
    out.reserve(slots_.size());
    for (const auto &name : slots_) {
        const auto it = b.values.find(name);
        if (it == b.values.end()) {
            throw BindingError("no value bound for symbol '" + name + "'");
        }
        out.push_back(it->second);
    }
    return out;
}

std::vector<TimeFunction> CompiledExpr::function_table(const Bindings &b) const
{
    std::vector<TimeFunction> out;
    out.reserve(functions_.size());
    for (const auto &name : functions_) {
        const auto it = b.functions.find(name);
        if (it == b.functions.end()) {
            throw BindingError("no function bound for '" + name + "'");
        }
        out.push_back(it->second);
    }
    return out;
}

} // namespace nullgauge
