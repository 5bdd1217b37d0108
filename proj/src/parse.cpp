#include <nullgauge/parse.hpp>

#include <array>
#include <cctype>

namespace nullgauge
{

ParseError::ParseError(const std::string &what, std::size_t offset)
    : std::invalid_argument(what + " at byte " + std::to_string(offset)), reason_(what), offset_(offset)
{
}

namespace
{

constexpr std::array<std::string_view, 4> builtin_functions{"sin", "cos", "exp", "log"};

bool is_builtin(std::string_view name)
{
    for (auto f : builtin_functions) {
        if (f == name) {
            return true;
        }
    }
    return false;
}

UnaryOp builtin_op(std::string_view name)
{
    if (name == "sin") {
        return UnaryOp::sin;
    }
    if (name == "cos") {
        return UnaryOp::cos;
    }
    if (name == "exp") {
        return UnaryOp::exp;
    }
    return UnaryOp::log;
}

class Parser
{
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run()
    {
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        auto e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(char c)
    {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c)
    {
        if (!peek(c)) {
            if (pos_ == text_.size()) {
                throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            }
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    Expr expr()
    {
        auto lhs = term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                lhs = lhs + term();
            } else if (peek('-')) {
                ++pos_;
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    Expr term()
    {
        auto lhs = factor();
        while (true) {
            if (peek('*')) {
                ++pos_;
                lhs = lhs * factor();
            } else if (peek('/')) {
                ++pos_;
                lhs = lhs / factor();
            } else {
                return lhs;
            }
        }
    }

    Expr factor()
    {
        auto base = atom();
        if (peek('^')) {
            ++pos_;
            return pow(base, atom());
        }
        return base;
    }

    bool at_number_start()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            return false;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return true;
        }
        return c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    }

    Rational number_literal()
    {
        const auto start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            auto look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                ++look;
            }
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
            }
        }
        try {
            return rational_from_decimal(text_.substr(start, pos_ - start));
        } catch (const std::invalid_argument &) {
            throw ParseError("malformed number", start);
        }
    }

    std::string identifier()
    {
        const auto start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Expr atom()
    {
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            if (at_number_start()) {
                return num(-number_literal());
            }
            return -atom();
        }
        if (c == '(') {
            ++pos_;
            auto inner = expr();
            expect(')');
            return inner;
        }
        if (at_number_start()) {
            return num(number_literal());
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return named_atom();
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr named_atom()
    {
        const auto start = pos_;
        auto name = identifier();
        int primes = 0;
        const auto prime_pos = pos_;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        const bool call = peek('(');
        if (primes > 0 && !call) {
            throw ParseError("derivative marks must be followed by '(t)'", prime_pos);
        }
        if (!call) {
            if (is_builtin(name)) {
                throw ParseError("function '" + name + "' requires an argument", start);
            }
            return sym(std::move(name));
        }
        if (is_builtin(name)) {
            if (primes > 0) {
                throw ParseError("derivative marks are only allowed on opaque functions", prime_pos);
            }
            ++pos_;
            auto arg = expr();
            expect(')');
            return make_unary(builtin_op(name), arg);
        }
        if (primes > max_opaque_order) {
            throw ParseError("derivative order " + std::to_string(primes) + " of '" + name
                                 + "' exceeds the supported maximum of " + std::to_string(max_opaque_order),
                             prime_pos);
        }
        ++pos_;
        skip_ws();
        const auto arg_pos = pos_;
        auto arg = identifier();
        if (arg != "t" || !peek(')')) {
            throw ParseError("unknown function '" + name + "' (opaque functions take the single argument t)",
                             start);
        }
        (void)arg_pos;
        ++pos_;
        if (classify_symbol(name) != SymbolKind::parameter) {
            throw ParseError("'" + name + "' is reserved and cannot name a function", start);
        }
        return opaque(std::move(name), primes);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string integer_string(const BigInt &v)
{
    return v.str();
}

std::string render_number(const Rational &r)
{
    const BigInt p = boost::multiprecision::numerator(r);
    BigInt q = boost::multiprecision::denominator(r);
    if (q == 1) {
        return integer_string(p);
    }
    int twos = 0;
    int fives = 0;
    BigInt rest = q;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) {
        return "(" + integer_string(p) + "/" + integer_string(q) + ")";
    }
    const int digits = std::max(twos, fives);
    const BigInt scaled = p * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits)) / q;
    const bool negative = scaled < 0;
    std::string s = integer_string(negative ? BigInt(-scaled) : scaled);
    if (static_cast<int>(s.size()) <= digits) {
        s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return negative ? "-" + s : s;
}

std::string render_expr(const Expr &e);
std::string render_atom(const Expr &e);

const Binary *as_binary(const Expr &e)
{
    return std::get_if<Binary>(&e.node().v);
}

bool is_additive(const Expr &e)
{
    const auto *b = as_binary(e);
    return b != nullptr && (b->op == BinaryOp::add || b->op == BinaryOp::sub);
}

bool is_multiplicative(const Expr &e)
{
    const auto *b = as_binary(e);
    return b != nullptr && (b->op == BinaryOp::mul || b->op == BinaryOp::div);
}

std::string render_factor(const Expr &e)
{
    const auto *b = as_binary(e);
    if (b != nullptr && b->op == BinaryOp::pow) {
        return render_atom(b->lhs) + "^" + render_atom(b->rhs);
    }
    return render_atom(e);
}

std::string render_term(const Expr &e)
{
    if (is_multiplicative(e)) {
        const auto &b = *as_binary(e);
        const auto rhs = (is_multiplicative(b.rhs) || is_additive(b.rhs)) ? "(" + render_expr(b.rhs) + ")"
                                                                           : render_factor(b.rhs);
        return render_term(b.lhs) + (b.op == BinaryOp::mul ? "*" : "/") + rhs;
    }
    if (is_additive(e)) {
        return "(" + render_expr(e) + ")";
    }
    return render_factor(e);
}

std::string render_expr(const Expr &e)
{
    if (is_additive(e)) {
        const auto &b = *as_binary(e);
        const auto rhs = is_additive(b.rhs) ? "(" + render_expr(b.rhs) + ")" : render_term(b.rhs);
        return render_expr(b.lhs) + (b.op == BinaryOp::add ? " + " : " - ") + rhs;
    }
    return render_term(e);
}

std::string render_atom(const Expr &e)
{
    return std::visit(
        [&e](const auto &n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return render_number(n.value);
            } else if constexpr (std::is_same_v<T, Symbol>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Opaque>) {
                return n.name + std::string(static_cast<std::size_t>(n.order), '\'') + "(t)";
            } else if constexpr (std::is_same_v<T, Unary>) {
                switch (n.op) {
                case UnaryOp::neg:
                    if (n.arg.is_number() && n.arg.number_value() >= 0) {
                        return "-(" + render_number(n.arg.number_value()) + ")";
                    }
                    return "-" + render_atom(n.arg);
                case UnaryOp::sin:
                    return "sin(" + render_expr(n.arg) + ")";
                case UnaryOp::cos:
                    return "cos(" + render_expr(n.arg) + ")";
                case UnaryOp::exp:
                    return "exp(" + render_expr(n.arg) + ")";
                case UnaryOp::log:
                    return "log(" + render_expr(n.arg) + ")";
                }
                return {};
            } else {
                return "(" + render_expr(e) + ")";
            }
        },
        e.node().v);
}

} // namespace

Expr parse(std::string_view text)
{
    return Parser(text).run();
}

std::string render(const Expr &e)
{
    return render_expr(e);
}

} // namespace nullgauge
