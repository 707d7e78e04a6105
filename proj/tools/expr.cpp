#include "expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "lorentzfe/errors.hpp"

namespace lfe {

struct Expr::Node {
    enum Kind { num, var, neg, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    std::size_t index = 0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

struct FnSpec {
    const char* name;
    std::size_t args;
};
constexpr FnSpec kFunctions[] = {{"abs", 1}, {"sqrt", 1}, {"exp", 1}, {"log", 1}, {"floor", 1},
                                 {"step", 1}, {"mod", 2},  {"min", 2}, {"max", 2}};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        auto n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }
    std::size_t arity = 0;

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw lorentzfe::InputError("expression \"" + s_ + "\", column " + std::to_string(pos_ + 1) + ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = make({Expr::Node::add, 0, 0, {}, {lhs, term()}});
            else if (eat('-'))
                lhs = make({Expr::Node::sub, 0, 0, {}, {lhs, term()}});
            else
                return lhs;
        }
    }
    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = make({Expr::Node::mul, 0, 0, {}, {lhs, unary()}});
            else if (eat('/'))
                lhs = make({Expr::Node::div, 0, 0, {}, {lhs, unary()}});
            else
                return lhs;
        }
    }
    NodePtr unary() {
        if (eat('-')) return make({Expr::Node::neg, 0, 0, {}, {unary()}});
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        auto base = primary();
        if (eat('^')) return make({Expr::Node::pow, 0, 0, {}, {base, unary()}});
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (eat('(')) {
            auto n = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return ident();
        fail("unexpected '" + std::string(1, c) + "'");
    }
    NodePtr number() {
        double v = 0.0;
        const char* first = s_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return make({Expr::Node::num, v, 0, {}, {}});
    }
    NodePtr ident() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        if (id == "pi") return make({Expr::Node::num, std::numbers::pi, 0, {}, {}});
        if (id == "x" || id == "y" || id == "z") return variable(id == "x" ? 0 : id == "y" ? 1 : 2);
        if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '9') return variable(static_cast<std::size_t>(id[1] - '1'));
        for (const auto& f : kFunctions) {
            if (id != f.name) continue;
            if (!eat('(')) fail("expected '(' after " + id);
            Expr::Node n{Expr::Node::call, 0, 0, id, {}};
            for (std::size_t a = 0; a < f.args; ++a) {
                if (a > 0 && !eat(',')) fail(id + " takes " + std::to_string(f.args) + " arguments");
                n.args.push_back(expr());
            }
            if (!eat(')')) fail("expected ')' to close " + id);
            return make(std::move(n));
        }
        pos_ = start;
        fail("unknown name '" + id + "'");
    }
    NodePtr variable(std::size_t i) {
        arity = std::max(arity, i + 1);
        return make({Expr::Node::var, 0, i, {}, {}});
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double eval(const Expr::Node& n, std::span<const double> v) {
    using K = Expr::Node;
    auto a = [&](std::size_t i) { return eval(*n.args[i], v); };
    switch (n.kind) {
    case K::num: return n.value;
    case K::var: return v[n.index];
    case K::neg: return -a(0);
    case K::add: return a(0) + a(1);
    case K::sub: return a(0) - a(1);
    case K::mul: return a(0) * a(1);
    case K::div: return a(0) / a(1);
    case K::pow: return std::pow(a(0), a(1));
    case K::call: break;
    }
    const std::string& f = n.fn;
    if (f == "abs") return std::abs(a(0));
    if (f == "sqrt") return std::sqrt(a(0));
    if (f == "exp") return std::exp(a(0));
    if (f == "log") return std::log(a(0));
    if (f == "floor") return std::floor(a(0));
    if (f == "step") return a(0) >= 0.0 ? 1.0 : 0.0;
    if (f == "min") return std::min(a(0), a(1));
    if (f == "max") return std::max(a(0), a(1));
    const double x = a(0);
    const double m = a(1);
    return x - m * std::floor(x / m);  // mod
}

}  // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.parse();
    e.arity_ = p.arity;
    e.text_ = text;
    return e;
}

double Expr::operator()(std::span<const double> vars) const {
    if (vars.size() < arity_)
        throw lorentzfe::InputError("expression \"" + text_ + "\" uses x" + std::to_string(arity_) + " but the domain has " +
                                    std::to_string(vars.size()) + " coordinates");
    return eval(*root_, vars);
}

}  // namespace lfe
