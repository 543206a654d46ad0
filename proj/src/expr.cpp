#include "legtk/expr.hpp"

#include <cctype>
#include <cmath>

namespace legtk {

namespace {

std::shared_ptr<Expr> make(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

bool is_const(const ExprPtr& e, cplx c) {
    return e->kind == Expr::Kind::Const && e->value == c;
}

}  // namespace

ExprPtr Expr::constant(cplx c) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = c;
    return e;
}

ExprPtr Expr::variable(int idx) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->var = idx;
    return e;
}

ExprPtr Expr::add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make(Kind::Add, std::move(a), std::move(b));
}

ExprPtr Expr::sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(std::move(b));
    return make(Kind::Sub, std::move(a), std::move(b));
}

ExprPtr Expr::mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make(Kind::Mul, std::move(a), std::move(b));
}

ExprPtr Expr::div(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return constant(0.0);
    if (is_const(b, 1.0)) return a;
    return make(Kind::Div, std::move(a), std::move(b));
}

ExprPtr Expr::neg(ExprPtr a) {
    if (a->kind == Kind::Const) return constant(-a->value);
    return make(Kind::Neg, std::move(a));
}

ExprPtr Expr::exp(ExprPtr a) { return make(Kind::Exp, std::move(a)); }
ExprPtr Expr::sin(ExprPtr a) { return make(Kind::Sin, std::move(a)); }
ExprPtr Expr::cos(ExprPtr a) { return make(Kind::Cos, std::move(a)); }
ExprPtr Expr::conj(ExprPtr a) { return make(Kind::Conj, std::move(a)); }

ExprPtr Expr::pow(ExprPtr a, int k) {
    if (k == 0) return constant(1.0);
    if (k == 1) return a;
    auto e = make(Kind::Pow, std::move(a));
    e->exponent = k;
    return e;
}

cplx Expr::eval(std::span<const cplx> vars) const {
    switch (kind) {
        case Kind::Const: return value;
        case Kind::Var: return vars[static_cast<size_t>(var)];
        case Kind::Add: return a->eval(vars) + b->eval(vars);
        case Kind::Sub: return a->eval(vars) - b->eval(vars);
        case Kind::Mul: return a->eval(vars) * b->eval(vars);
        case Kind::Div: return a->eval(vars) / b->eval(vars);
        case Kind::Neg: return -a->eval(vars);
        case Kind::Exp: return std::exp(a->eval(vars));
        case Kind::Sin: return std::sin(a->eval(vars));
        case Kind::Cos: return std::cos(a->eval(vars));
        case Kind::Conj: return std::conj(a->eval(vars));
        case Kind::Pow: {
            cplx base = a->eval(vars);
            if (exponent < 0) return std::pow(base, static_cast<double>(exponent));
            cplx r = 1.0;
            for (int k = 0; k < exponent; ++k) r *= base;
            return r;
        }
    }
    return {};
}

bool Expr::has_conj() const {
    if (kind == Kind::Conj) return true;
    if (a && a->has_conj()) return true;
    if (b && b->has_conj()) return true;
    return false;
}

bool Expr::depends_on(int v) const {
    if (kind == Kind::Var) return var == v;
    if (a && a->depends_on(v)) return true;
    if (b && b->depends_on(v)) return true;
    return false;
}

ExprPtr Expr::diff(int v) const {
    switch (kind) {
        case Kind::Const: return constant(0.0);
        case Kind::Var: return constant(var == v ? 1.0 : 0.0);
        case Kind::Add: return add(a->diff(v), b->diff(v));
        case Kind::Sub: return sub(a->diff(v), b->diff(v));
        case Kind::Mul: return add(mul(a->diff(v), b), mul(a, b->diff(v)));
        case Kind::Div:
            return div(sub(mul(a->diff(v), b), mul(a, b->diff(v))), mul(b, b));
        case Kind::Neg: return neg(a->diff(v));
        case Kind::Exp: return mul(exp(a), a->diff(v));
        case Kind::Sin: return mul(cos(a), a->diff(v));
        case Kind::Cos: return neg(mul(sin(a), a->diff(v)));
        case Kind::Conj:
            if (a->depends_on(v))
                throw NonHolomorphic("cannot differentiate conj() holomorphically");
            return constant(0.0);
        case Kind::Pow:
            return mul(mul(constant(static_cast<double>(exponent)), pow(a, exponent - 1)),
                       a->diff(v));
    }
    return constant(0.0);
}

namespace {

// recursive-descent parser
class Parser {
  public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    ExprPtr parse() {
        auto e = expression();
        skip_ws();
        if (pos_ != text_.size())
            throw Error("expression parse error: trailing input at offset " +
                        std::to_string(pos_));
        return e;
    }

  private:
    const std::string& text_;
    const std::vector<std::string>& vars_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw Error(std::string("expression parse error: expected '") + c + "' at offset " +
                        std::to_string(pos_));
    }

    ExprPtr expression() {
        auto e = term();
        for (;;) {
            if (accept('+')) e = Expr::add(e, term());
            else if (accept('-')) e = Expr::sub(e, term());
            else return e;
        }
    }

    ExprPtr term() {
        auto e = unary();
        for (;;) {
            if (accept('*')) e = Expr::mul(e, unary());
            else if (accept('/')) e = Expr::div(e, unary());
            else return e;
        }
    }

    ExprPtr unary() {
        if (accept('-')) return Expr::neg(unary());
        if (accept('+')) return unary();
        return primary();
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw Error("expression parse error: unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw Error(std::string("expression parse error: unexpected character '") + c + "'");
    }

    ExprPtr number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == 'e' || text_[pos_] == 'E' ||
                ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
            ++pos_;
        return Expr::constant(std::stod(text_.substr(start, pos_ - start)));
    }

    ExprPtr identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name == "i") return Expr::constant(cplx(0.0, 1.0));
        if (name == "exp") return Expr::exp(paren_arg());
        if (name == "sin") return Expr::sin(paren_arg());
        if (name == "cos") return Expr::cos(paren_arg());
        if (name == "conj") return Expr::conj(paren_arg());
        if (name == "pow") {
            expect('(');
            auto base = expression();
            expect(',');
            skip_ws();
            bool negexp = accept('-');
            size_t es = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == es) throw Error("expression parse error: pow exponent must be an integer");
            int k = std::stoi(text_.substr(es, pos_ - es));
            expect(')');
            return Expr::pow(base, negexp ? -k : k);
        }
        for (size_t v = 0; v < vars_.size(); ++v)
            if (vars_[v] == name) return Expr::variable(static_cast<int>(v));
        throw Error("expression parse error: unknown identifier '" + name + "'");
    }

    ExprPtr paren_arg() {
        expect('(');
        auto e = expression();
        expect(')');
        return e;
    }
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& var_names) {
    return Parser(text, var_names).parse();
}

std::vector<std::string> tube_variable_names(int n) {
    std::vector<std::string> names = {"z", "w", "y"};
    for (int j = 3; j <= 2 * n; ++j) names.push_back("zeta" + std::to_string(j));
    return names;
}

}  // namespace legtk
