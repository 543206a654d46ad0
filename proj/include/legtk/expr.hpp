// Small complex-valued expression language used for contact-form
// coefficients: operators + - * /, functions exp, sin, cos, conj,
// pow(expr, int), variables named by the caller (z, w, y, zeta3, ...).
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "legtk/errors.hpp"

namespace legtk {

using cplx = std::complex<double>;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
  public:
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos, Conj, Pow };

    Kind kind;
    cplx value{};           // Const
    int var = -1;           // Var: index into the variable vector
    int exponent = 0;       // Pow
    ExprPtr a, b;

    cplx eval(std::span<const cplx> vars) const;

    // Symbolic derivative with respect to variable `var`. Throws
    // NonHolomorphic when the subtree contains conj.
    ExprPtr diff(int var) const;

    bool has_conj() const;
    bool depends_on(int var) const;

    static ExprPtr constant(cplx c);
    static ExprPtr variable(int idx);
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr mul(ExprPtr a, ExprPtr b);
    static ExprPtr div(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr exp(ExprPtr a);
    static ExprPtr sin(ExprPtr a);
    static ExprPtr cos(ExprPtr a);
    static ExprPtr conj(ExprPtr a);
    static ExprPtr pow(ExprPtr a, int k);
};

// Parses an expression over the given variable names. Numbers are decimal
// literals; the identifier `i` denotes the imaginary unit.
ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& var_names);

// Variable naming convention for forms on the tube: index 0 is the base
// coordinate z, indices 1..2n are the fiber coordinates w, y, zeta3, ...
std::vector<std::string> tube_variable_names(int n);

}  // namespace legtk
