#include <doctest.h>

#include "legtk/expr.hpp"

using namespace legtk;
using namespace std::complex_literals;

namespace {
cplx ev(const std::string& text, std::vector<cplx> vars) {
    auto e = parse_expr(text, tube_variable_names(1));
    return e->eval(vars);
}
}  // namespace

TEST_CASE("expression parsing and evaluation") {
    CHECK(ev("1+2*3", {0., 0., 0.}) == cplx(7.0));
    CHECK(ev("-y", {0., 0., 2.0 + 1.0i}) == cplx(-2.0, -1.0));
    CHECK(std::abs(ev("pow(z,3)", {2.0i, 0., 0.}) - (-8.0i)) < 1e-15);
    CHECK(std::abs(ev("exp(z)", {1.0, 0., 0.}) - std::exp(1.0)) < 1e-15);
    CHECK(std::abs(ev("i*w", {0., 3.0, 0.}) - 3.0i) < 1e-15);
    CHECK(std::abs(ev("sin(z)*sin(z)+cos(z)*cos(z)", {0.7 + 0.2i, 0., 0.}) - 1.0) < 1e-12);
    CHECK(std::abs(ev("(z+w)/(1-y)", {1., 2., 0.5}) - 6.0) < 1e-15);
}

TEST_CASE("symbolic differentiation") {
    auto names = tube_variable_names(1);
    auto e = parse_expr("z*z*w + exp(2*z)", names);
    auto dz = e->diff(0);
    std::vector<cplx> v = {1.5, 2.0, 0.};
    // d/dz = 2 z w + 2 exp(2z)
    CHECK(std::abs(dz->eval(v) - (2.0 * 1.5 * 2.0 + 2.0 * std::exp(3.0))) < 1e-12);
    auto dw = e->diff(1);
    CHECK(std::abs(dw->eval(v) - 2.25) < 1e-15);
}

TEST_CASE("conj participates in evaluation but blocks differentiation") {
    auto names = tube_variable_names(1);
    auto e = parse_expr("conj(z)", names);
    CHECK(e->has_conj());
    CHECK(e->eval(std::vector<cplx>{1.0 + 2.0i, 0., 0.}) == cplx(1.0, -2.0));
    CHECK_THROWS_AS((void)e->diff(0), NonHolomorphic);
    // conj of an independent subtree is a constant for other variables
    CHECK_NOTHROW((void)parse_expr("conj(z)*w", names)->diff(1));
}

TEST_CASE("tube variable names") {
    auto n2 = tube_variable_names(2);
    REQUIRE(n2.size() == 5);
    CHECK(n2[0] == "z");
    CHECK(n2[1] == "w");
    CHECK(n2[2] == "y");
    CHECK(n2[3] == "zeta3");
    CHECK(n2[4] == "zeta4");
}
