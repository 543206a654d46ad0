#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "legtk/contact.hpp"
#include "legtk/fixtures.hpp"

using namespace legtk;

namespace {

ContactGrid small_grid() {
    ContactGrid g;
    g.base_points = {cplx(1.0, 0.0), cplx(0.0, 1.2), cplx(-0.8, 0.4)};
    g.fiber_count = 16;
    return g;
}

ContactForm perturbed_standard() {
    // dw - y dz + 0.05 w dy
    auto vars = tube_variable_names(1);
    ContactForm f;
    f.n = 1;
    f.coeffs = {parse_expr("-y", vars), parse_expr("1", vars), parse_expr("0.05*w", vars)};
    return f;
}

}  // namespace

TEST_CASE("standard contact form scores exactly one") {
    for (int n : {1, 2, 3}) {
        double c = contact_check(standard_contact(n), small_grid());
        CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("degenerate forms are rejected") {
    auto vars = tube_variable_names(1);
    ContactForm f;
    f.n = 1;
    f.coeffs = {parse_expr("0", vars), parse_expr("1", vars), parse_expr("0", vars)};  // dw
    CHECK_THROWS_AS((void)contact_check(f, small_grid()), NotContact);
}

TEST_CASE("perturbed forms stay contact") {
    CHECK(contact_check(perturbed_standard(), small_grid()) > 0.5);
}

TEST_CASE("isotropy residual vanishes on exact Legendrian curves") {
    auto form = standard_contact(1);
    MappedCurveSamples good, bad;
    for (int k = 0; k < 64; ++k) {
        cplx z = std::exp(cplx(0.0, 2 * M_PI * k / 64.0));
        cplx dz = cplx(0.0, 2 * M_PI) * z;
        // y = z^2, w = z^3/3 satisfies dw = y dz
        good.pos.push_back({z, z * z * z / 3.0, z * z});
        good.vel.push_back({dz, z * z * dz, 2.0 * z * dz});
        // w = z, y = 0 does not
        bad.pos.push_back({z, z, cplx(0.0)});
        bad.vel.push_back({dz, dz, cplx(0.0)});
    }
    CHECK(isotropy_residual(good, form) < 1e-12);
    CHECK(isotropy_residual(bad, form) > 0.9);
}

TEST_CASE("matrix completion produces a two-sided frame") {
    const int N = 96;
    std::vector<Eigen::MatrixXcd> A(N);
    for (int k = 0; k < N; ++k) {
        double th = 2 * M_PI * k / N;
        Eigen::MatrixXcd row(1, 3);
        row << cplx(1.0), cplx(0.4 * std::cos(th), 0.1), cplx(0.0, 0.4 * std::sin(th));
        A[static_cast<size_t>(k)] = row;
    }
    auto fc = matrix_completion(A, true);
    CHECK(fc.identity_defect <= 1e-10);
    for (int k = 0; k < N; ++k) {
        Eigen::MatrixXcd prod = A[static_cast<size_t>(k)] * fc.B[static_cast<size_t>(k)];
        CHECK(std::abs(prod(0, 0) - cplx(1.0)) < 1e-10);
        CHECK(std::abs(prod(0, 1)) < 1e-10);
        CHECK(std::abs(prod(0, 2)) < 1e-10);
        // invertibility of the completed frame
        Eigen::MatrixXcd id =
            fc.B[static_cast<size_t>(k)] * fc.inverse[static_cast<size_t>(k)];
        CHECK((id - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK(fc.lipschitz < 1.0);  // frame varies smoothly along the loop
}

TEST_CASE("matrix completion flags rank drops") {
    std::vector<Eigen::MatrixXcd> A(16, Eigen::MatrixXcd::Zero(1, 3));
    CHECK_THROWS_AS((void)matrix_completion(A, false), RankDrop);
}

TEST_CASE("arens identity on annulus samples") {
    std::vector<cplx> samples;
    for (double r : {0.7, 1.0, 1.5, 1.9})
        for (int k = 0; k < 48; ++k)
            samples.push_back(r * std::exp(cplx(0.0, 2 * M_PI * k / 48.0)));
    std::vector<std::function<cplx(cplx)>> f = {
        [](cplx z) { return z; },            // vanishes only inside the hole
        [](cplx z) { return z - 3.0; },      // vanishes outside
    };
    auto res = arens_identity(f, samples, {cplx(0.0)});
    CHECK(res.identity_residual <= 1e-8);
    CHECK(res.h_min > 0.1);
    for (size_t k = 0; k < samples.size(); k += 17) {
        cplx acc = 0;
        for (size_t j = 0; j < f.size(); ++j) acc += f[j](samples[k]) * res.G[j](samples[k]);
        CHECK(std::abs(acc - 1.0) < 1e-8);
    }
}

TEST_CASE("arens identity refuses common zeros") {
    std::vector<cplx> samples;
    for (int k = 0; k < 64; ++k)
        samples.push_back(1.0 + std::exp(cplx(0.0, 2 * M_PI * k / 64.0)));  // hits z = 0
    std::vector<std::function<cplx(cplx)>> f = {[](cplx z) { return z; },
                                                [](cplx z) { return z * z; }};
    CHECK_THROWS(void(arens_identity(f, samples, {cplx(1.0)})));
}

TEST_CASE("tube extension frames are complementary to the tangent") {
    const int N = 64;
    std::vector<Eigen::VectorXcd> f(N), dfV(N);
    for (int k = 0; k < N; ++k) {
        cplx z = std::exp(cplx(0.0, 2 * M_PI * k / N));
        cplx dz = cplx(0.0, 2 * M_PI) * z;
        Eigen::VectorXcd p(3), v(3);
        p << z, z * z * z / 3.0, z * z;
        v << dz, z * z * dz, 2.0 * z * dz;
        f[static_cast<size_t>(k)] = p;
        dfV[static_cast<size_t>(k)] = v;
    }
    auto tube = tube_extension(f, dfV, true);
    CHECK(tube.min_rank_sv > 1e-3);
    for (int k = 0; k < N; ++k) {
        Eigen::MatrixXcd full(3, 3);
        full.col(0) = dfV[static_cast<size_t>(k)];
        full.rightCols(2) = tube.frame[static_cast<size_t>(k)];
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(full);
        CHECK(svd.singularValues().minCoeff() > 1e-3);
    }
}

TEST_CASE("normal form of the standard form is trivial") {
    auto S = fixtures::annulus();
    auto nf = normal_form(standard_contact(1), S, 128);
    CHECK(nf.axis_defect < 1e-10);
    for (const auto& h : nf.h) CHECK(std::abs(h - 1.0) < 1e-9);
    for (const auto& M : nf.change)
        CHECK((M - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
    for (const auto& [name, v] : nf.residual_terms) {
        INFO(name);
        CHECK(v < 1e-8);
    }
    // reduced form: dw - y dz at first order
    std::vector<cplx> zeta = {cplx(0.08, 0.02), cplx(-0.05, 0.04)};  // (w-hat, y-hat)
    CHECK(std::abs(nf.reduced.coeff(0, 1, zeta) - 1.0) < 1e-8);
    CHECK(std::abs(nf.reduced.coeff(0, 0, zeta) + zeta[1]) < 1e-6);
    CHECK(std::abs(nf.reduced.coeff(0, 2, zeta)) < 1e-6);
}

TEST_CASE("normal form divides out a scalar multiplier") {
    auto vars = tube_variable_names(1);
    ContactForm f;
    f.n = 1;
    f.coeffs = {parse_expr("-2*y", vars), parse_expr("2", vars), parse_expr("0", vars)};
    auto S = fixtures::annulus();
    auto nf = normal_form(f, S, 128);
    for (const auto& h : nf.h) CHECK(std::abs(h - 2.0) < 1e-9);
    std::vector<cplx> zeta = {cplx(0.05, 0.0), cplx(0.03, -0.02)};
    CHECK(std::abs(nf.reduced.coeff(0, 1, zeta) - 1.0) < 1e-8);
    CHECK(std::abs(nf.reduced.coeff(0, 0, zeta) + zeta[1]) < 1e-6);
    CHECK(nf.smoothness_class == f.smoothness_class - 2);
}

TEST_CASE("normal form handles the perturbed form") {
    auto S = fixtures::annulus();
    auto nf = normal_form(perturbed_standard(), S, 128);
    CHECK(nf.axis_defect < 1e-10);
    // on the axis the reduced form is still dw
    std::vector<cplx> zero = {cplx(0.0), cplx(0.0)};
    for (size_t k = 0; k < nf.reduced.base_z.size(); k += 16) {
        CHECK(std::abs(nf.reduced.coeff(k, 1, zero) - 1.0) < 1e-8);
        CHECK(std::abs(nf.reduced.coeff(k, 0, zero)) < 1e-8);
    }
}

TEST_CASE("forms without a Legendrian axis are rejected") {
    auto vars = tube_variable_names(1);
    ContactForm f;
    f.n = 1;
    // dz coefficient does not vanish on the zero section
    f.coeffs = {parse_expr("z - y", vars), parse_expr("1", vars), parse_expr("0", vars)};
    auto S = fixtures::annulus();
    CHECK_THROWS_AS((void)normal_form(f, S, 64), NotLegendrianAxis);
}
