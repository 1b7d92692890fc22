#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "rattling/specfun.hpp"

using namespace rattling::specfun;

namespace {
double adiff(double a, double b) { return std::abs(a - b); }
}

TEST_CASE("h: frozen values") {
    // h(x) = e^{-x^2/4}/(2 sqrt(pi)); references from 50-digit arithmetic
    CHECK(adiff(h(0.0), 0.28209479177387814) < 1e-16);
    CHECK(adiff(h(1.0), 0.2196956447338612) < 1e-15);
    CHECK(adiff(h(2.0), 0.10377687435514868) < 1e-15);
}

TEST_CASE("g: frozen values and limits") {
    CHECK(g(0.0) == -0.5); // erfc(0) = 1 exactly
    CHECK(adiff(g(1.0), -0.23975006109347673) < 1e-15);
    CHECK(g(5.0) > -1e-3);
    CHECK(g(5.0) < 0.0);
}

TEST_CASE("f: frozen values") {
    CHECK(adiff(f(0.0), 0.5641895835477563) < 1e-15); // 2 h(0) = 1/sqrt(pi)
    CHECK(adiff(f(1.0), 0.19964122837424567) < 1e-15);
}

TEST_CASE("f: closed form matches the defining integral") {
    // library computes f = 2h + x g; the oracle integrates
    // 2x int_x^inf y^-2 h(y) dy directly
    for (double x : {0.0, 0.05, 0.3, 1.0, 2.5, 3.7}) {
        CAPTURE(x);
        CHECK(adiff(f(x), oracles::f_integral(x)) < 1e-11);
    }
}

TEST_CASE("g is the derivative of f") {
    const double d = 1e-4;
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(x);
        double fd = (f(x + d) - f(x - d)) / (2.0 * d);
        CHECK(adiff(fd, g(x)) < 1e-6);
    }
}

TEST_CASE("monotonicity on a coarse grid") {
    double prev_h = h(0.0), prev_g = g(0.0), prev_f = f(0.0);
    for (double x = 0.25; x <= 6.0; x += 0.25) {
        CHECK(h(x) < prev_h);  // h strictly decreasing
        CHECK(g(x) > prev_g);  // g increasing toward 0
        CHECK(f(x) < prev_f);  // f' = g < 0
        prev_h = h(x);
        prev_g = g(x);
        prev_f = f(x);
    }
}

TEST_CASE("tail clamp is exact zero") {
    CHECK(h(40.0) == 0.0);
    CHECK(g(40.0) == 0.0);
    CHECK(f(40.0) == 0.0);
    CHECK(h(1000.0) == 0.0);
    // just inside the cutoff the true values are ~1e-170, far below
    // the clamp's represented threshold but still positive in exact
    // arithmetic; the clamp only matters beyond 40
    CHECK(h(39.9) >= 0.0);
}

TEST_CASE("negative arguments rejected") {
    CHECK_THROWS_AS(h(-0.1), std::domain_error);
    CHECK_THROWS_AS(g(-1e-12), std::domain_error);
    CHECK_THROWS_AS(f(-2.0), std::domain_error);
    CHECK_THROWS_AS(h(std::nan("")), std::domain_error);
}

TEST_CASE("config validation") {
    SpecFunConfig ok;
    CHECK_NOTHROW(ok.validate());
    SpecFunConfig bad_tol;
    bad_tol.quad_rel_tol = 0.0;
    CHECK_THROWS_AS(bad_tol.validate(), std::domain_error);
    bad_tol.quad_rel_tol = 1e-3; // too loose
    CHECK_THROWS_AS(bad_tol.validate(), std::domain_error);
    SpecFunConfig bad_cut;
    bad_cut.tail_cutoff = 10.0;
    CHECK_THROWS_AS(bad_cut.validate(), std::domain_error);
}

TEST_CASE("scaled kernels: endpoint values") {
    for (double a : {0.2, 1.0, 5.0}) {
        CAPTURE(a);
        CHECK(F(a, -1.0) == 0.0);
        CHECK(F(a, 1.0) == 0.0);
        CHECK(G(a, -1.0) == 0.0);
        CHECK(G(a, 1.0) == -0.5);
        CHECK_THROWS_AS(H_integrand(a, 1.0), std::domain_error);
        CHECK_THROWS_AS(H_integrand(a, -1.0), std::domain_error);
    }
    CHECK_THROWS_AS(F(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(F(1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(G(-2.0, 0.0), std::domain_error);
}

TEST_CASE("scaled kernels: cross identity F = 2a(1-x^2) H + (1-x) G") {
    // follows from f = 2h + xi g and the definitions; exercises all
    // three scalings at once
    for (double a : {0.2, 1.0, 5.0}) {
        for (double x = -0.9; x < 0.95; x += 0.3) {
            CAPTURE(a);
            CAPTURE(x);
            double lhs = F(a, x);
            double rhs = 2.0 * a * (1.0 - x * x) * H_integrand(a, x) +
                         (1.0 - x) * G(a, x);
            CHECK(adiff(lhs, rhs) < 1e-14);
        }
    }
}

TEST_CASE("scaled kernels: signs in the interior") {
    for (double a : {0.5, 2.0}) {
        for (double x = -0.99; x < 1.0; x += 0.11) {
            CAPTURE(a);
            CAPTURE(x);
            CHECK(F(a, x) >= 0.0);
            CHECK(G(a, x) <= 0.0);
            CHECK(G(a, x) >= -0.5);
            CHECK(H_integrand(a, x) > 0.0);
        }
    }
}
