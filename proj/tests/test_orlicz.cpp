#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "banachlab/orlicz.hpp"
#include "banachlab/rng.hpp"
#include "banachlab/verify.hpp"

using namespace banachlab;
using orlicz::OrliczFn;

namespace {
// Test-local bisection oracle for the two-coordinate gauge: solves
// 2 F(1/t) = 1 with an independent copy of the F formula.
double two_coordinate_gauge_oracle() {
    auto F = [](double x) { return x <= 1.0 ? x * x * (1.0 - std::log(x)) : x; };
    double lo = 1.0, hi = 4.0;
    while (hi - lo > 1e-10 * hi) {
        double mid = 0.5 * (lo + hi);
        if (2.0 * F(1.0 / mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace

TEST_CASE("point values of F and G") {
    CHECK(OrliczFn::F()(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(OrliczFn::G()(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    // 0.25 * (1 - ln 0.5)
    CHECK(OrliczFn::F()(0.5) == doctest::Approx(0.4232867951399863).epsilon(1e-12));
    CHECK(OrliczFn::F()(0.0) == 0.0);
    CHECK(OrliczFn::G()(0.0) == 0.0);
    CHECK_THROWS_AS(OrliczFn::F()(-0.1), PreconditionError);
    CHECK_THROWS_AS(OrliczFn::Fa(1.5), PreconditionError);
}

TEST_CASE("continuity at x = 1 and tiny-argument cutoff") {
    for (OrliczFn fn : {OrliczFn::F(), OrliczFn::G(), OrliczFn::Fa(0.3)}) {
        CHECK(fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(fn(std::nextafter(1.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fn(1e-301) == 0.0);
    }
}

TEST_CASE("F(x) = G(x^2) on a log grid") {
    const OrliczFn F = OrliczFn::F();
    const OrliczFn G = OrliczFn::G();
    for (int i = 0; i <= 10000; ++i) {
        double x = std::exp(std::log(1e-8) + (std::log(1e3) - std::log(1e-8)) * i / 10000.0);
        double f = F(x), g = G(x * x);
        CHECK(std::fabs(f - g) <= 1e-12 * std::max(1.0, std::fabs(f)));
    }
}

TEST_CASE("F_0 is x^2 below 1 and F_1 = F") {
    const OrliczFn F0 = OrliczFn::Fa(0.0);
    const OrliczFn F1 = OrliczFn::Fa(1.0);
    const OrliczFn F = OrliczFn::F();
    SplitMix64 g(1);
    for (int i = 0; i < 1000; ++i) {
        double x = g.uniform01();
        CHECK(F0(x) == doctest::Approx(x * x).epsilon(1e-15));
        CHECK(F1(x) == F(x));
    }
}

TEST_CASE("F_a monotone in a: a <= b <= M a gives F_a <= F_b <= M F_a on (0,1]") {
    SplitMix64 g(2);
    for (int i = 0; i < 2000; ++i) {
        double a = g.uniform01() * 0.5;
        double M = 1.0 + 3.0 * g.uniform01();
        double b = std::min(1.0, a * (1.0 + (M - 1.0) * g.uniform01()));
        double x = g.uniform01();
        if (x == 0.0) continue;
        double fa = OrliczFn::Fa(a)(x), fb = OrliczFn::Fa(b)(x);
        CHECK(fa <= fb * (1 + 1e-12));
        CHECK(fb <= M * fa * (1 + 1e-12));
    }
}

TEST_CASE("F is convex on (0, e^{-1/2}]: second differences nonnegative") {
    const OrliczFn F = OrliczFn::F();
    const double top = std::exp(-0.5);
    const int n = 2000;
    for (int i = 1; i + 1 < n; ++i) {
        double h = top / n;
        double x = i * h;
        double second = F(x + h) - 2.0 * F(x) + F(x - h);
        CHECK(second >= -1e-10);
    }
}

TEST_CASE("modular values") {
    const OrliczFn F = OrliczFn::F();
    CHECK(orlicz::modular(SeqVector::unit(1), F) == doctest::Approx(1.0));
    CHECK(orlicz::modular(SeqVector(), F) == 0.0);
    SeqVector half;
    half.set(1, 0.5);
    half.set(2, 0.5);
    CHECK(orlicz::modular(half, F) == doctest::Approx(0.8465735902799726).epsilon(1e-12));
}

TEST_CASE("modular is monotone in |coordinates|") {
    const OrliczFn F = OrliczFn::F();
    SplitMix64 g(3);
    for (int i = 0; i < 500; ++i) {
        SeqVector x, y;
        for (int k = 1; k <= 8; ++k) {
            double v = g.gaussian();
            x.set(k, v);
            y.set(k, v * g.uniform01());
        }
        CHECK(orlicz::modular(y, F) <= orlicz::modular(x, F) * (1 + 1e-12));
    }
}

TEST_CASE("musielak_profile basics") {
    CHECK(orlicz::musielak_profile({SeqVector::unit(1)}).values() ==
          std::vector<double>{1.0});
    auto prof = orlicz::musielak_profile({SeqVector::unit(1), SeqVector::unit(5)});
    CHECK(prof.values() == std::vector<double>({1.0, 1.0}));

    // Constant-coefficient block of length m, value c with m F(c) = 1:
    // a = m c^2 (computed through the sum of squares).
    for (std::int64_t m : {2, 5, 17}) {
        double c = verify::constant_block_coefficient(m);
        SeqVector b;
        for (std::int64_t k = 1; k <= m; ++k) b.set(k, c);
        auto p = orlicz::musielak_profile({b});
        CHECK(p.values()[0] == doctest::Approx(m * c * c).epsilon(1e-12));
        CHECK(p.values()[0] <= 1.0);
        CHECK(p.values()[0] >= 0.0);
    }

    SeqVector not_normalized;
    not_normalized.set(1, 0.5);
    CHECK_THROWS_AS(orlicz::musielak_profile({not_normalized}), PreconditionError);
}

TEST_CASE("gauge norm of e1 and e1+e2 against the oracle") {
    const OrliczFn F = OrliczFn::F();
    CHECK(orlicz::luxemburg_gauge(SeqVector::unit(1), F) == doctest::Approx(1.0).epsilon(1e-10));
    SeqVector two = SeqVector::unit(1) + SeqVector::unit(2);
    double oracle = two_coordinate_gauge_oracle();
    CHECK(orlicz::luxemburg_gauge(two, F) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("modular identity built from normalized constant blocks") {
    // Lambda(sum t_n x_n) = sum t_n^2 (1 - a_n log|t_n|) exactly.
    SplitMix64 g(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SeqVector> blocks;
        std::vector<double> t;
        std::int64_t next = 1;
        for (int n = 0; n < 4; ++n) {
            std::int64_t m = 1 + static_cast<std::int64_t>(g.below(32));
            double c = verify::constant_block_coefficient(m);
            SeqVector b;
            for (std::int64_t k = 0; k < m; ++k) b.set(next + k, c);
            next += m;
            blocks.push_back(b);
            t.push_back(g.uniform(-1.0, 1.0));
        }
        auto rep = verify::lemma42_modular_identity(blocks, t);
        CHECK(rep.violators.empty());
        CHECK(rep.worst_slack >= -1e-12);
    }
}
