#include "doctest.h"

#include "bm/mpcore.hpp"
#include "bm/quad.hpp"

using namespace bm;

namespace {

bool close_digits(const Real& a, const Real& b, int digits) {
    Real diff = abs(a - b);
    Real scale = max(abs(b), Real(1e-30, a.prec()));
    return diff <= scale * pow10(-digits, a.prec());
}

}  // namespace

TEST_SUITE_BEGIN("quad");

TEST_CASE("integrate_de elementary integrals") {
    PrecisionContext ctx(50);
    mpfr_prec_t wp = ctx.bits();

    Real half = quad::tanh_sinh([&](const Real& t) { return t; }, Real(0L, wp), Real(1L, wp), ctx).value;
    CHECK(close_digits(half, Real(0.5, wp), 50));

    quad::IntegrandSpec e;
    e.f = [&](const Real& t) { return exp(-t); };
    e.decay = quad::IntegrandSpec::Decay::exponential;
    e.rate = 1.0;
    CHECK(close_digits(quad::integrate_de(e, ctx), Real(1L, wp), 50));
}

TEST_CASE("integrate_de of K0 equals pi/2") {
    // Mellin closed form 2^{s-2} Gamma(s/2)^2 at s = 1
    PrecisionContext ctx(50);
    mpfr_prec_t wp = ctx.bits();
    quad::IntegrandSpec spec;
    spec.f = [&](const Real& t) { return detail::bessel_k0(t, wp); };
    spec.singularity = quad::IntegrandSpec::Sing::log_at_zero;
    spec.decay = quad::IntegrandSpec::Decay::exponential;
    spec.rate = 1.0;
    Real v = quad::integrate_de(spec, ctx);
    CHECK(close_digits(v, const_pi(wp) / 2L, 50));
}

TEST_CASE("linearity of integrate_de") {
    PrecisionContext ctx(40);
    auto mk = [&](double a, double b) {
        quad::IntegrandSpec s;
        s.f = [=](const Real& t) {
            return Real(a, t.prec()) * exp(-t) + Real(b, t.prec()) * exp(-t * 2L) * t;
        };
        s.decay = quad::IntegrandSpec::Decay::exponential;
        s.rate = 1.0;
        return s;
    };
    Real v1 = quad::integrate_de(mk(1, 0), ctx);
    Real v2 = quad::integrate_de(mk(0, 1), ctx);
    Real v12 = quad::integrate_de(mk(3, -2), ctx);
    CHECK(close_digits(v12, v1 * 3L - v2 * 2L, 39));
}

TEST_CASE("precision doubling does not disturb settled digits") {
    PrecisionContext lo(30), hi(60);
    quad::IntegrandSpec spec;
    spec.f = [](const Real& t) { return exp(-t) * cos(t); };
    spec.decay = quad::IntegrandSpec::Decay::exponential;
    spec.rate = 1.0;
    Real a = quad::integrate_de(spec, lo);
    Real b = quad::integrate_de(spec, hi);
    CHECK(close_digits(a, b, 30));
}

TEST_CASE("misdeclared decay is caught in debug mode") {
    PrecisionContext ctx(30);
    quad::IntegrandSpec spec;
    spec.f = [](const Real& t) { return 1L / (1L + t * t); };  // algebraic, not exponential
    spec.decay = quad::IntegrandSpec::Decay::exponential;
    spec.rate = 2.0;
    spec.debug_check_decay = true;
    CHECK_THROWS_AS(quad::integrate_de(spec, ctx), DomainError);
}

TEST_CASE("j0 zeros bracket sign changes") {
    PrecisionContext ctx(30);
    mpfr_prec_t wp = ctx.bits();
    Real z1 = quad::j0_zero(1, ctx);
    CHECK(close_digits(z1, Real(2.404825557695772768621631879326, wp), 14));
    for (int k : {2, 7, 40}) {
        Real z = quad::j0_zero(k, ctx);
        Real j;
        detail::bessel_j0y0(z, wp, &j, nullptr);
        CHECK(abs(j) < pow10(-(ctx.digits - 4), wp));
    }
}

TEST_CASE("oscillatory: Weber integral of J0 equals 1") {
    PrecisionContext ctx(30);
    mpfr_prec_t wp = ctx.bits();
    quad::IntegrandSpec spec;
    spec.f = [&](const Real& t) {
        Real j;
        detail::bessel_j0y0(t, wp, &j, nullptr);
        return j;
    };
    spec.decay = quad::IntegrandSpec::Decay::oscillatory;
    spec.tail_sums = quad::IntegrandSpec::TailSums::alternating;
    std::vector<Real> splits;
    for (int k = 1; k <= 180; ++k) splits.push_back(quad::j0_zero(k, ctx));
    Real v = quad::integrate_oscillatory(spec, splits, ctx);
    CHECK(close_digits(v, Real(1L, wp), 29));
    // raw partial sums cross-check: the plain panel sum through 64 half-waves
    // already sits near the limit
    Real s64(0L, wp);
    s64 += quad::tanh_sinh(spec.f, Real(0L, wp), splits[0], ctx).value;
    for (int k = 0; k < 64; ++k) {
        s64 += quad::gauss_legendre(spec.f, splits[k], splits[k + 1], 40, wp);
    }
    CHECK(abs(s64 - Real(1L, wp)) < Real(0.2, wp));
}

TEST_CASE("oscillatory engine agrees with DE on overlap class") {
    // int_0^inf J0(t)^2 t e^{-t} dt via both engines
    PrecisionContext ctx(30);
    mpfr_prec_t wp = ctx.bits();
    auto f = [&](const Real& t) {
        Real j;
        detail::bessel_j0y0(t, wp, &j, nullptr);
        return j * j * t * exp(-t);
    };
    quad::IntegrandSpec de;
    de.f = f;
    de.decay = quad::IntegrandSpec::Decay::exponential;
    de.rate = 1.0;
    Real a = quad::integrate_de(de, ctx);

    quad::IntegrandSpec osc;
    osc.f = f;
    osc.decay = quad::IntegrandSpec::Decay::oscillatory;
    osc.tail_sums = quad::IntegrandSpec::TailSums::alternating;
    std::vector<Real> splits;
    for (int k = 1; k <= 160; ++k) splits.push_back(quad::j0_zero(k, ctx));
    Real b = quad::integrate_oscillatory(osc, splits, ctx);
    CHECK(close_digits(a, b, 28));
}

TEST_CASE("differentiate_param basics") {
    PrecisionContext ctx(50);
    mpfr_prec_t wp = ctx.bits();
    auto sq = [](const Real& u) { return u * u; };
    auto out = quad::differentiate_param(sq, Real(1.5, wp), 2, quad::DiffMode::finite_difference, ctx);
    CHECK(abs(out.value - 2L) < pow10(-20, wp));

    auto konst = [&](const Real&) { return Real(7L, wp); };
    auto z = quad::differentiate_param(konst, Real(0.3, wp), 1, quad::DiffMode::finite_difference, ctx);
    CHECK(abs(z.value) < pow10(-20, wp));
}

TEST_CASE("differentiate_param dual path on a Bessel moment") {
    // F(u) = int I0(sqrt(u) t) K0^3 t dt at u = 1/4: analytic chain vs
    // finite differences within the degraded tolerance
    PrecisionContext ctx(30);
    mpfr_prec_t wp = ctx.bits();
    auto F = [&](const Real& u) {
        quad::IntegrandSpec s;
        Real su = sqrt(u);
        s.f = [=](const Real& t) {
            return detail::bessel_i0(su * t, wp) * pow_si(detail::bessel_k0(t, wp), 3) * t;
        };
        s.singularity = quad::IntegrandSpec::Sing::log_at_zero;
        s.decay = quad::IntegrandSpec::Decay::exponential;
        s.rate = 3.0 - su.to_double();
        return quad::integrate_de(s, ctx);
    };
    auto chain = [&](const Real& u, int order) {
        if (order != 1) throw DomainError("test chain supports order 1");
        quad::IntegrandSpec s;
        Real su = sqrt(u);
        s.f = [=](const Real& t) {
            // d/du I0(sqrt(u) t) = t I1(sqrt(u) t) / (2 sqrt(u))
            return t * detail::bessel_i1(su * t, wp) / (su * 2L) *
                   pow_si(detail::bessel_k0(t, wp), 3) * t;
        };
        s.singularity = quad::IntegrandSpec::Sing::log_at_zero;
        s.decay = quad::IntegrandSpec::Decay::exponential;
        s.rate = 3.0 - su.to_double();
        return quad::integrate_de(s, ctx);
    };
    Real u0(0.25, wp);
    auto fd = quad::differentiate_param(F, u0, 1, quad::DiffMode::finite_difference, ctx);
    auto an = quad::differentiate_param(F, u0, 1, quad::DiffMode::analytic, ctx, chain);
    CHECK(abs(fd.value - an.value) <= max(fd.err * 4L, pow10(-(ctx.digits / 2), wp)));
}

TEST_SUITE_END();
