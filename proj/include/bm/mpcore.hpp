#pragma once

#include "bm/prec.hpp"
#include "bm/series.hpp"

namespace bm {

enum class BesselKind { I0, I1, K0, K1, J0, Y0 };

// Gamma(x); pole error at non-positive integers.
Real gamma_real(const Real& x, const PrecisionContext& ctx);

// Bessel and modified Bessel functions of order 0 (and first order for the
// modified kind, needed by derivative chains). J0/Y0 absorb the power-series
// cancelation with guard digits growing linearly in t; the growth is capped
// and a PrecisionOverflowError is raised past the cap rather than silently
// degrading. K0/K1 switch from the log series to double-exponential
// quadrature of the defining integral K0(t) = int_0^inf exp(-t cosh u) du
// for t > 5.
Real bessel(BesselKind kind, const Real& t, const PrecisionContext& ctx);

// First N stored coefficients of (pi/2)^{2m} [H0^(1)(z) H0^(2)(z)]^m as an
// exact series in 1/z. The stored coefficients are the rational parts: the
// true series is pi^m * sum_i coeffs[i] z^{-(m+2i_gap)} with the leading
// exponent m; entries at exponents of the wrong parity are exact zeros.
RationalSeries hankel_product_series(int m, int N);

// Upper incomplete gamma Gamma(s, x) for integer s (any sign) and x > 0.
// s >= 1 uses the finite elementary sum; s <= 0 descends from
// Gamma(0,x) = E1(x) by the downward recurrence.
Real incgamma_int(long s, const Real& x, const PrecisionContext& ctx);

namespace detail {

// bit-level workhorses (results at `prec` bits, accurate to ~prec - few bits)
Real bessel_i0(const Real& t, mpfr_prec_t prec);
Real bessel_i1(const Real& t, mpfr_prec_t prec);
Real bessel_k0(const Real& t, mpfr_prec_t prec);
Real bessel_k1(const Real& t, mpfr_prec_t prec);
// joint J0/Y0 evaluation (shared power-series terms)
void bessel_j0y0(const Real& t, mpfr_prec_t prec, Real* j0, Real* y0);
Real exp_e1(const Real& x, mpfr_prec_t prec);  // exponential integral E1, x > 0

// cache statistics / reset (used by tests)
void clear_bessel_cache();

}  // namespace detail

}  // namespace bm
