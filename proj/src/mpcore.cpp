#include "bm/mpcore.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace bm {
namespace detail {

namespace {

// Memo cache for Bessel values. Quadrature engines re-visit identical nodes
// across different moments at the same working precision, so keying on
// (kind, precision, exact value of t) turns most evaluations into lookups.
struct BesselCache {
    std::unordered_map<std::string, Real> map;
    std::shared_mutex mtx;

    bool get(const std::string& k, Real* out) {
        std::shared_lock lk(mtx);
        auto it = map.find(k);
        if (it == map.end()) return false;
        *out = it->second;
        return true;
    }
    void put(const std::string& k, const Real& v) {
        std::unique_lock lk(mtx);
        if (map.size() > 400000) map.clear();
        map.emplace(k, v);
    }
};
BesselCache g_cache;

std::string cache_key(char kind, mpfr_prec_t prec, const Real& t) {
    mpfr_exp_t e;
    char* raw = mpfr_get_str(nullptr, &e, 32, 0, t.get(), MPFR_RNDN);
    std::string key;
    key.reserve(64);
    key += kind;
    key += '|';
    key += std::to_string(static_cast<long>(prec));
    key += '|';
    key += raw;
    key += '@';
    key += std::to_string(static_cast<long>(e));
    mpfr_free_str(raw);
    return key;
}

Real two_pow(long e, mpfr_prec_t prec) {
    Real r(1L, prec);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

}  // namespace

void clear_bessel_cache() {
    std::unique_lock lk(g_cache.mtx);
    g_cache.map.clear();
}

Real bessel_i0(const Real& t, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 24;
    Real x2(t.prec() > wp ? t.prec() : wp);
    mpfr_sqr(x2.get(), t.get(), MPFR_RNDN);
    x2 = x2 / 4L;  // t^2/4
    Real sum(1L, wp), term(1L, wp);
    Real tol = two_pow(-(wp + 4), wp);
    for (long k = 1;; ++k) {
        term = term * x2 / k / k;
        sum += term;
        if (term < tol * sum) break;
        if (k > 100000) throw ConvergenceError("bessel_i0: series did not converge");
    }
    return sum;
}

Real bessel_i1(const Real& t, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 24;
    Real x2(wp);
    mpfr_sqr(x2.get(), t.get(), MPFR_RNDN);
    x2 = x2 / 4L;
    Real sum(1L, wp), term(1L, wp);
    Real tol = two_pow(-(wp + 4), wp);
    for (long k = 1;; ++k) {
        term = term * x2 / k / (k + 1);
        sum += term;
        if (term < tol * sum) break;
        if (k > 100000) throw ConvergenceError("bessel_i1: series did not converge");
    }
    Real th(wp);
    mpfr_div_2ui(th.get(), t.get(), 1, MPFR_RNDN);
    return th * sum;
}

namespace {

// K0, K1 by the log series; adequate for t <= 5 where the cancelation
// budget stays below ~2t bits.
Real k0_series(const Real& t, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32 + static_cast<mpfr_prec_t>(3.0 * t.to_double());
    Real x2(wp);
    mpfr_sqr(x2.get(), t.get(), MPFR_RNDN);
    x2 = x2 / 4L;
    Real L(wp);
    mpfr_div_2ui(L.get(), t.get(), 1, MPFR_RNDN);
    L = log(L) + const_euler(wp);  // ln(t/2) + gamma
    Real i0(1L, wp), term(1L, wp), hsum(0L, wp), H(0L, wp);
    Real tol = two_pow(-(wp + 4), wp);
    for (long k = 1;; ++k) {
        term = term * x2 / k / k;
        H += Real(1L, wp) / k;
        i0 += term;
        hsum += term * H;
        if (term * H < tol) break;
        if (k > 100000) throw ConvergenceError("k0_series: no convergence");
    }
    return hsum - L * i0;
}

Real k1_series(const Real& t, mpfr_prec_t prec) {
    // K1(t) = 1/t + ln(t/2) I1(t) - (t/4) sum_{k>=0} [H_k + H_{k+1} + 2 gamma] (t^2/4)^k / (k!(k+1)!)
    // with the gamma terms folded so that K1 = 1/t + (ln(t/2)+gamma) I1 - (t/4) sum (H_k+H_{k+1}) u_k
    mpfr_prec_t wp = prec + 32 + static_cast<mpfr_prec_t>(3.0 * t.to_double());
    Real x2(wp);
    mpfr_sqr(x2.get(), t.get(), MPFR_RNDN);
    x2 = x2 / 4L;
    Real L(wp);
    mpfr_div_2ui(L.get(), t.get(), 1, MPFR_RNDN);
    L = log(L) + const_euler(wp);
    Real i1sum(1L, wp), term(1L, wp), hh(1L, wp), hsum(1L, wp);  // k=0: H_0+H_1 = 1
    Real tol = two_pow(-(wp + 4), wp);
    for (long k = 1;; ++k) {
        term = term * x2 / k / (k + 1);
        hh += Real(1L, wp) / k + Real(1L, wp) / (k + 1);
        i1sum += term;
        hsum += term * hh;
        if (term * hh < tol) break;
        if (k > 100000) throw ConvergenceError("k1_series: no convergence");
    }
    Real tw(wp);
    mpfr_set(tw.get(), t.get(), MPFR_RNDN);
    Real th = tw / 2L;
    Real i1 = th * i1sum;
    return 1L / tw + L * i1 - th / 2L * hsum;
}

// Asymptotic series for K0/K1, usable when t is large enough that the
// optimal-truncation floor e^{-2t} sits below the precision target.
bool k_asymptotic(const Real& t, mpfr_prec_t prec, bool first_order, Real* out) {
    mpfr_prec_t wp = prec + 24;
    double td = t.to_double();
    if (2.0 * td < (wp + 8) * 0.6931) return false;
    Real sum(1L, wp), term(1L, wp);
    Real tol = two_pow(-(wp + 4), wp);
    Real t8 = Real(t) * 8L;
    double mu = first_order ? 4.0 : 0.0;
    for (long k = 1; k <= 100000; ++k) {
        double a = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        Real factor = Real(a, wp) / (Real(static_cast<long>(k), wp) * t8);
        Real next = term * factor;
        if (abs(next) >= abs(term)) return false;  // divergence reached before target
        term = next;
        sum += term;
        if (abs(term) < tol) break;
    }
    Real pi = const_pi(wp);
    *out = sqrt(pi / (Real(t) * 2L)) * exp(-Real(t)) * sum;
    return true;
}

// Defining integral K0(t) = int_0^inf exp(-t cosh u) du (and the cosh-weighted
// variant for K1) by exp-sinh double-exponential quadrature with level
// doubling.
Real k_integral(const Real& t, mpfr_prec_t prec, bool first_order) {
    mpfr_prec_t wp = prec + 28;
    Real pi_half = const_pi(wp) / 2L;
    Real tol = two_pow(-(wp + 6), wp);
    double td = t.to_double();
    double bits = static_cast<double>(wp);
    // u-range: e^{-t cosh u} negligible once t(cosh u - 1) > bits ln 2
    double umax = std::acosh(1.0 + (bits + 8) * 0.6931 / td) + 0.5;
    double wmax = std::asinh(std::log(umax) * 2.0 / 3.14159265) + 0.7;
    double wmin = -std::asinh((bits + 8) * 0.6931 * 2.0 / 3.14159265) - 0.7;

    Real prev(0L, wp);
    Real result(0L, wp);
    Real gap(1L, wp);
    for (int level = 4; level <= 11; ++level) {
        double h = 1.0 / static_cast<double>(1L << level);
        long jmin = static_cast<long>(wmin / h) - 1;
        long jmax = static_cast<long>(wmax / h) + 1;
        Real sum(0L, wp);
        for (long j = jmin; j <= jmax; ++j) {
            if (level > 4 && (j % 2) == 0) continue;  // reuse coarser levels
            Real w(static_cast<double>(j) * h, wp);
            Real sh = sinh(w), ch = cosh(w);
            Real u = exp(pi_half * sh);
            Real cu = cosh(u);
            Real e(wp);
            mpfr_mul(e.get(), t.get(), cu.get(), MPFR_RNDN);
            mpfr_neg(e.get(), e.get(), MPFR_RNDN);
            // negligible relative to the e^{-t} scale of the result
            if (Real(e) + t < Real(-(static_cast<double>(wp) + 30.0) * 0.6931, wp)) continue;
            Real f = exp(Real(e));
            if (first_order) f *= cu;
            sum += f * u * pi_half * ch;
        }
        if (level == 4) {
            result = sum * Real(h, wp);
        } else {
            result = result / 2L + sum * Real(h, wp);
        }
        gap = abs(result - prev);
        if (level > 5 && gap <= tol * abs(result)) return result;
        prev = result;
    }
    if (gap > abs(result) * two_pow(-static_cast<long>(prec), wp)) {
        throw ConvergenceError("bessel K integral: quadrature did not converge");
    }
    return result;
}

}  // namespace

Real bessel_k0(const Real& t, mpfr_prec_t prec) {
    std::string key = cache_key('k', prec, t);
    Real out;
    if (g_cache.get(key, &out)) return out;
    if (t.to_double() <= 5.0) {
        out = k0_series(t, prec);
    } else if (!k_asymptotic(t, prec, false, &out)) {
        out = k_integral(t, prec, false);
    }
    g_cache.put(key, out);
    return out;
}

Real bessel_k1(const Real& t, mpfr_prec_t prec) {
    std::string key = cache_key('l', prec, t);
    Real out;
    if (g_cache.get(key, &out)) return out;
    if (t.to_double() <= 5.0) {
        out = k1_series(t, prec);
    } else if (!k_asymptotic(t, prec, true, &out)) {
        out = k_integral(t, prec, true);
    }
    g_cache.put(key, out);
    return out;
}

void bessel_j0y0(const Real& t, mpfr_prec_t prec, Real* j0out, Real* y0out) {
    std::string kj = cache_key('j', prec, t);
    std::string ky = cache_key('y', prec, t);
    Real cj, cy;
    bool hj = g_cache.get(kj, &cj), hy = g_cache.get(ky, &cy);
    if (hj && hy) {
        if (j0out) *j0out = cj;
        if (y0out) *y0out = cy;
        return;
    }
    double td = t.to_double();
    // cancelation budget: series terms peak near e^t
    double guard_digits = 0.9 * td + 15.0;
    constexpr double kGuardCapDigits = 13000.0;
    if (guard_digits > kGuardCapDigits) {
        throw PrecisionOverflowError("bessel J0/Y0: required guard digits " +
                                     std::to_string(static_cast<long>(guard_digits)) +
                                     " exceed the configured cap");
    }
    mpfr_prec_t wp = prec + static_cast<mpfr_prec_t>(guard_digits * 3.3220) + 24;
    Real x2(wp);
    mpfr_sqr(x2.get(), t.get(), MPFR_RNDN);
    x2 = x2 / 4L;
    Real jsum(1L, wp), term(1L, wp), hsum(0L, wp), H(0L, wp);
    Real tol = two_pow(-(wp + 6), wp);
    int sign = 1;
    for (long k = 1;; ++k) {
        term = term * x2 / k / k;
        H += Real(1L, wp) / k;
        sign = -sign;
        if (sign > 0) {
            jsum += term;
            hsum -= term * H;
        } else {
            jsum -= term;
            hsum += term * H;
        }
        if (term * (H + 1L) < tol) break;
        if (k > 1000000) throw ConvergenceError("bessel_j0y0: series did not converge");
    }
    Real L(wp);
    mpfr_div_2ui(L.get(), t.get(), 1, MPFR_RNDN);
    L = log(L) + const_euler(wp);
    Real pi = const_pi(wp);
    Real y0 = (L * jsum + hsum) * 2L / pi;
    g_cache.put(kj, jsum);
    g_cache.put(ky, y0);
    if (j0out) *j0out = jsum;
    if (y0out) *y0out = y0;
}

Real exp_e1(const Real& x, mpfr_prec_t prec) {
    if (x.sign() <= 0) throw DomainError("E1: requires x > 0");
    double xd = x.to_double();
    if (xd <= 8.0) {
        // E1 = -gamma - ln x + sum (-1)^{k+1} x^k/(k k!)
        mpfr_prec_t wp = prec + 24 + static_cast<mpfr_prec_t>(3.0 * xd);
        Real sum(0L, wp), term(1L, wp);
        Real tol = two_pow(-(wp + 4), wp);
        Real xw(wp);
        mpfr_set(xw.get(), x.get(), MPFR_RNDN);
        for (long k = 1;; ++k) {
            term = term * xw / k;
            Real piece = term / k;
            if (k % 2 == 1) sum += piece; else sum -= piece;
            if (piece < tol) break;
            if (k > 100000) throw ConvergenceError("E1 series: no convergence");
        }
        return sum - const_euler(wp) - log(xw);
    }
    // modified Lentz on E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    mpfr_prec_t wp = prec + 32;
    Real xw(wp);
    mpfr_set(xw.get(), x.get(), MPFR_RNDN);
    Real tiny = two_pow(-(wp + wp), wp);
    Real b = xw + 1L;
    Real c = 1L / tiny;
    Real d = 1L / b;
    Real f = d;
    Real tol = two_pow(-(wp + 4), wp);
    for (long k = 1; k <= 1000000; ++k) {
        Real a(-static_cast<long>(k) * static_cast<long>(k), wp);
        b = xw + Real(2 * k + 1, wp);
        d = b + a * d;
        if (d.is_zero()) d = tiny;
        c = b + a / c;
        if (c.is_zero()) c = tiny;
        d = 1L / d;
        Real delta = c * d;
        f *= delta;
        if (abs(delta - 1L) < tol) break;
    }
    return exp(-xw) * f;
}

}  // namespace detail

Real gamma_real(const Real& x, const PrecisionContext& ctx) {
    if (x.sign() <= 0) {
        Real fl = floor(x);
        if (fl == x) throw DomainError("gamma_real: pole at non-positive integer");
    }
    Real r(ctx.bits());
    mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real bessel(BesselKind kind, const Real& t, const PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.bits();
    if (t.sign() < 0) throw DomainError("bessel: domain error, t < 0");
    if (t.is_zero()) {
        switch (kind) {
            case BesselKind::I0:
            case BesselKind::J0:
                return Real(1L, wp);
            case BesselKind::I1:
                return Real(0L, wp);
            default:
                throw DomainError("bessel: singular at t = 0");
        }
    }
    switch (kind) {
        case BesselKind::I0: return detail::bessel_i0(t, wp);
        case BesselKind::I1: return detail::bessel_i1(t, wp);
        case BesselKind::K0: return detail::bessel_k0(t, wp);
        case BesselKind::K1: return detail::bessel_k1(t, wp);
        case BesselKind::J0: {
            Real j;
            detail::bessel_j0y0(t, wp, &j, nullptr);
            return j;
        }
        case BesselKind::Y0: {
            Real y;
            detail::bessel_j0y0(t, wp, nullptr, &y);
            return y;
        }
    }
    throw DomainError("bessel: unknown kind");
}

RationalSeries hankel_product_series(int m, int N) {
    if (m < 1 || N < 1) throw DomainError("hankel_product_series: need m >= 1, N >= 1");
    // c_n = [Gamma(n+1/2)]^2/(pi n!) = [(2n)!]^2 / (16^n (n!)^3), exact
    long half_terms = (N + 1) / 2 + 1;
    std::vector<mpq_class> c(static_cast<size_t>(2 * half_terms + 1));
    c[0] = 1;
    mpz_class fact_2n(1), fact_n(1), pow16(1);
    for (long n = 1; n <= 2 * half_terms; ++n) {
        fact_2n *= (2 * n - 1) * 2 * n;
        fact_n *= n;
        pow16 *= 16;
        mpq_class num(fact_2n * fact_2n);
        mpq_class den(pow16 * fact_n * fact_n * fact_n);
        c[static_cast<size_t>(n)] = num / den;
        c[static_cast<size_t>(n)].canonicalize();
    }
    // base product in 1/z^2 steps: S_{2j} = (-1)^j 2^{-2j} sum_{a+b=2j} (-1)^b c_a c_b
    std::vector<mpq_class> base(static_cast<size_t>(half_terms));
    for (long j = 0; j < half_terms; ++j) {
        mpq_class tot(0);
        for (long a = 0; a <= 2 * j; ++a) {
            mpq_class piece = c[static_cast<size_t>(a)] * c[static_cast<size_t>(2 * j - a)];
            if ((2 * j - a) % 2 != 0) piece = -piece;
            tot += piece;
        }
        mpq_class scale(((j % 2 == 0) ? 1 : -1), 1);
        mpz_class p2(1);
        mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), static_cast<unsigned long>(2 * j));
        base[static_cast<size_t>(j)] = tot * scale / mpq_class(p2);
        base[static_cast<size_t>(j)].canonicalize();
    }
    // S^m by repeated truncated convolution
    std::vector<mpq_class> acc(1, mpq_class(1));
    for (int rep = 0; rep < m; ++rep) {
        std::vector<mpq_class> next(static_cast<size_t>(half_terms), mpq_class(0));
        for (size_t i = 0; i < acc.size() && i < static_cast<size_t>(half_terms); ++i) {
            if (acc[i] == 0) continue;
            for (size_t j = 0; i + j < static_cast<size_t>(half_terms); ++j) {
                next[i + j] += acc[i] * base[j];
            }
        }
        acc = std::move(next);
    }
    RationalSeries out;
    out.variable_tag = RationalSeries::Var::inverse_z;
    out.leading_exponent = m;
    out.coeffs.assign(static_cast<size_t>(N), mpq_class(0));
    mpz_class p2m(1);
    mpz_mul_2exp(p2m.get_mpz_t(), p2m.get_mpz_t(), static_cast<unsigned long>(m));
    for (long i = 0; i < N; i += 2) {
        out.coeffs[static_cast<size_t>(i)] = acc[static_cast<size_t>(i / 2)] / mpq_class(p2m);
        out.coeffs[static_cast<size_t>(i)].canonicalize();
    }
    return out;
}

Real incgamma_int(long s, const Real& x, const PrecisionContext& ctx) {
    if (x.sign() <= 0) throw DomainError("incgamma_int: requires x > 0");
    mpfr_prec_t wp = ctx.bits() + 16;
    Real xw(wp);
    mpfr_set(xw.get(), x.get(), MPFR_RNDN);
    if (s >= 1) {
        // Gamma(s,x) = (s-1)! e^{-x} sum_{j=0}^{s-1} x^j/j!
        Real sum(1L, wp), term(1L, wp);
        for (long j = 1; j < s; ++j) {
            term = term * xw / j;
            sum += term;
        }
        Real fact(1L, wp);
        for (long j = 2; j < s; ++j) fact *= Real(j, wp);
        return fact * exp(-xw) * sum;
    }
    Real g = detail::exp_e1(xw, wp);  // Gamma(0,x)
    if (s == 0) return g;
    Real emx = exp(-xw);
    Real xpow = 1L / xw;  // x^{s+1} running, starts at x^{-1} for step to s=-1
    for (long k = -1; k >= s; --k) {
        // Gamma(k,x) = (Gamma(k+1,x) - x^k e^{-x}) / k
        g = (g - xpow * emx) / Real(k, wp);
        xpow /= xw;
    }
    return g;
}

}  // namespace bm
