#pragma once

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace bm {

// Error hierarchy. Every failure mode the library reports derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error {
    using Error::Error;
};
struct PrecisionOverflowError : Error {
    using Error::Error;
};
struct ConvergenceError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

// Requested decimal digits plus guard digits carried through a computation.
// All public results are accurate to at least `digits` significant decimals;
// internal work happens at digits+guard.
struct PrecisionContext {
    int digits = 50;
    int guard = 15;

    PrecisionContext() = default;
    PrecisionContext(int d, int g = 15) : digits(d), guard(g) {
        if (d < 10) throw DomainError("PrecisionContext: digits must be >= 10");
        if (g < 0) throw DomainError("PrecisionContext: guard must be >= 0");
    }

    int working_digits() const { return digits + guard; }

    mpfr_prec_t bits() const {
        // 3.3220 > log2(10); +16 bits of slack for rounding noise
        return static_cast<mpfr_prec_t>(working_digits() * 3.3220) + 16;
    }

    PrecisionContext doubled_guard() const { return PrecisionContext(digits, 2 * guard); }
};

// RAII wrapper over mpfr_t. A Real carries its own binary precision; binary
// operations round at the larger operand precision, so working precision set
// by the context propagates through expressions.
class Real {
  public:
    Real() { mpfr_init2(v_, 64); }
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x, mpfr_prec_t prec) : Real(static_cast<long>(x), prec) {}
    Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }
    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend Real operator*(const Real& a, long b) {
        Real r(a.prec());
        mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator*(long a, const Real& b) { return b * a; }
    friend Real operator/(const Real& a, long b) {
        Real r(a.prec());
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator/(long a, const Real& b) {
        Real r(b.prec());
        mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator+(const Real& a, long b) {
        Real r(a.prec());
        mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator+(long a, const Real& b) { return b + a; }
    friend Real operator-(const Real& a, long b) {
        Real r(a.prec());
        mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator-(long a, const Real& b) {
        Real r(b.prec());
        mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

  private:
    using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static Real bin(const Real& a, const Real& b, BinOp op) {
        Real r(a.prec() >= b.prec() ? a.prec() : b.prec());
        op(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    mpfr_t v_;
};

// one-argument mpfr function lift
#define BM_REAL_FN1(name, mpfr_name)                 \
    inline Real name(const Real& x) {                \
        Real r(x.prec());                            \
        mpfr_name(r.get(), x.get(), MPFR_RNDN);      \
        return r;                                    \
    }

BM_REAL_FN1(abs, mpfr_abs)
BM_REAL_FN1(sqrt, mpfr_sqrt)
BM_REAL_FN1(exp, mpfr_exp)
BM_REAL_FN1(log, mpfr_log)
BM_REAL_FN1(sin, mpfr_sin)
BM_REAL_FN1(cos, mpfr_cos)
BM_REAL_FN1(tan, mpfr_tan)
BM_REAL_FN1(sinh, mpfr_sinh)
BM_REAL_FN1(cosh, mpfr_cosh)
BM_REAL_FN1(tanh, mpfr_tanh)
BM_REAL_FN1(atan, mpfr_atan)

#undef BM_REAL_FN1

inline Real floor(const Real& x) {
    Real r(x.prec());
    mpfr_floor(r.get(), x.get());
    return r;
}

inline Real pow_si(const Real& x, long e) {
    Real r(x.prec());
    mpfr_pow_si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}
inline Real pow(const Real& x, const Real& y) {
    Real r(x.prec() >= y.prec() ? x.prec() : y.prec());
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}
inline Real root_ui(const Real& x, unsigned long k) {
    Real r(x.prec());
#if MPFR_VERSION_MAJOR >= 4
    mpfr_rootn_ui(r.get(), x.get(), k, MPFR_RNDN);
#else
    mpfr_root(r.get(), x.get(), k, MPFR_RNDN);
#endif
    return r;
}
inline Real const_pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}
inline Real const_euler(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_euler(r.get(), MPFR_RNDN);
    return r;
}
inline Real ldexp(const Real& x, long e) {
    Real r(x.prec());
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}
inline Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
inline Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

// base-2 exponent of |x|; 0 for x == 0
inline long ilogb2(const Real& x) {
    if (x.is_zero()) return 0;
    return static_cast<long>(mpfr_get_exp(x.get()));
}

// x = m * 10^e with 1 <= |m| < 10, e = floor(log10 |x|)
long decimal_exponent(const Real& x);

// Rendering: round-half-even at `sig_digits` significant figures, scientific
// notation with explicit exponent (e.g. "1.2345678e-01"). MPFR's RNDN
// conversion provides the round-half-even tie rule on the digit string.
std::string render_decimal(const Real& x, int sig_digits);

// Exact serialization: enough digits that parse(serialize(x)) == x bitwise at
// the same precision. Used by the result cache.
std::string serialize_exact(const Real& x);
Real parse_real(const std::string& s, mpfr_prec_t prec);

// 10^{-k} at the given precision
inline Real pow10(long k, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(k >= 0 ? k : -k), MPFR_RNDN);
    if (k < 0) mpfr_si_div(r.get(), 1, r.get(), MPFR_RNDN);
    return r;
}

// Complex value as a real/imaginary pair at shared precision.
struct Complex {
    Real re, im;
    Complex() = default;
    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Real abs2() const { return re * re + im * im; }
};

inline Complex cis(const Real& theta) {  // e^{i theta}
    Complex z(theta.prec());
    mpfr_sin_cos(z.im.get(), z.re.get(), theta.get(), MPFR_RNDN);
    return z;
}
inline Complex cexp(const Complex& z) {  // e^z
    Complex w = cis(z.im);
    Real m = exp(z.re);
    return {w.re * m, w.im * m};
}

}  // namespace bm
