#include "bm/moments.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "bm/mpcore.hpp"
#include "bm/quad.hpp"

namespace bm {
namespace moments {

namespace {

std::mutex g_cache_mtx;
std::map<std::tuple<int, int, int, long>, Real> g_mem_cache;
std::function<bool(const std::string&, std::string*)> g_ext_get;
std::function<void(const std::string&, const std::string&)> g_ext_put;

Real ikm_integrand(int a, int b, int n, const Real& t, mpfr_prec_t wp) {
    Real v(1L, wp);
    if (a > 0) v *= pow_si(detail::bessel_i0(t, wp), a);
    if (b > 0) v *= pow_si(detail::bessel_k0(t, wp), b);
    if (n > 0) v *= pow_si(t, n);
    return v;
}

// sigma coefficients of S(z)^m (the even-order rationals of the Hankel
// product z^m (pi/2)^{-m} normalization): sigma[k] multiplies z^{-k}
std::vector<mpq_class> sigma_series(int m, int order) {
    RationalSeries h = hankel_product_series(m, order + 1);
    mpz_class p2(1);
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), static_cast<unsigned long>(m));
    std::vector<mpq_class> out(static_cast<size_t>(order + 1));
    for (int k = 0; k <= order; ++k) {
        out[static_cast<size_t>(k)] = h.at(m + k) * mpq_class(p2);
        out[static_cast<size_t>(k)].canonicalize();
    }
    return out;
}

// tail integral int_T^inf 2^{-a} S^a(t) t^{n-a} dt by termwise integration,
// truncated at the smallest term; returns value and the first omitted term
// as the error gauge
Real aa_tail(int a, int n, const Real& T, mpfr_prec_t wp, Real* err_out) {
    int order = 2 * static_cast<int>(T.to_double()) + 8;
    std::vector<mpq_class> sig = sigma_series(a, order);
    Real total(0L, wp);
    Real last_mag(wp);
    bool have_last = false;
    Real err(0L, wp);
    for (int k = 0; k <= order; k += 2) {
        long denom = a + k - n - 1;  // positive by the n <= a-2 precondition
        Real term = to_real(sig[static_cast<size_t>(k)], wp) * pow_si(T, n - a - k + 1) / denom;
        Real mag = abs(term);
        if (have_last && mag > last_mag) {
            err = mag;  // asymptotic turning point: stop before it
            break;
        }
        total += term;
        last_mag = mag;
        have_last = true;
        err = mag;
    }
    mpz_class p2(1);
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), static_cast<unsigned long>(a));
    if (err_out) *err_out = err / to_real(mpq_class(p2), wp);
    return total / to_real(mpq_class(p2), wp);
}

Real ikm_uncached(int a, int b, int n, const PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.bits();
    if (a < 0 || b < 0 || n < 0) throw DomainError("ikm: indices must be non-negative");
    if (b < a) throw DomainError("ikm: divergent, needs b >= a");
    if (a == b) {
        if (n > a - 2) throw DomainError("ikm: divergent a = b moment (needs n <= a-2)");
        Real T(std::max(20.0, 1.2 * ctx.working_digits()), wp);
        auto f = [&](const Real& t) { return ikm_integrand(a, b, n, t, wp); };
        Real head = quad::tanh_sinh(f, Real(0L, wp), Real(1L, wp), ctx).value +
                    quad::tanh_sinh(f, Real(1L, wp), T, ctx).value;
        Real tail_err(wp);
        Real tail = aa_tail(a, n, T, wp, &tail_err);
        Real tol = pow10(-(ctx.digits + 5), wp) * max(Real(1L, wp), abs(head + tail));
        if (tail_err > tol) {
            // increase the split once before failing
            T = T * Real(1.5, wp);
            head = quad::tanh_sinh(f, Real(0L, wp), Real(1L, wp), ctx).value +
                   quad::tanh_sinh(f, Real(1L, wp), T, ctx).value;
            tail = aa_tail(a, n, T, wp, &tail_err);
            if (tail_err > tol) {
                throw ConvergenceError("ikm: asymptotic tail cannot reach tolerance");
            }
        }
        return head + tail;
    }
    quad::IntegrandSpec spec;
    spec.f = [=](const Real& t) { return ikm_integrand(a, b, n, t, wp); };
    spec.singularity = b > 0 ? quad::IntegrandSpec::Sing::log_at_zero
                             : quad::IntegrandSpec::Sing::none;
    spec.decay = quad::IntegrandSpec::Decay::exponential;
    spec.rate = static_cast<double>(b - a);
    return quad::integrate_de(spec, ctx);
}

}  // namespace

void set_cache_hooks(std::function<bool(const std::string&, std::string*)> get,
                     std::function<void(const std::string&, const std::string&)> put) {
    std::lock_guard lk(g_cache_mtx);
    g_ext_get = std::move(get);
    g_ext_put = std::move(put);
}

void clear_memory_cache() {
    std::lock_guard lk(g_cache_mtx);
    g_mem_cache.clear();
}

Real ikm(int a, int b, int n, const PrecisionContext& ctx) {
    auto key = std::make_tuple(a, b, n, static_cast<long>(ctx.bits()));
    {
        std::lock_guard lk(g_cache_mtx);
        auto it = g_mem_cache.find(key);
        if (it != g_mem_cache.end()) return it->second;
    }
    std::string ext_key = "ikm|" + std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(n) + "|" + std::to_string(static_cast<long>(ctx.bits()));
    std::function<bool(const std::string&, std::string*)> ext_get;
    std::function<void(const std::string&, const std::string&)> ext_put;
    {
        std::lock_guard lk(g_cache_mtx);
        ext_get = g_ext_get;
        ext_put = g_ext_put;
    }
    std::string stored;
    if (ext_get && ext_get(ext_key, &stored)) {
        Real v = parse_real(stored, ctx.bits());
        std::lock_guard lk(g_cache_mtx);
        g_mem_cache.emplace(key, v);
        return v;
    }
    Real v = ikm_uncached(a, b, n, ctx);
    {
        std::lock_guard lk(g_cache_mtx);
        g_mem_cache.emplace(key, v);
    }
    if (ext_put) ext_put(ext_key, serialize_exact(v));
    return v;
}

namespace {

// average over theta of (A cos - B sin)^alpha (A sin + B cos)^beta as a
// polynomial in A, B: returns poly[i][j] for A^i B^j (exact rationals)
std::map<std::pair<int, int>, mpq_class> trig_average_poly(int alpha, int beta) {
    auto dfact = [](long n) {  // (n)!! with (-1)!! = 1
        mpz_class r(1);
        for (long v = n; v > 1; v -= 2) r *= v;
        return r;
    };
    std::map<std::pair<int, int>, mpq_class> poly;
    for (int i = 0; i <= alpha; ++i) {
        for (int j = 0; j <= beta; ++j) {
            int p = i + (beta - j);  // cos power
            int q = (alpha - i) + j; // sin power
            if (p % 2 != 0 || q % 2 != 0) continue;
            mpz_class bc1, bc2;
            mpz_bin_uiui(bc1.get_mpz_t(), static_cast<unsigned long>(alpha),
                         static_cast<unsigned long>(i));
            mpz_bin_uiui(bc2.get_mpz_t(), static_cast<unsigned long>(beta),
                         static_cast<unsigned long>(j));
            mpq_class coef = mpq_class(bc1 * bc2);
            if ((alpha - i) % 2 != 0) coef = -coef;
            // mean of cos^p sin^q over a period
            mpq_class avg(dfact(p - 1) * dfact(q - 1), dfact(p + q));
            avg.canonicalize();
            coef *= avg;
            int ai = i + j, bi = (alpha - i) + (beta - j);
            poly[{ai, bi}] += coef;
        }
    }
    return poly;
}

// c_n = [(2n)!]^2/(16^n (n!)^3) of the Hankel asymptotic factor series
std::vector<mpq_class> hankel_c(int order) {
    std::vector<mpq_class> c(static_cast<size_t>(order + 1));
    c[0] = 1;
    mpz_class f2n(1), fn(1), p16(1);
    for (long n = 1; n <= order; ++n) {
        f2n *= (2 * n - 1) * 2 * n;
        fn *= n;
        p16 *= 16;
        c[static_cast<size_t>(n)] = mpq_class(f2n * f2n) / mpq_class(p16 * fn * fn * fn);
        c[static_cast<size_t>(n)].canonicalize();
    }
    return c;
}

using QSeries = std::vector<mpq_class>;  // coefficients of t^{-k}, k = 0..order

QSeries qseries_mul(const QSeries& x, const QSeries& y, int order) {
    QSeries r(static_cast<size_t>(order + 1));
    for (size_t i = 0; i < x.size() && i <= static_cast<size_t>(order); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; i + j <= static_cast<size_t>(order) && j < y.size(); ++j) {
            if (y[j] == 0) continue;
            r[i + j] += x[i] * y[j];
        }
    }
    return r;
}

QSeries qseries_pow(const QSeries& x, int e, int order) {
    QSeries r(static_cast<size_t>(order + 1));
    r[0] = 1;
    for (int rep = 0; rep < e; ++rep) r = qseries_mul(r, x, order);
    return r;
}

// DC component of J0^alpha Y0^beta t^n beyond large t, as exact rationals:
// DC(t) = (2/pi)^{m/2} sum_k dc[k] t^{n - m/2 - k}
QSeries jym_dc_series(int alpha, int beta, int order) {
    std::vector<mpq_class> c = hankel_c(order);
    QSeries A(static_cast<size_t>(order + 1)), B(static_cast<size_t>(order + 1));
    // A = sum_{even k} (-1)^{k/2} c_k (2t)^{-k}, B = sum_{odd k} (-1)^{(k+1)/2} c_k (2t)^{-k}
    mpz_class p2(1);
    for (int k = 0; k <= order; ++k) {
        mpq_class v = c[static_cast<size_t>(k)] / mpq_class(p2);
        v.canonicalize();
        if (k % 2 == 0) {
            if ((k / 2) % 2 != 0) v = -v;
            A[static_cast<size_t>(k)] = v;
        } else {
            if (((k + 1) / 2) % 2 != 0) v = -v;
            B[static_cast<size_t>(k)] = v;
        }
        p2 *= 2;
    }
    auto poly = trig_average_poly(alpha, beta);
    QSeries dc(static_cast<size_t>(order + 1));
    for (const auto& [idx, coef] : poly) {
        if (coef == 0) continue;
        QSeries term = qseries_mul(qseries_pow(A, idx.first, order),
                                   qseries_pow(B, idx.second, order), order);
        for (size_t k = 0; k < term.size(); ++k) dc[k] += coef * term[k];
    }
    return dc;
}

}  // namespace

Real jym(int alpha, int beta, int n, const PrecisionContext& ctx) {
    if (alpha < 0 || beta < 0 || n < 0) throw DomainError("jym: indices must be non-negative");
    int m = alpha + beta;
    if (m < 1) throw DomainError("jym: empty integrand");
    double decay_exp = m / 2.0 - n;
    bool even = (m % 2 == 0);
    if (even && decay_exp <= 1.0) {
        throw DomainError("jym: divergent (non-oscillatory tail component)");
    }
    if (!even && decay_exp <= 0.0) {
        throw DomainError("jym: divergent tail");
    }
    // 30-digit default cap for the oscillatory class
    PrecisionContext jctx(std::min(ctx.digits, 30), ctx.guard);
    mpfr_prec_t wp = jctx.bits();

    auto key = std::make_tuple(1000 + alpha, beta, n, static_cast<long>(wp));
    {
        std::lock_guard lk(g_cache_mtx);
        auto it = g_mem_cache.find(key);
        if (it != g_mem_cache.end()) return it->second;
    }

    quad::IntegrandSpec spec;
    spec.f = [=](const Real& t) {
        Real jv, yv;
        detail::bessel_j0y0(t, wp, alpha > 0 ? &jv : nullptr, beta > 0 ? &yv : nullptr);
        Real v(1L, wp);
        if (alpha > 0) v *= pow_si(jv, alpha);
        if (beta > 0) v *= pow_si(yv, beta);
        if (n > 0) v *= pow_si(t, n);
        return v;
    };
    spec.singularity = beta > 0 ? quad::IntegrandSpec::Sing::log_at_zero
                                : quad::IntegrandSpec::Sing::none;
    spec.decay = quad::IntegrandSpec::Decay::oscillatory;
    spec.rate = static_cast<double>(m);

    size_t zero_count;
    if (even) {
        double t_dc = std::max(45.0, 0.62 * (jctx.working_digits() + 10));
        int order = 2 * static_cast<int>(t_dc) + 10;
        QSeries dc = jym_dc_series(alpha, beta, order);
        Real pref = pow(Real(2L, wp) / const_pi(wp), Real(m, wp) / 2L);
        auto dc_terms = std::make_shared<std::vector<std::pair<long, Real>>>();
        for (size_t k = 0; k < dc.size(); ++k) {
            if (dc[k] == 0) continue;
            dc_terms->emplace_back(static_cast<long>(n) - m / 2 - static_cast<long>(k),
                                   pref * to_real(dc[k], wp));
        }
        spec.dc = [dc_terms, wp](const Real& t) {
            Real v(0L, wp);
            for (const auto& [e, cf] : *dc_terms) v += cf * pow_si(t, e);
            return v;
        };
        spec.dc_tail = [dc_terms, wp](const Real& T) {
            // truncate the asymptotic tail at its smallest term
            Real v(0L, wp);
            Real last(wp);
            bool have = false;
            for (const auto& [e, cf] : *dc_terms) {
                // integral of t^e from T: -T^{e+1}/(e+1), e < -1 throughout
                Real term = -(cf * pow_si(T, e + 1)) / (e + 1);
                if (have && abs(term) > last) break;
                v += term;
                last = abs(term);
                have = true;
            }
            return v;
        };
        spec.dc_from = t_dc;
        spec.tail_sums = quad::IntegrandSpec::TailSums::smooth;
        zero_count = static_cast<size_t>(t_dc / 3.14159) + 100;
    } else {
        spec.tail_sums = quad::IntegrandSpec::TailSums::alternating;
        zero_count = static_cast<size_t>(32 + 5 * jctx.digits);
    }
    std::vector<Real> splits;
    splits.reserve(zero_count);
    for (size_t k = 1; k <= zero_count; ++k) {
        splits.push_back(quad::j0_zero(static_cast<int>(k), jctx));
    }
    Real v = quad::integrate_oscillatory(spec, splits, jctx);
    std::lock_guard lk(g_cache_mtx);
    g_mem_cache.emplace(key, v);
    return v;
}

Real sum_rule_residual(SumRuleVariant v, int m, int n, const PrecisionContext& ctx,
                       Real* scale_out) {
    if (n < 0) throw DomainError("sum_rule_residual: n must be >= 0");
    if (v == SumRuleVariant::plus) {
        if (!(m > 1 && (m - n) > 0 && (m - n) % 2 == 0)) {
            throw DomainError("sum_rule_residual: (m-n)/2 must be a positive integer");
        }
    } else {
        if (!(m > 0 && (m - n - 1) > 0 && (m - n - 1) % 2 == 0)) {
            throw DomainError("sum_rule_residual: (m-n-1)/2 must be a positive integer");
        }
    }
    mpfr_prec_t wp = ctx.bits();
    Real pi = const_pi(wp);
    Real total(0L, wp), scale(0L, wp);
    int j0 = (v == SumRuleVariant::plus) ? 0 : 1;
    for (int j = j0; j <= m; j += 2) {
        mpz_class bc;
        mpz_bin_uiui(bc.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(j));
        int s = (v == SumRuleVariant::plus) ? ((j / 2) % 2 ? -1 : 1)
                                            : (((j - 1) / 2) % 2 ? -1 : 1);
        Real term = to_real(mpq_class(bc), wp) * pow_si(pi, m - j) * ikm(m - j, m + j, n, ctx);
        if (s < 0) term = -term;
        total += term;
        scale = max(scale, abs(term));
    }
    if (scale_out) *scale_out = scale;
    return total;
}

Real crandall_numeric(int m, int n, const PrecisionContext& ctx) {
    if (m < 1 || n < 1) throw DomainError("crandall: m, n >= 1");
    mpfr_prec_t wp = ctx.bits();
    Real pi = const_pi(wp);
    int weight = 2 * n + m - 3;
    Real total(0L, wp);
    for (int j = 1; j <= m; j += 2) {
        mpz_class bc;
        mpz_bin_uiui(bc.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(j));
        int s = ((j - 1) / 2) % 2 ? -1 : 1;
        Real term = to_real(mpq_class(bc), wp) * pow_si(pi, m - j) * ikm(m - j, m + j, weight, ctx);
        total += (s < 0) ? -term : term;
    }
    // prefactor 2^{1+2(n-1)} for odd m, 2 for even m, times the 2^{weight}
    // from (2t)^{weight} and the expansion factor 2, over pi^{m+1}
    long p2 = 1 + weight + 1 + ((m % 2 == 1) ? 2 * (n - 1) : 0);
    return ldexp(total, p2) / pow_si(pi, m + 1);
}

mpq_class crandall_exact(int m, int n) {
    if (m < 1 || n < 1) throw DomainError("crandall: m, n >= 1");
    RationalSeries h = hankel_product_series(m, 2 * n - 1);
    mpq_class stored = h.at(m + 2 * (n - 1));
    long p2 = (m % 2 == 1) ? (4 * n + m - 4) : (2 * n + m - 2);
    mpz_class scale(1);
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(p2));
    mpq_class out = stored * mpq_class(scale);
    if (n % 2 == 0) out = -out;  // (-1)^{n+1}
    out.canonicalize();
    return out;
}

Real crandall_a(int n, const PrecisionContext& ctx) {
    if (n < 1) throw DomainError("crandall_a: n >= 1");
    mpfr_prec_t wp = ctx.bits();
    Real pi = const_pi(wp);
    Real diff = pi * pi * ikm(3, 5, 2 * n - 1, ctx) - ikm(1, 7, 2 * n - 1, ctx);
    return ldexp(diff, 4 + 2 * n - 1) / pow_si(pi, 4);
}

bool rogers_check(int L, long* first_mismatch) {
    if (L < 1) throw DomainError("rogers_check: L >= 1");
    // alpha_l = C_{2,l}
    std::vector<mpq_class> alpha(static_cast<size_t>(L + 2));
    for (int l = 1; l <= L + 1; ++l) alpha[static_cast<size_t>(l)] = crandall_exact(2, l);
    // lhs coefficients of u^l
    std::vector<mpq_class> lhs(static_cast<size_t>(L + 1));
    mpz_class fact(1);
    for (long l = 1; l <= L; ++l) {
        fact *= l;
        mpq_class num = alpha[static_cast<size_t>(l + 1)] - mpq_class(l * l) * alpha[static_cast<size_t>(l)];
        lhs[static_cast<size_t>(l)] = num / mpq_class(fact * fact);
        lhs[static_cast<size_t>(l)].canonicalize();
    }
    // rhs: 3 sum_n [(2n-1)!!]^2 C(3n-1,2n) u^{2n}/((n! 2^n)^2 (1-u)^{3n})
    std::vector<mpq_class> rhs(static_cast<size_t>(L + 1));
    mpz_class nfact(1);
    for (long nn = 1; 2 * nn <= L; ++nn) {
        nfact *= nn;
        mpz_class df(1);
        for (long v = 2 * nn - 1; v > 1; v -= 2) df *= v;
        mpz_class bc;
        mpz_bin_uiui(bc.get_mpz_t(), static_cast<unsigned long>(3 * nn - 1),
                     static_cast<unsigned long>(2 * nn));
        mpz_class den = nfact;
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(nn));
        mpq_class front = mpq_class(3 * df * df * bc) / mpq_class(den * den);
        front.canonicalize();
        // (1-u)^{-3n} = sum_j C(3n+j-1, j) u^j
        for (long j = 0; 2 * nn + j <= L; ++j) {
            mpz_class bc2;
            mpz_bin_uiui(bc2.get_mpz_t(), static_cast<unsigned long>(3 * nn + j - 1),
                         static_cast<unsigned long>(j));
            rhs[static_cast<size_t>(2 * nn + j)] += front * mpq_class(bc2);
        }
    }
    for (long l = 1; l <= L; ++l) {
        if (lhs[static_cast<size_t>(l)] != rhs[static_cast<size_t>(l)]) {
            if (first_mismatch) *first_mismatch = l;
            return false;
        }
    }
    return true;
}

Real closed_constant(const ClosedConstantId& id, const PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.bits();
    Real pi = const_pi(wp);
    switch (id.kind) {
        case ClosedConstantId::Kind::BolognaC: {
            auto g = [&](long num) {
                return gamma_real(Real(num, wp) / 15L, ctx);
            };
            return g(1) * g(2) * g(4) * g(8) / (Real(240L, wp) * sqrt(Real(5L, wp)) * pi * pi);
        }
        case ClosedConstantId::Kind::detM: {
            int k = id.index;
            if (k < 1) throw DomainError("detM: k >= 1");
            Real r(1L, wp);
            for (int j = 1; j <= k; ++j) {
                Real numer = pow_si(Real(2L * j, wp), k - j) * pow_si(pi, j);
                Real denom = sqrt(pow_si(Real(2L * j + 1, wp), 2 * j + 1));
                r *= numer / denom;
            }
            return r;
        }
        case ClosedConstantId::Kind::detN: {
            int k = id.index;
            if (k < 1) throw DomainError("detN: k >= 1");
            Real r = Real(2L, wp) * pow(pi, Real((k + 1) * (k + 1), wp) / 2L) /
                     gamma_real(Real(k + 1, wp) / 2L, ctx);
            for (int j = 1; j <= k + 1; ++j) {
                r *= pow_si(Real(2L * j - 1, wp), k + 1 - j) / pow_si(Real(2L * j, wp), j);
            }
            return r;
        }
        case ClosedConstantId::Kind::C1: {
            int l = id.index;
            mpz_class df(1);
            for (long v = 2 * l - 3; v > 1; v -= 2) df *= v;
            mpz_class bc;
            mpz_bin_uiui(bc.get_mpz_t(), static_cast<unsigned long>(2 * l - 2),
                         static_cast<unsigned long>(l - 1));
            return to_real(mpq_class(df * df * bc), wp);
        }
        case ClosedConstantId::Kind::C2: {
            int l = id.index;
            mpq_class tot(0);
            auto cube_fact = [](long v) {
                mpz_class f(1);
                for (long i = 2; i <= v; ++i) f *= i;
                return mpz_class(f * f * f);
            };
            auto fourth_fact = [](long v) {
                mpz_class f(1);
                for (long i = 2; i <= v; ++i) f *= i;
                mpz_class f2 = f * f;
                return mpz_class(f2 * f2);
            };
            for (long kk = 1; kk <= l; ++kk) {
                mpq_class t1(cube_fact(2 * (l - kk)), fourth_fact(l - kk));
                mpq_class t2(cube_fact(2 * (kk - 1)), fourth_fact(kk - 1));
                t1.canonicalize();
                t2.canonicalize();
                tot += t1 * t2;
            }
            mpz_class den(1);
            mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(4 * (l - 1)));
            tot /= mpq_class(den);
            tot.canonicalize();
            return to_real(tot, wp);
        }
    }
    throw DomainError("closed_constant: bad id");
}

Real laporta_subtracted_integral(const PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.bits();
    auto g = [&](const Real& t) {
        Real i0 = detail::bessel_i0(t, wp);
        Real k0 = detail::bessel_k0(t, wp);
        Real ik = i0 * k0;
        return pow_si(ik, 3) * pow_si(t, 3) - ik * t / 4L;
    };
    Real T(std::max(20.0, 1.2 * ctx.working_digits()), wp);
    Real head = quad::tanh_sinh(g, Real(0L, wp), Real(1L, wp), ctx).value +
                quad::tanh_sinh(g, Real(1L, wp), T, ctx).value;
    // tail: (1/8) sum_{k>=2} (sigma3_k - sigma1_k) T^{1-k}/(k-1)
    int order = 2 * static_cast<int>(T.to_double()) + 8;
    std::vector<mpq_class> s3 = sigma_series(3, order);
    std::vector<mpq_class> s1 = sigma_series(1, order);
    Real tail(0L, wp);
    Real last(wp);
    bool have = false;
    for (int k = 2; k <= order; k += 2) {
        mpq_class d = s3[static_cast<size_t>(k)] - s1[static_cast<size_t>(k)];
        Real term = to_real(d, wp) * pow_si(T, 1 - k) / (k - 1);
        if (have && abs(term) > last) break;
        tail += term;
        last = abs(term);
        have = true;
    }
    return head + tail / 8L;
}

}  // namespace moments
}  // namespace bm
