#include "bm/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "bm/mpcore.hpp"

namespace bm {
namespace quad {

namespace {

Real two_pow(long e, mpfr_prec_t prec) {
    Real r(1L, prec);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------- tanh-sinh

// Node j*h of the tanh-sinh rule, stored endpoint-stably: gap = 1 - |x| and
// weight w, so that an abscissa on [a,b] is a + (b-a)/2 * gap (left side) or
// b - (b-a)/2 * gap (right side).
struct TSNode {
    Real gap;
    Real w;
};

struct TSLevel {
    std::vector<TSNode> nodes;  // j = 1, 3, 5, ... for level > base; all j >= 0 at base
};

constexpr int kTsBaseLevel = 3;
constexpr int kTsMaxLevel = 11;

std::map<std::pair<long, int>, TSLevel> g_ts_cache;
std::mutex g_ts_mtx;

const TSLevel& ts_level(mpfr_prec_t prec, int level) {
    std::lock_guard lk(g_ts_mtx);
    auto key = std::make_pair(static_cast<long>(prec), level);
    auto it = g_ts_cache.find(key);
    if (it != g_ts_cache.end()) return it->second;

    TSLevel lv;
    Real pi_half = const_pi(prec) / 2L;
    double h = 1.0 / static_cast<double>(1L << level);
    // drop nodes whose weight cannot contribute at this precision, even
    // against a logarithmically singular factor
    Real cutoff = two_pow(-(static_cast<long>(prec) + 40), prec);
    long j = (level == kTsBaseLevel) ? 0 : 1;
    long step = (level == kTsBaseLevel) ? 1 : 2;
    for (;; j += step) {
        Real u(static_cast<double>(j) * h, prec);
        Real v = pi_half * sinh(u);
        // gap = 1 - tanh(v) = 2 / (e^{2v} + 1)
        Real e2v = exp(v * 2L);
        Real gap = Real(2L, prec) / (e2v + 1L);
        Real ch = cosh(v);
        Real w = pi_half * cosh(u) / (ch * ch);
        if (j > 0 && w < cutoff) break;
        lv.nodes.push_back({gap, w});
        if (j > (1L << level) * 8L) break;
    }
    return g_ts_cache.emplace(key, std::move(lv)).first->second;
}

// ----------------------------------------------------------------- exp-sinh

struct ESNode {
    Real t_off;  // exp((pi/2) sinh(j h)): offset from the left endpoint
    Real w;      // (pi/2) cosh(j h) * t_off
};

struct ESLevel {
    std::vector<ESNode> nodes;  // ordered by j; j from jmin..jmax (level base) or odd j
    long jmin, jmax;
};

std::map<std::tuple<long, int, long, long>, ESLevel> g_es_cache;
std::mutex g_es_mtx;

const ESLevel& es_level(mpfr_prec_t prec, int level, long jmin, long jmax) {
    std::lock_guard lk(g_es_mtx);
    auto key = std::make_tuple(static_cast<long>(prec), level, jmin, jmax);
    auto it = g_es_cache.find(key);
    if (it != g_es_cache.end()) return it->second;

    ESLevel lv;
    lv.jmin = jmin;
    lv.jmax = jmax;
    Real pi_half = const_pi(prec) / 2L;
    double h = 1.0 / static_cast<double>(1L << level);
    bool base = (level == kTsBaseLevel);
    for (long j = jmin; j <= jmax; ++j) {
        if (!base && (j % 2) == 0) continue;
        Real u(static_cast<double>(j) * h, prec);
        Real t_off = exp(pi_half * sinh(u));
        Real w = pi_half * cosh(u) * t_off;
        lv.nodes.push_back({t_off, w});
    }
    return g_es_cache.emplace(key, std::move(lv)).first->second;
}

}  // namespace

Outcome tanh_sinh(const Fn& f, const Real& a, const Real& b, const PrecisionContext& ctx) {
    mpfr_prec_t wp = ctx.bits();
    Real half(wp);
    mpfr_sub(half.get(), b.get(), a.get(), MPFR_RNDN);
    half = half / 2L;
    Real tol = pow10(-(ctx.working_digits() - 2), wp);
    Real sum(0L, wp);
    Real result(0L, wp), prev(0L, wp), err(1L, wp);
    for (int level = kTsBaseLevel; level <= kTsMaxLevel; ++level) {
        const TSLevel& lv = ts_level(wp, level);
        Real lsum(0L, wp);
        bool base = (level == kTsBaseLevel);
        for (size_t i = 0; i < lv.nodes.size(); ++i) {
            const TSNode& nd = lv.nodes[i];
            Real xl = a + half * nd.gap;
            Real contrib = f(xl) * nd.w;
            bool center = base && i == 0;
            if (!center) {
                Real xr = b - half * nd.gap;
                contrib += f(xr) * nd.w;
            }
            lsum += contrib;
        }
        double h = 1.0 / static_cast<double>(1L << level);
        if (base) {
            sum = lsum * Real(h, wp);
        } else {
            sum = sum / 2L + lsum * Real(h, wp);
        }
        result = sum * half;
        if (level > kTsBaseLevel + 1) {
            err = abs(result - prev);
            Real scale = max(Real(1L, wp), abs(result));
            if (err <= tol * scale) return {result, err};
        }
        prev = result;
    }
    Real scale = max(Real(1L, wp), abs(result));
    if (err > pow10(-(ctx.digits + 5), wp) * scale) {
        throw ConvergenceError("tanh_sinh: no level agreement at max refinement");
    }
    return {result, err};
}

Outcome exp_sinh(const Fn& f, const Real& a, const PrecisionContext& ctx,
                 IntegrandSpec::Decay decay, double rate) {
    mpfr_prec_t wp = ctx.bits();
    double bits = static_cast<double>(wp);
    double need = (bits + 20.0) * 0.6931;
    double tmax;
    if (decay == IntegrandSpec::Decay::exponential) {
        tmax = (need + 60.0) / std::max(rate, 1e-3);
    } else {
        // algebraic power p: t^{-p} < 2^{-bits} at t = 2^{bits/p}
        double p = std::max(rate, 1.5);
        tmax = std::exp((need + 60.0) / (p - 1.0) * 1.0);
        tmax = std::min(tmax, 1e300);
    }
    // beyond tmax the declared decay puts |f| below the working noise floor,
    // so nodes are clamped there rather than padded past it
    double umax = std::asinh(std::log(tmax) * 2.0 / 3.14159265);
    double umin = -std::asinh(need * 2.0 / 3.14159265) - 0.6;

    Real tol = pow10(-(ctx.working_digits() - 2), wp);
    Real sum(0L, wp), result(0L, wp), prev(0L, wp), err(1L, wp);
    for (int level = kTsBaseLevel; level <= kTsMaxLevel; ++level) {
        double h = 1.0 / static_cast<double>(1L << level);
        long jmin = static_cast<long>(std::floor(umin / h));
        long jmax = static_cast<long>(std::floor(umax / h));
        const ESLevel& lv = es_level(wp, level, jmin, jmax);
        Real lsum(0L, wp);
        for (const ESNode& nd : lv.nodes) {
            Real t = a + nd.t_off;
            lsum += f(t) * nd.w;
        }
        if (level == kTsBaseLevel) {
            sum = lsum * Real(h, wp);
        } else {
            sum = sum / 2L + lsum * Real(h, wp);
        }
        result = sum;
        if (level > kTsBaseLevel + 1) {
            err = abs(result - prev);
            Real scale = max(Real(1L, wp), abs(result));
            if (err <= tol * scale) return {result, err};
        }
        prev = result;
    }
    Real scale = max(Real(1L, wp), abs(result));
    if (err > pow10(-(ctx.digits + 5), wp) * scale) {
        throw ConvergenceError("exp_sinh: no level agreement at max refinement");
    }
    return {result, err};
}

Real integrate_de(const IntegrandSpec& spec, const PrecisionContext& ctx) {
    if (spec.decay == IntegrandSpec::Decay::oscillatory) {
        throw DomainError("integrate_de: oscillatory integrands need integrate_oscillatory");
    }
    if (spec.decay == IntegrandSpec::Decay::algebraic && spec.rate <= 1.0) {
        throw DomainError("integrate_de: algebraic decay must be faster than 1/t");
    }
    if (spec.debug_check_decay && spec.decay == IntegrandSpec::Decay::exponential) {
        mpfr_prec_t wp = ctx.bits();
        Real f1 = abs(spec.f(Real(1L, wp)));
        Real bound = (f1 + pow10(-ctx.digits, wp)) * Real(8L, wp);
        for (long t : {2L, 4L, 8L}) {
            Real ft = abs(spec.f(Real(t, wp)));
            Real decay_budget = exp(Real(-spec.rate * (t - 1.0), wp));
            if (ft > bound * decay_budget) {
                throw DomainError("integrate_de: misdeclared exponential decay");
            }
        }
    }
    mpfr_prec_t wp = ctx.bits();
    Outcome head = tanh_sinh(spec.f, Real(0L, wp), Real(1L, wp), ctx);
    Outcome tail = exp_sinh(spec.f, Real(1L, wp), ctx, spec.decay, spec.rate);
    return head.value + tail.value;
}

Real gauss_legendre(const Fn& f, const Real& a, const Real& b, int n, mpfr_prec_t prec) {
    static std::map<std::pair<long, int>, std::vector<std::pair<Real, Real>>> cache;
    static std::mutex mtx;
    std::vector<std::pair<Real, Real>> const* nw = nullptr;
    {
        std::lock_guard lk(mtx);
        auto key = std::make_pair(static_cast<long>(prec), n);
        auto it = cache.find(key);
        if (it == cache.end()) {
            // Legendre roots by Newton from Chebyshev initial guesses
            std::vector<std::pair<Real, Real>> v;
            Real tolr = two_pow(-(static_cast<long>(prec) - 6), prec);
            for (int i = 0; i < (n + 1) / 2; ++i) {
                Real x(std::cos(3.14159265358979 * (i + 0.75) / (n + 0.5)), prec);
                for (int it2 = 0; it2 < 200; ++it2) {
                    // evaluate P_n and P_n' by recurrence
                    Real p0(1L, prec), p1 = x;
                    for (int k = 2; k <= n; ++k) {
                        Real p2 = (Real(2 * k - 1, prec) * x * p1 - Real(k - 1, prec) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    Real dp = Real(n, prec) * (x * p1 - p0) / (x * x - 1L);
                    Real dx = p1 / dp;
                    x -= dx;
                    if (abs(dx) < tolr) break;
                }
                Real p0(1L, prec), p1 = x;
                for (int k = 2; k <= n; ++k) {
                    Real p2 = (Real(2 * k - 1, prec) * x * p1 - Real(k - 1, prec) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                Real dp = Real(n, prec) * (x * p1 - p0) / (x * x - 1L);
                Real w = Real(2L, prec) / ((1L - x * x) * dp * dp);
                v.emplace_back(x, w);
            }
            it = cache.emplace(key, std::move(v)).first;
        }
        nw = &it->second;
    }
    Real mid = (a + b) / 2L, half = (b - a) / 2L;
    Real sum(0L, prec);
    bool odd_center = (n % 2) == 1;
    for (size_t i = 0; i < nw->size(); ++i) {
        const auto& [x, w] = (*nw)[i];
        bool center = odd_center && i + 1 == nw->size() && x.to_double() < 1e-12 && x.to_double() > -1e-12;
        sum += f(mid + half * x) * w;
        if (!center) sum += f(mid - half * x) * w;
    }
    return sum * half;
}

Real j0_zero(int k, const PrecisionContext& ctx) {
    static std::map<std::pair<long, int>, Real> cache;
    static std::mutex mtx;
    mpfr_prec_t wp = ctx.bits();
    {
        std::lock_guard lk(mtx);
        auto it = cache.find({static_cast<long>(wp), k});
        if (it != cache.end()) return it->second;
    }
    // McMahon estimate beta + 1/(8b) - 31/(384 b^3), sharpened in double by
    // bisection on sign changes of J0, then polished by two bracketed secant
    // steps at working precision
    double beta = (k - 0.25) * 3.14159265358979323846;
    double x0 = beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta * beta * beta);
    double lo = x0 - 0.05 / k - 1e-4, hi = x0 + 0.05 / k + 1e-4;
    double flo = std::cyl_bessel_j(0.0, lo), fhi = std::cyl_bessel_j(0.0, hi);
    int expand = 0;
    while ((flo > 0) == (fhi > 0)) {
        lo -= 0.1;
        hi += 0.1;
        flo = std::cyl_bessel_j(0.0, lo);
        fhi = std::cyl_bessel_j(0.0, hi);
        if (++expand > 8) throw ConvergenceError("j0_zero: failed to bracket");
    }
    for (int it = 0; it < 80 && hi - lo > 4e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = std::cyl_bessel_j(0.0, mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    auto j0 = [&](const Real& t) {
        Real j;
        detail::bessel_j0y0(t, wp, &j, nullptr);
        return j;
    };
    Real a(0.5 * (lo + hi) - 2e-13, wp), b(0.5 * (lo + hi) + 2e-13, wp);
    Real fa = j0(a), fb = j0(b);
    for (int it = 0; it < 6; ++it) {
        Real c = (a * fb - b * fa) / (fb - fa);
        Real fc = j0(c);
        if (fc.is_zero()) {
            b = c;
            break;
        }
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        if (abs(a - b) < pow10(-(ctx.working_digits() + 4), wp) * b) break;
    }
    std::lock_guard lk(mtx);
    return cache.emplace(std::make_pair(static_cast<long>(wp), k), b).first->second;
}

Real accelerate_alternating(const std::vector<Real>& s, Real* err_out) {
    // iterated averaging table; deepest diagonal with the previous one as the
    // error gauge
    std::vector<Real> row = s;
    Real last = row.back();
    Real prev_diag = last;
    while (row.size() > 1) {
        for (size_t i = 0; i + 1 < row.size(); ++i) row[i] = (row[i] + row[i + 1]) / 2L;
        row.pop_back();
        prev_diag = last;
        last = row.back();
    }
    if (err_out) *err_out = abs(last - prev_diag);
    return last;
}

Real accelerate_smooth(const std::vector<Real>& s, long first_index, Real* err_out) {
    // Neville extrapolation of s_N at 1/N -> 0 over the trailing window
    size_t n = s.size();
    size_t use = n < 30 ? n : 30;
    size_t lo = n - use;
    mpfr_prec_t wp = s[0].prec();
    auto extrapolate = [&](size_t lo2, size_t hi) {
        std::vector<Real> xs, tab;
        for (size_t i = lo2; i < hi; ++i) {
            xs.push_back(Real(1L, wp) / Real(first_index + static_cast<long>(i) + 1, wp));
            tab.push_back(s[i]);
        }
        size_t m = tab.size();
        for (size_t j = 1; j < m; ++j) {
            for (size_t i = m - 1; i >= j; --i) {
                tab[i] = tab[i] + (tab[i] - tab[i - 1]) * xs[i] / (xs[i - j] - xs[i]);
                if (i == j) break;
            }
        }
        return tab[m - 1];
    };
    Real full = extrapolate(lo, n);
    Real drop = extrapolate(lo, n - 1);
    if (err_out) *err_out = abs(full - drop);
    return full;
}

Real integrate_oscillatory(const IntegrandSpec& spec, const std::vector<Real>& split_points,
                           const PrecisionContext& ctx) {
    if (split_points.size() < 34) {
        throw DomainError("integrate_oscillatory: need at least 33 panels of split points");
    }
    mpfr_prec_t wp = ctx.bits();
    int gl_n = std::max(24, static_cast<int>(0.62 * ctx.working_digits()));
    Real tol = pow10(-(ctx.digits + 3), wp);

    // locate the panel where DC subtraction starts
    size_t i0 = 0;
    bool has_dc = static_cast<bool>(spec.dc);
    if (has_dc) {
        while (i0 < split_points.size() && split_points[i0].to_double() < spec.dc_from) ++i0;
        if (i0 + 34 > split_points.size()) {
            throw DomainError("integrate_oscillatory: not enough split points beyond dc_from");
        }
    }

    // head: (0, s_0) with a sub-split at 1 for the log singularity
    Real base(0L, wp);
    {
        const Real& s0 = split_points[0];
        if (s0 > Real(1L, wp)) {
            base += tanh_sinh(spec.f, Real(0L, wp), Real(1L, wp), ctx).value;
            base += tanh_sinh(spec.f, Real(1L, wp), s0, ctx).value;
        } else {
            base += tanh_sinh(spec.f, Real(0L, wp), s0, ctx).value;
        }
    }
    // plain panels before the accelerated region
    for (size_t i = 0; i < i0; ++i) {
        base += gauss_legendre(spec.f, split_points[i], split_points[i + 1], gl_n, wp);
    }
    if (has_dc) base += spec.dc_tail(split_points[i0]);

    Fn panel_f = spec.f;
    if (has_dc) {
        panel_f = [&spec](const Real& t) { return spec.f(t) - spec.dc(t); };
    }

    std::vector<Real> partial;
    Real running = base;
    size_t max_panels = split_points.size() - 1 - i0;
    size_t stage = 32;
    Real best(0L, wp), best_err(1L, wp);
    Real prev_best(0L, wp);
    bool have_prev = false;
    while (true) {
        while (partial.size() < stage && partial.size() < max_panels) {
            size_t i = i0 + partial.size();
            running += gauss_legendre(panel_f, split_points[i], split_points[i + 1], gl_n, wp);
            partial.push_back(running);
        }
        Real accel_err(wp);
        if (spec.tail_sums == IntegrandSpec::TailSums::alternating) {
            best = accelerate_alternating(partial, &accel_err);
        } else {
            best = accelerate_smooth(partial, static_cast<long>(i0), &accel_err);
        }
        best_err = accel_err;
        Real scale = max(Real(1L, wp), abs(best));
        if (have_prev && abs(best - prev_best) <= tol * scale && best_err <= tol * scale * 16L) {
            return best;
        }
        if (partial.size() >= max_panels || partial.size() >= 4096) {
            if (best_err <= tol * scale * 1000L) return best;  // marginal but honest
            throw ConvergenceError("integrate_oscillatory: acceleration stalled");
        }
        prev_best = best;
        have_prev = true;
        stage = stage + stage / 2;
    }
}

Outcome differentiate_param(const Fn& F, const Real& u0, int order, DiffMode mode,
                            const PrecisionContext& ctx,
                            const std::function<Real(const Real&, int)>& analytic_chain) {
    if (order < 0 || order > 4) throw DomainError("differentiate_param: order must be 1..4");
    mpfr_prec_t wp = ctx.bits();
    if (mode == DiffMode::analytic) {
        if (!analytic_chain) throw DomainError("differentiate_param: analytic mode needs a chain");
        return {analytic_chain(u0, order), pow10(-(ctx.digits), wp)};
    }
    int dexp = ctx.digits / (order + 2);
    Real h = pow10(-dexp, wp);
    if (h < abs(u0) * two_pow(-(static_cast<long>(wp) - 24), wp)) {
        throw DomainError("differentiate_param: step underflow at this context");
    }
    auto stencil = [&](const Real& step) {
        switch (order) {
            case 1:
                return (F(u0 + step) - F(u0 - step)) / (step * 2L);
            case 2:
                return (F(u0 + step) - F(u0) * 2L + F(u0 - step)) / (step * step);
            case 3:
                return (F(u0 + step * 2L) - F(u0 + step) * 2L + F(u0 - step) * 2L -
                        F(u0 - step * 2L)) /
                       (pow_si(step, 3) * 2L);
            default:
                return (F(u0 + step * 2L) - F(u0 + step) * 4L + F(u0) * 6L - F(u0 - step) * 4L +
                        F(u0 - step * 2L)) /
                       pow_si(step, 4);
        }
    };
    Real d_h = stencil(h);
    Real d_2h = stencil(h * 2L);
    Real value = (d_h * 4L - d_2h) / 3L;  // Richardson for the h^2 error term
    Real err = abs(d_h - d_2h) / 3L + abs(value) * pow10(-(ctx.working_digits() - 2), wp);
    return {value, err};
}

}  // namespace quad
}  // namespace bm
