#pragma once

#include <functional>
#include <vector>

#include "bm/prec.hpp"

namespace bm {
namespace quad {

using Fn = std::function<Real(const Real&)>;

// Declares what the caller knows about an integrand on (0, inf). decay must
// honestly describe the tail; with debug_check_decay set, exponential decay
// claims are spot-sampled and a misdeclared-decay error raised on violation.
struct IntegrandSpec {
    Fn f;
    enum class Sing { none, log_at_zero };
    Sing singularity = Sing::none;
    enum class Decay { exponential, algebraic, oscillatory };
    Decay decay = Decay::exponential;
    double rate = 1.0;  // e-folding rate, |power|, or dominant frequency
    bool debug_check_decay = false;

    // Oscillatory integrands with a non-oscillating tail component: dc(t)
    // evaluates that component (valid for t >= dc_from) and dc_tail(T) is its
    // exact integral over (T, inf). Panel sums beyond dc_from are then purely
    // oscillatory.
    Fn dc;
    Fn dc_tail;
    double dc_from = 0.0;
    enum class TailSums { alternating, smooth };
    TailSums tail_sums = TailSums::alternating;
};

struct Outcome {
    Real value;
    Real err;
};

// tanh-sinh on a finite interval; endpoint singularities up to logarithmic
Outcome tanh_sinh(const Fn& f, const Real& a, const Real& b, const PrecisionContext& ctx);

// exp-sinh on (a, inf) for integrands with exponential or algebraic decay
Outcome exp_sinh(const Fn& f, const Real& a, const PrecisionContext& ctx,
                 IntegrandSpec::Decay decay, double rate);

// (0, inf): tanh-sinh head + exp-sinh tail, split at t = 1
Real integrate_de(const IntegrandSpec& spec, const PrecisionContext& ctx);

// (0, inf) with oscillatory tail: head by DE segments, tail as accelerated
// partial sums over inter-zero panels
Real integrate_oscillatory(const IntegrandSpec& spec, const std::vector<Real>& split_points,
                           const PrecisionContext& ctx);

// fixed-order Gauss-Legendre on [a, b] (panel integrator)
Real gauss_legendre(const Fn& f, const Real& a, const Real& b, int n, mpfr_prec_t prec);

// k-th positive zero of J0 (1-based): McMahon estimate refined by bracketed
// secant iterations on sign changes of J0
Real j0_zero(int k, const PrecisionContext& ctx);

enum class DiffMode { finite_difference, analytic };

// d^order F / du^order at u0. Finite differences use central stencils with
// step h = 10^{-digits/(order+2)} plus one Richardson level; the degraded
// accuracy estimate is attached. Analytic mode forwards to the caller's
// derivative chain.
Outcome differentiate_param(const Fn& F, const Real& u0, int order, DiffMode mode,
                            const PrecisionContext& ctx,
                            const std::function<Real(const Real&, int)>& analytic_chain = {});

// acceleration helpers (exposed for tests)
Real accelerate_alternating(const std::vector<Real>& partial_sums, Real* err_out);
Real accelerate_smooth(const std::vector<Real>& partial_sums, long first_index, Real* err_out);

}  // namespace quad
}  // namespace bm
