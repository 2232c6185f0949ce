#pragma once

#include <gmpxx.h>

#include <functional>

#include "bm/prec.hpp"
#include "bm/series.hpp"

namespace bm {
namespace moments {

// IKM(a,b;n) = int_0^inf I0^a K0^b t^n dt. Requires b > a, or a = b with
// n <= a-2 (the a = b tail is integrated termwise from the exact Hankel
// product expansion beyond a split point).
Real ikm(int a, int b, int n, const PrecisionContext& ctx);

// JYM(alpha,beta;n) = int_0^inf J0^alpha Y0^beta t^n dt by zero-partitioned
// panel sums with acceleration; 30-digit default target (precision is capped
// at 30 digits unless the context asks for less).
Real jym(int alpha, int beta, int n, const PrecisionContext& ctx);

enum class SumRuleVariant { plus, minus };

// Residual of the generalized sum rules, expanded over I0^j K0^m monomials
// with exact integer coefficients and symbolic pi powers. `scale_out`, when
// non-null, receives the largest |term| for relative normalization.
Real sum_rule_residual(SumRuleVariant v, int m, int n, const PrecisionContext& ctx,
                       Real* scale_out = nullptr);

// C_{m,n} via the moment integral (numeric) and via the Hankel product
// asymptotics (exact rational, expected a positive integer).
Real crandall_numeric(int m, int n, const PrecisionContext& ctx);
mpq_class crandall_exact(int m, int n);

// A(n) of the m = 4 Crandall family
Real crandall_a(int n, const PrecisionContext& ctx);

// exact coefficient comparison of the Rogers series identity through order
// u^L; on mismatch returns false and reports the first failing index
bool rogers_check(int L, long* first_mismatch = nullptr);

struct ClosedConstantId {
    enum class Kind { BolognaC, detM, detN, C1, C2 };
    Kind kind;
    int index = 0;  // k for detM/detN, ell for C1/C2
};

Real closed_constant(const ClosedConstantId& id, const PrecisionContext& ctx);

// int_0^inf I0 K0 (I0^2 K0^2 - 1/(4t^2)) t^3 dt; algebraic-tail companion of
// the t^3 moment identity
Real laporta_subtracted_integral(const PrecisionContext& ctx);

// optional external (persistent) cache hooks installed by the verify layer;
// keys are canonical "ikm|a,b,n|bits" strings, values serialize_exact strings
void set_cache_hooks(std::function<bool(const std::string&, std::string*)> get,
                     std::function<void(const std::string&, const std::string&)> put);
void clear_memory_cache();

}  // namespace moments
}  // namespace bm
