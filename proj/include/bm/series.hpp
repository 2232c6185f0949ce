#pragma once

#include <gmpxx.h>

#include <vector>

#include "bm/prec.hpp"

namespace bm {

// Truncated formal series with exact rational coefficients. Depending on the
// tag, coeffs[i] multiplies either (1/z)^{leading_exponent+i} or
// q^{leading_exponent+i}. Coefficient arithmetic is exact.
struct RationalSeries {
    enum class Var { inverse_z, q };

    long leading_exponent = 0;
    std::vector<mpq_class> coeffs;
    Var variable_tag = Var::inverse_z;

    long order() const { return leading_exponent + static_cast<long>(coeffs.size()); }

    // coefficient at absolute exponent e (0 outside the stored window)
    mpq_class at(long e) const {
        long i = e - leading_exponent;
        if (i < 0 || i >= static_cast<long>(coeffs.size())) return mpq_class(0);
        return coeffs[static_cast<size_t>(i)];
    }
};

inline Real to_real(const mpq_class& q, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}
inline Real to_real(const mpz_class& z, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.get(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

}  // namespace bm
