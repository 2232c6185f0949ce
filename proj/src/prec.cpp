#include "bm/prec.hpp"

#include <cstdlib>
#include <cstring>
#include <vector>

namespace bm {

long decimal_exponent(const Real& x) {
    if (x.is_zero()) return 0;
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, 2, x.get(), MPFR_RNDN);
    mpfr_free_str(s);
    return static_cast<long>(e) - 1;
}

std::string render_decimal(const Real& x, int sig_digits) {
    if (sig_digits < 1) throw DomainError("render_decimal: need at least one digit");
    if (mpfr_nan_p(x.get())) return "nan";
    if (mpfr_inf_p(x.get())) return x.sign() > 0 ? "inf" : "-inf";
    if (x.is_zero()) {
        std::string out = "0.";
        out.append(static_cast<size_t>(sig_digits - 1), '0');
        out += "e+00";
        return out;
    }
    mpfr_exp_t e;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(sig_digits), x.get(), MPFR_RNDN);
    std::string digits(raw);
    mpfr_free_str(raw);

    std::string sign;
    if (!digits.empty() && digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    // digits holds sig_digits mantissa digits; value = 0.digits * 10^e
    std::string out = sign + digits.substr(0, 1);
    out += ".";
    out += digits.substr(1);
    long ex = static_cast<long>(e) - 1;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "e%+03ld", ex);
    out += buf;
    return out;
}

std::string serialize_exact(const Real& x) {
    if (mpfr_nan_p(x.get())) return "nan";
    if (mpfr_inf_p(x.get())) return x.sign() > 0 ? "inf" : "-inf";
    if (x.is_zero()) return "0";
    mpfr_exp_t e;
    // n = 0: mpfr chooses enough digits for exact binary round-trip
    char* raw = mpfr_get_str(nullptr, &e, 10, 0, x.get(), MPFR_RNDN);
    std::string digits(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!digits.empty() && digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    std::string out = sign + "0." + digits + "e" + std::to_string(static_cast<long>(e));
    return out;
}

Real parse_real(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (mpfr_set_str(r.get(), s.c_str(), 10, MPFR_RNDN) != 0 && s != "nan") {
        throw DomainError("parse_real: malformed decimal string: " + s);
    }
    return r;
}

}  // namespace bm
