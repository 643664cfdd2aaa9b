#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace clpz {

// All runtime integers are arbitrary precision.
using Int = mpz_class;

// Integer division truncating toward zero. Divisor must be nonzero.
inline Int div_trunc(const Int& a, const Int& b) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// x^e for e >= 0, with 0^0 = 1. Returns nullopt when the result would be
// astronomically large (|x| > 1 and e does not fit a machine word).
inline std::optional<Int> pow_nonneg(const Int& x, const Int& e) {
    if (x == 0) return Int(e == 0 ? 1 : 0);
    if (x == 1) return Int(1);
    if (x == -1) return Int(mpz_odd_p(e.get_mpz_t()) ? -1 : 1);
    if (!e.fits_ulong_p()) return std::nullopt;
    Int r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e.get_ui());
    return r;
}

// ceil(a/b) and floor(a/b) over exact rationals.
inline Int ceil_div(const Int& num, const Int& den) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

inline Int floor_div(const Int& num, const Int& den) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

}  // namespace clpz
