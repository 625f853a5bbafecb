#pragma once

// Numeric backends: exact rationals (GMP) and fixed-precision binary floats
// (MPFR). Everything above this header is templated on one of the two.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "ratsys/errors.hpp"

namespace ratsys {

using Rational = mpq_class;

inline constexpr std::uint64_t kDefaultExactBudget = std::uint64_t{1} << 20;
inline constexpr long kDefaultMantissaBits = 256;
inline constexpr std::uint64_t kMinExactBudget = 1024;
inline constexpr long kMinMantissaBits = 64;

/// Binary floating value with its own mantissa width. Results of binary
/// operations carry the larger of the two operand precisions and are rounded
/// to nearest.
class Real {
public:
    explicit Real(long mantissa_bits = kDefaultMantissaBits);
    Real(const Rational& r, long mantissa_bits);
    Real(long value, long mantissa_bits);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    long precision() const noexcept { return static_cast<long>(mpfr_get_prec(v_)); }

    /// Round-trip decimal text: the fewest significant digits that parse
    /// back to the same value at this precision.
    std::string to_string() const;
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Exact value of this binary float as a rational.
    Rational to_rational() const;

    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_ptr get() noexcept { return v_; }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator-(const Real& a);

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b);

private:
    mpfr_t v_;
};

Real sqrt(const Real& a);
Real abs(const Real& a);

/// Numeric backend selection. Exact carries the per-scalar bit budget,
/// Float the mantissa width.
struct ExactMode {
    std::uint64_t bit_budget = kDefaultExactBudget;
    bool operator==(const ExactMode&) const = default;
};
struct FloatMode {
    long mantissa_bits = kDefaultMantissaBits;
    bool operator==(const FloatMode&) const = default;
};

class NumericMode {
public:
    NumericMode() = default;
    NumericMode(ExactMode m);
    NumericMode(FloatMode m);

    static NumericMode exact(std::uint64_t budget = kDefaultExactBudget) { return ExactMode{budget}; }
    static NumericMode floating(long bits = kDefaultMantissaBits) { return FloatMode{bits}; }

    bool is_exact() const noexcept { return std::holds_alternative<ExactMode>(mode_); }
    std::uint64_t bit_budget() const;
    long mantissa_bits() const;

    /// "exact,budget=N" or "float:N"
    std::string to_string() const;

    bool operator==(const NumericMode&) const = default;

private:
    std::variant<ExactMode, FloatMode> mode_{ExactMode{}};
};

// -- scalar traits -----------------------------------------------------------

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
concept Scalar = std::is_same_v<S, Rational> || std::is_same_v<S, Real>;

/// Converts an exact coefficient into the scalar type used by `mode`.
template <Scalar S>
S lift(const Rational& r, const NumericMode& mode) {
    if constexpr (is_exact_v<S>)
        return r;
    else
        return Real(r, mode.is_exact() ? kDefaultMantissaBits : mode.mantissa_bits());
}

/// One in the same precision as `like`.
inline Rational one_like(const Rational&) { return Rational(1); }
inline Real one_like(const Real& like) { return Real(1L, like.precision()); }

inline Rational zero_like(const Rational&) { return Rational(0); }
inline Real zero_like(const Real& like) { return Real(0L, like.precision()); }

inline Rational abs(const Rational& r) { return ::abs(r); }

// -- operations --------------------------------------------------------------

/// Reduced positive rational num/den.
Rational rational_of(const mpz_class& num, const mpz_class& den);
Rational rational_of(long num, long den);

/// Rounded to nearest at `mantissa_bits`.
Real to_real(const Rational& r, long mantissa_bits);

/// Bit-length of numerator plus bit-length of denominator.
std::uint64_t bit_size(const Rational& r);

/// True iff bit_size(r) <= budget_bits.
bool check_budget(const Rational& r, std::uint64_t budget_bits);

/// Parses "p/q", integers, and decimals with optional exponent
/// ("0.3", "1e-6", "2.5E+3") exactly. Zero and negatives are accepted here;
/// positivity is the caller's concern.
Rational parse_rational(std::string_view text);

/// Like parse_rational but rejects values <= 0 with NonPositiveInput.
Rational parse_positive(std::string_view text);

/// "num/den", always with the denominator.
std::string to_text(const Rational& r);
inline std::string to_text(const Real& r) { return r.to_string(); }

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(const Real& r) { return r.to_double(); }

/// |a - b| / |b|, computed in the scalar's own arithmetic.
template <Scalar S>
S relative_difference(const S& a, const S& b) {
    S d = a - b;
    return S(abs(d) / abs(b));
}

/// Equality as used by identity checks: bit-exact for rationals, relative
/// error within 2^(slack_bits - precision) for floats.
template <Scalar S>
bool identity_holds(const S& lhs, const S& rhs, long slack_bits = 16);

/// 2^e as an exact rational.
Rational pow2(long e);

/// Real-valued 2^e at the given precision.
Real pow2_real(long e, long mantissa_bits);

/// base^e for a nonnegative integer exponent.
template <Scalar S>
S ipow(const S& base, unsigned long e) {
    S result = one_like(base);
    S b = base;
    while (e != 0) {
        if (e & 1UL) result *= b;
        e >>= 1U;
        if (e != 0) b *= b;
    }
    return result;
}

template <Scalar S>
bool identity_holds(const S& lhs, const S& rhs, long slack_bits) {
    if constexpr (is_exact_v<S>) {
        return lhs == rhs;
    } else {
        const long prec = std::max(lhs.precision(), rhs.precision());
        Real scale = abs(rhs) < abs(lhs) ? abs(lhs) : abs(rhs);
        return abs(lhs - rhs) <= scale * pow2_real(slack_bits - prec, prec);
    }
}

} // namespace ratsys
