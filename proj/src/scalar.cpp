#include "ratsys/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <stdexcept>

namespace ratsys {

namespace {

long checked_precision(long bits) {
    if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX)
        throw std::invalid_argument("mantissa width out of range: " + std::to_string(bits));
    return bits;
}

long joint_precision(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

struct MpfrString {
    char* p = nullptr;
    ~MpfrString() {
        if (p != nullptr) mpfr_free_str(p);
    }
};

// Digits (no sign, no point) of `v` rounded to `ndigits` significant decimal
// digits; `exp10` receives the position of the point (value = 0.ddd * 10^exp10).
std::string decimal_digits(mpfr_srcptr v, size_t ndigits, mpfr_exp_t& exp10) {
    MpfrString s;
    s.p = mpfr_get_str(nullptr, &exp10, 10, ndigits, v, MPFR_RNDN);
    if (s.p == nullptr) throw std::runtime_error("mpfr_get_str failed");
    std::string out(s.p);
    if (!out.empty() && out.front() == '-') out.erase(0, 1);
    return out;
}

bool round_trips(mpfr_srcptr v, const std::string& digits, mpfr_exp_t exp10, bool negative) {
    std::string text = (negative ? "-0." : "0.") + digits + "e" + std::to_string(exp10);
    mpfr_t back;
    mpfr_init2(back, mpfr_get_prec(v));
    mpfr_strtofr(back, text.c_str(), nullptr, 10, MPFR_RNDN);
    bool same = mpfr_equal_p(back, v) != 0;
    mpfr_clear(back);
    return same;
}

std::string format_decimal(std::string digits, mpfr_exp_t exp10, bool negative) {
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    const long sci = static_cast<long>(exp10) - 1;
    std::string out = negative ? "-" : "";
    if (sci >= -7 && sci < 21) {
        if (sci < 0) {
            out += "0." + std::string(static_cast<size_t>(-sci - 1), '0') + digits;
        } else if (static_cast<size_t>(sci) + 1 >= digits.size()) {
            out += digits + std::string(static_cast<size_t>(sci) + 1 - digits.size(), '0');
        } else {
            out += digits.substr(0, static_cast<size_t>(sci) + 1) + "." +
                   digits.substr(static_cast<size_t>(sci) + 1);
        }
        return out;
    }
    out += digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += (sci < 0 ? "e-" : "e+") + std::to_string(sci < 0 ? -sci : sci);
    return out;
}

} // namespace

// -- Real --------------------------------------------------------------------

Real::Real(long mantissa_bits) {
    mpfr_init2(v_, checked_precision(mantissa_bits));
    mpfr_set_zero(v_, 1);
}

Real::Real(const Rational& r, long mantissa_bits) {
    mpfr_init2(v_, checked_precision(mantissa_bits));
    mpfr_set_q(v_, r.get_mpq_t(), MPFR_RNDN);
}

Real::Real(long value, long mantissa_bits) {
    mpfr_init2(v_, checked_precision(mantissa_bits));
    mpfr_set_si(v_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
    // Leave `other` as a valid minimal-precision value.
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

std::string Real::to_string() const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_signbit(v_) ? "-inf" : "inf";
    if (mpfr_zero_p(v_)) return "0";
    const bool negative = mpfr_signbit(v_) != 0;

    // Bisect for the shortest digit count that round-trips.
    size_t hi = mpfr_get_str_ndigits(10, mpfr_get_prec(v_));
    size_t lo = 2;
    while (lo < hi) {
        size_t mid = lo + (hi - lo) / 2;
        mpfr_exp_t e = 0;
        std::string d = decimal_digits(v_, mid, e);
        if (round_trips(v_, d, e, negative))
            hi = mid;
        else
            lo = mid + 1;
    }
    mpfr_exp_t e = 0;
    std::string d = decimal_digits(v_, hi, e);
    return format_decimal(d, e, negative);
}

Rational Real::to_rational() const {
    if (!mpfr_number_p(v_)) throw std::domain_error("non-finite value has no rational form");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    Rational out(m);
    if (e >= 0)
        mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return out;
}

Real& Real::operator+=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator-=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(const Real& o) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real operator+(const Real& a, const Real& b) {
    Real r(joint_precision(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a, const Real& b) {
    Real r(joint_precision(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, const Real& b) {
    Real r(joint_precision(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator/(const Real& a, const Real& b) {
    Real r(joint_precision(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a) {
    Real r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

Real sqrt(const Real& a) {
    Real r(a.precision());
    mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
    return r;
}

Real abs(const Real& a) {
    Real r(a.precision());
    mpfr_abs(r.get(), a.get(), MPFR_RNDN);
    return r;
}

// -- NumericMode -------------------------------------------------------------

NumericMode::NumericMode(ExactMode m) : mode_(m) {
    if (m.bit_budget < kMinExactBudget)
        throw std::invalid_argument("exact bit budget must be at least " + std::to_string(kMinExactBudget));
}

NumericMode::NumericMode(FloatMode m) : mode_(m) {
    if (m.mantissa_bits < kMinMantissaBits)
        throw std::invalid_argument("float mantissa width must be at least " + std::to_string(kMinMantissaBits));
    checked_precision(m.mantissa_bits);
}

std::uint64_t NumericMode::bit_budget() const {
    if (const auto* e = std::get_if<ExactMode>(&mode_)) return e->bit_budget;
    throw std::logic_error("float mode has no bit budget");
}

long NumericMode::mantissa_bits() const {
    if (const auto* f = std::get_if<FloatMode>(&mode_)) return f->mantissa_bits;
    throw std::logic_error("exact mode has no mantissa width");
}

std::string NumericMode::to_string() const {
    if (is_exact()) return "exact,budget=" + std::to_string(bit_budget());
    return "float:" + std::to_string(mantissa_bits());
}

// -- free functions ----------------------------------------------------------

Rational rational_of(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw NonPositiveInput("zero denominator");
    if (sgn(num) * sgn(den) <= 0)
        throw NonPositiveInput("value must be positive: " + num.get_str() + "/" + den.get_str());
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational rational_of(long num, long den) { return rational_of(mpz_class(num), mpz_class(den)); }

Real to_real(const Rational& r, long mantissa_bits) { return Real(r, mantissa_bits); }

std::uint64_t bit_size(const Rational& r) {
    const mpz_srcptr num = r.get_num_mpz_t();
    const mpz_srcptr den = r.get_den_mpz_t();
    std::uint64_t n = mpz_sgn(num) == 0 ? 0 : mpz_sizeinbase(num, 2);
    return n + mpz_sizeinbase(den, 2);
}

bool check_budget(const Rational& r, std::uint64_t budget_bits) { return bit_size(r) <= budget_bits; }

Rational parse_rational(std::string_view text) {
    auto bad = [&]() { return std::invalid_argument("not a number: '" + std::string(text) + "'"); };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw bad();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto is_int = [](std::string_view s) {
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
            return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        };
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw bad();
        if (num.front() == '+') num.remove_prefix(1);
        if (den.front() == '+') den.remove_prefix(1);
        mpz_class n(std::string(num), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) throw NonPositiveInput("zero denominator: '" + std::string(text) + "'");
        Rational r(n, d);
        r.canonicalize();
        return r;
    }

    size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (seen_point) ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits.empty()) throw bad();
    long exponent = 0;
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') throw bad();
        ++pos;
        std::string_view e = text.substr(pos);
        bool eneg = false;
        if (!e.empty() && (e.front() == '+' || e.front() == '-')) {
            eneg = e.front() == '-';
            e.remove_prefix(1);
        }
        if (e.empty() || e.size() > 6 ||
            !std::all_of(e.begin(), e.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw bad();
        exponent = std::stol(std::string(e));
        if (eneg) exponent = -exponent;
    }
    const long shift = exponent - scale;
    mpz_class mant(digits, 10);
    if (negative) mant = -mant;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift >= 0 ? Rational(mant * ten_pow) : Rational(mant, ten_pow);
    r.canonicalize();
    return r;
}

Rational parse_positive(std::string_view text) {
    Rational r = parse_rational(text);
    if (sgn(r) <= 0) throw NonPositiveInput("value must be positive: '" + std::string(text) + "'");
    return r;
}

std::string to_text(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational pow2(long e) {
    Rational r(1);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return r;
}

Real pow2_real(long e, long mantissa_bits) {
    Real r(1L, mantissa_bits);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

} // namespace ratsys
