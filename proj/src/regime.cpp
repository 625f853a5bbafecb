#include "ratsys/regime.hpp"

#include <algorithm>

namespace ratsys {

std::string to_string(Regime r) {
    switch (r) {
    case Regime::SubUnit: return "sub-unit";
    case Regime::Unit: return "unit";
    case Regime::SuperUnit: return "super-unit";
    case Regime::Mixed: return "mixed";
    }
    return "mixed";
}

std::string to_string(RegimeBasis b) {
    return b == RegimeBasis::DeclaredBounds ? "declared-bounds" : "sampled-prefix";
}

Json RegimeClassification::to_json() const {
    return Json{{"regime", to_string(regime)},
                {"basis", to_string(basis)},
                {"gamma_inf", to_text(gamma_inf)},
                {"gamma_sup", to_text(gamma_sup)}};
}

namespace {

RegimeClassification from_bounds(const Rational& lo, const Rational& hi, RegimeBasis basis) {
    if (sgn(lo) <= 0) throw InvalidCoefficient("coefficient must be positive, got " + to_text(lo));
    RegimeClassification c{Regime::Mixed, basis, lo, hi};
    if (hi < 1)
        c.regime = Regime::SubUnit;
    else if (lo == 1 && hi == 1)
        c.regime = Regime::Unit;
    else if (lo == hi && lo > 1)
        c.regime = Regime::SuperUnit;
    return c;
}

RegimeClassification from_values(const std::vector<Rational>& values, RegimeBasis basis) {
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return from_bounds(*lo, *hi, basis);
}

} // namespace

RegimeClassification classify_regime(const CoefficientSequence& seq, std::int64_t prefix_len) {
    if (prefix_len < 1) throw std::invalid_argument("classify_regime needs prefix_len >= 1");
    return std::visit(
        [](const auto& k) -> RegimeClassification {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ConstantCoefficients>)
                return from_bounds(k.value, k.value, RegimeBasis::DeclaredBounds);
            else if constexpr (std::is_same_v<K, PeriodicCoefficients>)
                return from_values(k.values, RegimeBasis::DeclaredBounds);
            else if constexpr (std::is_same_v<K, SeededUniformCoefficients>)
                return from_bounds(k.lo, k.hi, RegimeBasis::DeclaredBounds);
            else
                return from_values(k.values, RegimeBasis::SampledPrefix);
        },
        seq.kind());
}

Real unit_gamma_limit(const Real& A) {
    const long bits = A.precision();
    const Real two(2L, bits);
    if (!(A > two)) throw RegimeMismatch("unit-regime limit needs A > 2, got " + A.to_string());
    const Real four(4L, bits);
    return (A + sqrt(A * A - four)) / two;
}

Real unit_gamma_limit(const Rational& A, long mantissa_bits) {
    if (!(A > 2)) throw RegimeMismatch("unit-regime limit needs A > 2, got " + to_text(A));
    return unit_gamma_limit(Real(A, mantissa_bits));
}

VerificationReport certified_growth_check(const Rational& x0, const Rational& y0, const Rational& gamma,
                                          std::int64_t n_max, long mantissa_bits) {
    if (sgn(x0) <= 0 || sgn(y0) <= 0) throw NonPositiveInput("certified_growth_check needs x0, y0 > 0");
    if (!(gamma > 1)) throw RegimeMismatch("certified_growth_check needs gamma > 1, got " + to_text(gamma));
    if (n_max < 1) throw IndexOutOfRange("certified_growth_check needs n_max >= 1");
    if (mantissa_bits < kMinMantissaBits) throw std::invalid_argument("mantissa width too small");

    auto bound = [&](const Rational& r, mpfr_rnd_t rnd) {
        Real v(mantissa_bits);
        mpfr_set_q(v.get(), r.get_mpq_t(), rnd);
        return v;
    };
    Real x_lo = bound(x0, MPFR_RNDD), x_hi = bound(x0, MPFR_RNDU);
    Real y_lo = bound(y0, MPFR_RNDD), y_hi = bound(y0, MPFR_RNDU);
    const Real g_lo = bound(gamma, MPFR_RNDD), g_hi = bound(gamma, MPFR_RNDU);
    Real t(mantissa_bits);

    Rational envelope;
    Rational min_margin;
    std::int64_t witness = 1;
    bool ok = true;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Real nx_lo(mantissa_bits), nx_hi(mantissa_bits), ny_lo(mantissa_bits), ny_hi(mantissa_bits);
        mpfr_div(nx_lo.get(), x_lo.get(), y_hi.get(), MPFR_RNDD);
        mpfr_div(nx_hi.get(), x_hi.get(), y_lo.get(), MPFR_RNDU);
        mpfr_mul(t.get(), g_lo.get(), y_lo.get(), MPFR_RNDD);
        mpfr_add(ny_lo.get(), x_lo.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), g_hi.get(), y_hi.get(), MPFR_RNDU);
        mpfr_add(ny_hi.get(), x_hi.get(), t.get(), MPFR_RNDU);
        x_lo = std::move(nx_lo);
        x_hi = std::move(nx_hi);
        y_lo = std::move(ny_lo);
        y_hi = std::move(ny_hi);

        envelope = n == 1 ? y_hi.to_rational() : Rational(envelope * gamma);
        const Rational margin = y_lo.to_rational() - envelope;
        if (n == 1) continue;
        if (witness == 1 || margin < min_margin) {
            min_margin = margin;
            witness = n;
        }
        if (sgn(margin) < 0) ok = false;
    }

    VerificationReport report;
    report.suite = "superunit-growth-certified";
    report.parameters = {{"x0", to_text(x0)}, {"y0", to_text(y0)}, {"gamma", to_text(gamma)},
                         {"n_max", n_max}, {"mantissa_bits", mantissa_bits}};
    report.pass = ok;
    report.worst_residual = to_text(min_margin);
    report.witness = {{"n", witness}};
    report.metrics = {{"y_lower_final", y_lo.to_string()}, {"y_upper_final", y_hi.to_string()}};
    return report;
}

} // namespace ratsys
