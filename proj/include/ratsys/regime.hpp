#pragma once

// Regime classification and the per-regime behaviour checks: conservation
// and closed-form limit at gamma = 1, divergence for constant gamma > 1, and
// the upper-bound structure for 0 < gamma' <= gamma_n <= gamma < 1.

#include <cstdint>
#include <string>

#include "ratsys/coefficients.hpp"
#include "ratsys/report.hpp"
#include "ratsys/scalar.hpp"
#include "ratsys/system.hpp"

namespace ratsys {

enum class Regime { SubUnit, Unit, SuperUnit, Mixed };
enum class RegimeBasis { DeclaredBounds, SampledPrefix };

std::string to_string(Regime r);
std::string to_string(RegimeBasis b);

struct RegimeClassification {
    Regime regime = Regime::Mixed;
    RegimeBasis basis = RegimeBasis::DeclaredBounds;
    /// Inclusive bounds on every gamma_n of the sequence.
    Rational gamma_inf;
    Rational gamma_sup;

    Json to_json() const;
};

/// Classifies from declared parameters (constant, periodic, uniform) or from
/// the full contents of a file sequence. `prefix_len` must be >= 1.
RegimeClassification classify_regime(const CoefficientSequence& seq, std::int64_t prefix_len = 1);

/// x + y + x/y + 1/y
template <Scalar S>
S conserved_A(const S& x, const S& y) {
    return S(x + y + x / y + one_like(y) / y);
}

/// (A + sqrt(A^2 - 4)) / 2 at A's precision. Throws RegimeMismatch for A <= 2.
Real unit_gamma_limit(const Real& A);
Real unit_gamma_limit(const Rational& A, long mantissa_bits = kDefaultMantissaBits);

// -- upper bounds in the sub-unit regime -------------------------------------

template <Scalar S>
struct SkeletonResult {
    bool ok = true;
    S max_product;            ///< 0 when the index set is empty
    std::int64_t index = -1;  ///< n attaining max_product
};

/// x_{n+1} y_{n-1} < 1 for every 1 <= n <= N-1.
template <Scalar S>
SkeletonResult<S> skeleton_check(const Orbit<S>& orbit) {
    SkeletonResult<S> r{true, zero_like(orbit.y(0)), -1};
    const S one = one_like(orbit.y(0));
    for (std::int64_t n = 1; n + 1 <= orbit.last_index(); ++n) {
        S product = orbit.x(n + 1) * orbit.y(n - 1);
        if (!(product < one)) r.ok = false;
        if (r.index < 0 || product > r.max_product) {
            r.max_product = std::move(product);
            r.index = n;
        }
    }
    return r;
}

template <Scalar S>
struct BoundsReport {
    std::int64_t horizon = 0;
    S m_emp;  ///< min y_n
    std::int64_t m_index = 0;
    S x_sup_emp;
    std::int64_t x_sup_index = 0;
    S y_sup_emp;
    std::int64_t y_sup_index = 0;
    /// x_{n+1} y_{n-1} < 1 for 1 <= n <= N-1
    bool skeleton_ok = true;
    S skeleton_max;  ///< largest x_{n+1} y_{n-1} seen (0 when vacuous)
    std::int64_t skeleton_index = -1;
    std::int64_t tail_start = 0;
    S tail_y_max;
    std::int64_t tail_y_max_index = 0;
    S theoretical_cap;  ///< 1 / (m_emp (1 - gamma_sup))
    bool tail_bound_ok = true;

    Json to_json() const {
        return Json{{"horizon", horizon},
                    {"m_emp", to_text(m_emp)},
                    {"m_emp_index", m_index},
                    {"x_sup_emp", to_text(x_sup_emp)},
                    {"x_sup_index", x_sup_index},
                    {"y_sup_emp", to_text(y_sup_emp)},
                    {"y_sup_index", y_sup_index},
                    {"skeleton_ok", skeleton_ok},
                    {"skeleton_max", to_text(skeleton_max)},
                    {"skeleton_index", skeleton_index},
                    {"tail_start", tail_start},
                    {"tail_y_max", to_text(tail_y_max)},
                    {"tail_y_max_index", tail_y_max_index},
                    {"theoretical_cap", to_text(theoretical_cap)},
                    {"tail_bound_ok", tail_bound_ok}};
    }
};

inline const Rational& default_bound_tolerance() {
    static const Rational tol(1, 1000000);
    return tol;
}

/// Min/max statistics, the skeleton inequality and the tail cap
/// max{y_n : n >= tail_start} <= 1/(m_emp (1 - gamma_sup)) + tolerance, where
/// tail_start = N - floor(N * tail_fraction).
template <Scalar S>
BoundsReport<S> bounds_report(const Orbit<S>& orbit, const Rational& gamma_sup, const Rational& tail_fraction,
                              const Rational& tolerance = default_bound_tolerance()) {
    if (orbit.size() == 0) throw std::invalid_argument("bounds_report needs a nonempty orbit");
    if (sgn(gamma_sup) <= 0 || gamma_sup >= 1)
        throw RegimeMismatch("bounds_report needs 0 < gamma_sup < 1, got " + to_text(gamma_sup));
    if (sgn(tail_fraction) <= 0 || tail_fraction >= 1)
        throw std::invalid_argument("tail_fraction must lie in (0, 1)");

    const NumericMode& mode = orbit.mode();
    const S sup = lift<S>(gamma_sup, mode);
    const std::int64_t N = orbit.last_index();
    for (std::int64_t n = 1; n <= N; ++n)
        if (orbit[static_cast<std::size_t>(n)].gamma_prev > sup)
            throw InvalidCoefficient("gamma_" + std::to_string(n - 1) + " exceeds declared bound " + to_text(gamma_sup));

    BoundsReport<S> r;
    r.horizon = N;
    r.m_emp = orbit.y(0);
    r.x_sup_emp = orbit.x(0);
    r.y_sup_emp = orbit.y(0);
    r.skeleton_max = zero_like(orbit.y(0));
    for (std::int64_t n = 1; n <= N; ++n) {
        const auto& p = orbit[static_cast<std::size_t>(n)];
        if (p.y < r.m_emp) {
            r.m_emp = p.y;
            r.m_index = n;
        }
        if (p.x > r.x_sup_emp) {
            r.x_sup_emp = p.x;
            r.x_sup_index = n;
        }
        if (p.y > r.y_sup_emp) {
            r.y_sup_emp = p.y;
            r.y_sup_index = n;
        }
    }
    auto skeleton = skeleton_check(orbit);
    r.skeleton_ok = skeleton.ok;
    r.skeleton_max = std::move(skeleton.max_product);
    r.skeleton_index = skeleton.index;
    const S one = one_like(orbit.y(0));

    mpz_class tail_len;
    mpz_fdiv_q(tail_len.get_mpz_t(), Rational(tail_fraction * N).get_num_mpz_t(),
               Rational(tail_fraction * N).get_den_mpz_t());
    r.tail_start = N - tail_len.get_si();
    r.tail_y_max = orbit.y(r.tail_start);
    r.tail_y_max_index = r.tail_start;
    for (std::int64_t n = r.tail_start + 1; n <= N; ++n) {
        if (orbit.y(n) > r.tail_y_max) {
            r.tail_y_max = orbit.y(n);
            r.tail_y_max_index = n;
        }
    }
    r.theoretical_cap = one / (r.m_emp * (one - sup));
    r.tail_bound_ok = r.tail_y_max <= r.theoretical_cap + lift<S>(tolerance, mode);
    return r;
}

template <Scalar S>
struct LateMinimaReport {
    S min_late;  ///< min y over [N/2, N]
    S min_wide;  ///< min y over [N/4, N]
    std::int64_t late_index = 0;
    std::int64_t wide_index = 0;
    bool ok = true;  ///< no new minimum appears in [N/4, N/2)

    Json to_json() const {
        return Json{{"min_late", to_text(min_late)}, {"late_index", late_index}, {"min_wide", to_text(min_wide)},
                    {"wide_index", wide_index}, {"no_late_minima", ok}};
    }
};

/// Compares min y over [N/2, N] against min y over [N/4, N].
template <Scalar S>
LateMinimaReport<S> late_minima_check(const Orbit<S>& orbit) {
    const std::int64_t N = orbit.last_index();
    auto argmin = [&](std::int64_t from) {
        std::int64_t best = from;
        for (std::int64_t n = from + 1; n <= N; ++n)
            if (orbit.y(n) < orbit.y(best)) best = n;
        return best;
    };
    LateMinimaReport<S> r{orbit.y(N / 2), orbit.y(N / 4)};
    r.late_index = argmin(N / 2);
    r.wide_index = argmin(N / 4);
    r.min_late = orbit.y(r.late_index);
    r.min_wide = orbit.y(r.wide_index);
    r.ok = r.min_late == r.min_wide;
    return r;
}

// -- unit regime -------------------------------------------------------------

template <Scalar S>
struct InvariantReport {
    S A;
    S max_drift;
    std::int64_t drift_index = 0;
    Real predicted_limit;
    S observed_y_final;
    S observed_x_final;
    Real limit_gap;  ///< |y_N - predicted_limit|
    bool converged = false;

    Json to_json() const {
        return Json{{"A", to_text(A)},
                    {"max_drift", to_text(max_drift)},
                    {"drift_index", drift_index},
                    {"predicted_limit", to_text(predicted_limit)},
                    {"observed_y_final", to_text(observed_y_final)},
                    {"observed_x_final", to_text(observed_x_final)},
                    {"limit_gap", to_text(limit_gap)},
                    {"converged", converged}};
    }
};

/// Conservation drift of x + y + x/y + 1/y along a gamma = 1 orbit and the
/// distance of the endpoint from (0, (A + sqrt(A^2 - 4)) / 2). `converged`
/// holds when both |y_N - limit| and x_N are within tolerance.
template <Scalar S>
InvariantReport<S> unit_convergence_probe(const Orbit<S>& orbit, const Rational& tolerance) {
    if (classify_regime(orbit.coefficients()).regime != Regime::Unit)
        throw RegimeMismatch("unit_convergence_probe needs gamma_n = 1, got " + orbit.coefficients().describe());

    const std::int64_t N = orbit.last_index();
    InvariantReport<S> r{conserved_A(orbit.x(0), orbit.y(0)), zero_like(orbit.y(0)), 0, Real(), orbit.y(N),
                         orbit.x(N), Real()};
    for (std::int64_t n = 1; n <= N; ++n) {
        S drift = abs(S(conserved_A(orbit.x(n), orbit.y(n)) - r.A));
        if (drift > r.max_drift) {
            r.max_drift = std::move(drift);
            r.drift_index = n;
        }
    }
    const long bits = orbit.mode().is_exact() ? kDefaultMantissaBits : orbit.mode().mantissa_bits();
    const Real a = [&] {
        if constexpr (is_exact_v<S>)
            return Real(r.A, bits);
        else
            return r.A;
    }();
    r.predicted_limit = unit_gamma_limit(a);
    const Real y_final = [&] {
        if constexpr (is_exact_v<S>)
            return Real(r.observed_y_final, bits);
        else
            return r.observed_y_final;
    }();
    r.limit_gap = abs(y_final - r.predicted_limit);
    const Real tol(tolerance, bits);
    const bool x_small = [&] {
        if constexpr (is_exact_v<S>)
            return r.observed_x_final <= tolerance;
        else
            return r.observed_x_final <= tol;
    }();
    r.converged = r.limit_gap <= tol && x_small;
    return r;
}

// -- super-unit regime -------------------------------------------------------

/// Passes iff some y_n >= y_threshold, the final x_n <= x_threshold and y is
/// strictly increasing from n = 1. Requires a constant gamma > 1.
template <Scalar S>
VerificationReport divergence_probe(const Orbit<S>& orbit, const Rational& y_threshold, const Rational& x_threshold) {
    const auto cls = classify_regime(orbit.coefficients());
    if (cls.regime != Regime::SuperUnit)
        throw RegimeMismatch("divergence_probe needs a constant gamma > 1, got " + orbit.coefficients().describe());

    const NumericMode& mode = orbit.mode();
    const std::int64_t N = orbit.last_index();
    const S y_thr = lift<S>(y_threshold, mode);
    const S x_thr = lift<S>(x_threshold, mode);

    std::int64_t first_cross = -1;
    std::int64_t monotone_break = -1;
    for (std::int64_t n = 0; n <= N; ++n) {
        if (first_cross < 0 && orbit.y(n) >= y_thr) first_cross = n;
        if (n >= 2 && monotone_break < 0 && !(orbit.y(n) > orbit.y(n - 1))) monotone_break = n;
    }
    const bool crossed = first_cross >= 0;
    const bool x_small = orbit.x(N) <= x_thr;
    const bool monotone = monotone_break < 0;

    VerificationReport report;
    report.suite = "divergence";
    report.parameters = {{"coefficients", orbit.coefficients().describe()},
                         {"steps", N},
                         {"mode", mode.to_string()},
                         {"y_threshold", to_text(y_threshold)},
                         {"x_threshold", to_text(x_threshold)}};
    report.pass = crossed && x_small && monotone;
    report.worst_residual = to_text(orbit.x(N));
    report.witness = {{"n", monotone ? (crossed ? first_cross : N) : monotone_break}};
    report.metrics = {{"y_threshold_crossed_at", first_cross},
                      {"y_final", to_text(orbit.y(N))},
                      {"x_final", to_text(orbit.x(N))},
                      {"x_final_below_threshold", x_small},
                      {"y_strictly_increasing", monotone}};
    return report;
}

/// y_n >= gamma^(n-1) y_1 for 1 <= n <= n_max under a constant gamma > 1.
template <Scalar S>
VerificationReport superunit_growth_check(const Orbit<S>& orbit, std::int64_t n_max) {
    const auto cls = classify_regime(orbit.coefficients());
    if (cls.regime != Regime::SuperUnit)
        throw RegimeMismatch("superunit_growth_check needs a constant gamma > 1");
    if (n_max > orbit.last_index()) throw IndexOutOfRange("superunit_growth_check: orbit too short");

    const S gamma = lift<S>(cls.gamma_sup, orbit.mode());
    S envelope = orbit.y(std::min<std::int64_t>(1, orbit.last_index()));
    S min_excess = zero_like(envelope);
    std::int64_t witness = 1;
    bool ok = true;
    bool first = true;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        if (n >= 2) envelope *= gamma;
        S excess = orbit.y(n) - envelope;
        if (first || excess < min_excess) {
            min_excess = excess;
            witness = n;
            first = false;
        }
        if (orbit.y(n) < envelope) ok = false;
    }

    VerificationReport report;
    report.suite = "superunit-growth";
    report.parameters = {{"coefficients", orbit.coefficients().describe()}, {"n_max", n_max},
                         {"mode", orbit.mode().to_string()}};
    report.pass = ok;
    report.worst_residual = to_text(min_excess);
    report.witness = {{"n", witness}};
    return report;
}

/// y_n >= gamma^(n-1) y_1 for 1 <= n <= n_max, decided for the exact orbit
/// without exact arithmetic: x_n and y_n are carried as outward-rounded
/// enclosures at `mantissa_bits`, and the lower end of each y enclosure is
/// compared exactly against the rational envelope. Needs gamma > 1.
VerificationReport certified_growth_check(const Rational& x0, const Rational& y0, const Rational& gamma,
                                          std::int64_t n_max, long mantissa_bits = kDefaultMantissaBits);

} // namespace ratsys
