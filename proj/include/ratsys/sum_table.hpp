#pragma once

// Weighted partial sums over an orbit.
//
//   mu(i, 1) = 1,  mu(i, k) = gamma_{i-1} gamma_i ... gamma_{i+k-3}   (k >= 2)
//   phi(i, n) = sum_{k=1..n} mu(i, k) x_{i+k}
//
// w_i = phi(i, n) + mu(i, n+1) w_{i+n} holds exactly, and with
// w_{m+1} = 1 / y_m the remainder is mu(i, n+1) / y_{i+n-1}.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ratsys/coefficients.hpp"
#include "ratsys/report.hpp"
#include "ratsys/scalar.hpp"
#include "ratsys/system.hpp"

namespace ratsys {

/// mu(i, k) straight from the coefficient sequence.
Rational mu(std::int64_t i, std::int64_t k, const CoefficientSequence& seq);

namespace detail {

inline void require_sum_indices(std::int64_t i, std::int64_t n, const char* what) {
    if (i < 0) throw IndexOutOfRange(std::string(what) + ": i must be >= 0");
    if (n < 1) throw IndexOutOfRange(std::string(what) + ": n must be >= 1");
}

template <Scalar S>
void require_reach(const Orbit<S>& orbit, std::int64_t last, const char* what) {
    if (last > orbit.last_index())
        throw IndexOutOfRange(std::string(what) + " needs orbit index " + std::to_string(last) +
                              " but the orbit ends at " + std::to_string(orbit.last_index()));
}

} // namespace detail

/// mu(i, k) in the orbit's arithmetic, using the coefficients stored with the
/// orbit. Needs gamma up to index i + k - 3.
template <Scalar S>
S mu(std::int64_t i, std::int64_t k, const Orbit<S>& orbit) {
    if (i < 0 || k < 1) throw IndexOutOfRange("mu needs i >= 0 and k >= 1");
    detail::require_reach(orbit, i + k - 2, "mu");
    S product = one_like(orbit.x(0));
    for (std::int64_t j = i - 1; j <= i + k - 3; ++j) product *= orbit.gamma(j);
    return product;
}

template <Scalar S>
S phi(std::int64_t i, std::int64_t n, const Orbit<S>& orbit) {
    detail::require_sum_indices(i, n, "phi");
    detail::require_reach(orbit, i + n, "phi");
    S weight = one_like(orbit.x(0));
    S sum = orbit.x(i + 1);
    for (std::int64_t k = 2; k <= n; ++k) {
        weight *= orbit.gamma(i + k - 3);
        sum += weight * orbit.x(i + k);
    }
    return sum;
}

/// Cached mu(i, k) and phi(i, n) for 0 <= i <= i_max, filled by the product
/// and partial-sum recursions. Row i holds n = 1..row_length(i) with
/// row_length(i) = min(n_max, N - i), so a short orbit yields a triangular
/// table; mu is kept for k = 1..row_length(i) + 1.
template <Scalar S>
class SumTable {
public:
    SumTable(const Orbit<S>& orbit, std::int64_t i_max, std::int64_t n_max) : orbit_(&orbit), i_max_(i_max), n_max_(n_max) {
        if (i_max < 0 || n_max < 1) throw IndexOutOfRange("sum table needs i_max >= 0 and n_max >= 1");
        detail::require_reach(orbit, i_max + 1, "sum table");
        mu_offset_.reserve(static_cast<std::size_t>(i_max + 2));
        phi_offset_.reserve(static_cast<std::size_t>(i_max + 2));
        mu_offset_.push_back(0);
        phi_offset_.push_back(0);
        for (std::int64_t i = 0; i <= i_max; ++i) build_row(i);
    }

    std::int64_t i_max() const noexcept { return i_max_; }
    std::int64_t n_max() const noexcept { return n_max_; }
    const Orbit<S>& orbit() const noexcept { return *orbit_; }

    std::int64_t row_length(std::int64_t i) const {
        if (i < 0 || i > i_max_) throw IndexOutOfRange("row " + std::to_string(i) + " outside table");
        return std::min(n_max_, orbit_->last_index() - i);
    }

    /// Number of (i, n) cells.
    std::size_t cells() const noexcept { return phi_.size(); }

    const S& mu(std::int64_t i, std::int64_t k) const {
        if (i < 0 || i > i_max_ || k < 1 || k > row_length(i) + 1)
            throw IndexOutOfRange("mu(" + std::to_string(i) + ", " + std::to_string(k) + ") outside table");
        return mu_[mu_offset_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(k - 1)];
    }

    const S& phi(std::int64_t i, std::int64_t n) const {
        if (i < 0 || i > i_max_ || n < 1 || n > row_length(i))
            throw IndexOutOfRange("phi(" + std::to_string(i) + ", " + std::to_string(n) + ") outside table");
        return phi_[phi_offset_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(n - 1)];
    }

private:
    void build_row(std::int64_t i) {
        const Orbit<S>& o = *orbit_;
        const std::int64_t len = row_length(i);
        const std::size_t row = mu_.size();
        // mu(i, k+1) = mu(i, k) gamma_{i+k-2}
        mu_.push_back(one_like(o.x(0)));
        for (std::int64_t k = 1; k <= len; ++k) mu_.push_back(S(mu_.back() * o.gamma(i + k - 2)));
        // phi(i, n) = phi(i, n-1) + mu(i, n) x_{i+n}
        phi_.push_back(o.x(i + 1));
        for (std::int64_t n = 2; n <= len; ++n)
            phi_.push_back(S(phi_.back() + mu_[row + static_cast<std::size_t>(n - 1)] * o.x(i + n)));
        mu_offset_.push_back(mu_.size());
        phi_offset_.push_back(phi_.size());
    }

    const Orbit<S>* orbit_;
    std::int64_t i_max_;
    std::int64_t n_max_;
    std::vector<S> mu_;
    std::vector<S> phi_;
    std::vector<std::size_t> mu_offset_;
    std::vector<std::size_t> phi_offset_;
};

/// w_i - phi(i, n) - mu(i, n+1) w_{i+n}; zero in exact arithmetic.
template <Scalar S>
S telescoping_check(std::int64_t i, std::int64_t n, const Orbit<S>& orbit) {
    detail::require_sum_indices(i, n, "telescoping_check");
    detail::require_reach(orbit, i + n, "telescoping_check");
    return S(orbit.w(i) - phi(i, n, orbit) - mu(i, n + 1, orbit) * orbit.w(i + n));
}

template <Scalar S>
S telescoping_check(std::int64_t i, std::int64_t n, const SumTable<S>& table) {
    const Orbit<S>& o = table.orbit();
    return S(o.w(i) - table.phi(i, n) - table.mu(i, n + 1) * o.w(i + n));
}

/// (w_i - phi(i, n)) - mu(i, n+1) / y_{i+n-1}; zero in exact arithmetic.
template <Scalar S>
S residual_check(std::int64_t i, std::int64_t n, const Orbit<S>& orbit) {
    detail::require_sum_indices(i, n, "residual_check");
    detail::require_reach(orbit, i + n, "residual_check");
    return S((orbit.w(i) - phi(i, n, orbit)) - mu(i, n + 1, orbit) / orbit.y(i + n - 1));
}

template <Scalar S>
S residual_check(std::int64_t i, std::int64_t n, const SumTable<S>& table) {
    const Orbit<S>& o = table.orbit();
    return S((o.w(i) - table.phi(i, n)) - table.mu(i, n + 1) / o.y(i + n - 1));
}

/// Checks mu(i, k) <= gamma_sup^(k-1) for 0 <= i <= i_max, 1 <= k <= k_max.
///
/// metrics.max_ratio is the largest mu(i, k) / gamma_sup^(k-1) over cells
/// with k >= 3 (products of two or more coefficients); when k_max < 3 it is
/// taken over every cell. metrics.all_saturated reports whether every cell
/// meets the envelope with equality.
VerificationReport mu_decay_check(std::int64_t i_max, std::int64_t k_max, const CoefficientSequence& seq,
                                  const Rational& gamma_sup);

/// Checks that r_n = y_{i+n} / mu(i, n+2), n = 0..n_max, is strictly
/// increasing and that r_{n+1} = x_{i+n} / mu(i, n+3) + r_n.
template <Scalar S>
VerificationReport ratio_monotone_check(std::int64_t i, std::int64_t n_max, const Orbit<S>& orbit) {
    if (i < 0 || n_max < 0) throw IndexOutOfRange("ratio_monotone_check needs i >= 0 and n_max >= 0");
    detail::require_reach(orbit, i + n_max, "ratio_monotone_check");

    VerificationReport report;
    report.suite = "ratio-monotone";
    report.parameters = {{"i", i}, {"n_max", n_max}, {"mode", orbit.mode().to_string()}};

    // mu(i, n+2) = mu(i, n+1) gamma_{i+n-1}
    S weight = orbit.gamma(i - 1);  // mu(i, 2)
    S ratio = orbit.y(i) / weight;
    std::vector<std::string> ratios{to_text(ratio)};
    S worst = zero_like(ratio);
    std::int64_t witness = -1;
    bool monotone = true;
    bool identity = true;

    for (std::int64_t n = 0; n < n_max; ++n) {
        S next_weight = weight * orbit.gamma(i + n);  // mu(i, n+3)
        S next_ratio = orbit.y(i + n + 1) / next_weight;
        S via_identity = orbit.x(i + n) / next_weight + ratio;
        S gap = next_ratio - via_identity;
        if (!identity_holds(next_ratio, via_identity)) {
            identity = false;
            if (witness < 0) witness = n + 1;
        }
        if (abs(gap) > worst) worst = abs(gap);
        if (!(next_ratio > ratio)) {
            monotone = false;
            if (witness < 0) witness = n + 1;
        }
        ratios.push_back(to_text(next_ratio));
        ratio = std::move(next_ratio);
        weight = std::move(next_weight);
    }

    report.pass = monotone && identity;
    report.worst_residual = to_text(worst);
    report.witness = {{"i", i}, {"n", witness < 0 ? n_max : witness}};
    report.metrics = {{"strictly_increasing", monotone},
                      {"step_identity", identity},
                      {"final_ratio", to_text(ratio)}};
    if (ratios.size() <= 64) report.metrics["ratios"] = ratios;
    return report;
}

/// For each i, the gap w_i - phi(i, n_max): positive for every finite n_max,
/// flagged converged when <= tolerance. Passes when every gap is positive
/// and the largest (the uniform gap across i_list) is within tolerance.
template <Scalar S>
VerificationReport phi_tail_probe(std::span<const std::int64_t> i_list, std::int64_t n_max, const Orbit<S>& orbit,
                                  const Rational& tolerance) {
    if (i_list.empty()) throw std::invalid_argument("phi_tail_probe needs at least one i");
    VerificationReport report;
    report.suite = "tail";
    report.parameters = {{"i_list", std::vector<std::int64_t>(i_list.begin(), i_list.end())},
                         {"n_max", n_max},
                         {"tolerance", to_text(tolerance)},
                         {"mode", orbit.mode().to_string()}};

    const S tol = lift<S>(tolerance, orbit.mode());
    bool positive = true;
    bool converged = true;
    std::int64_t worst_i = i_list.front();
    S worst_gap = zero_like(tol);
    Json gaps = Json::array();
    for (std::int64_t i : i_list) {
        S gap = orbit.w(i) - phi(i, n_max, orbit);
        if (!(gap > zero_like(gap))) positive = false;
        if (!(gap <= tol)) converged = false;
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_i = i;
        }
        gaps.push_back({{"i", i}, {"gap", to_text(gap)}, {"converged", gap <= tol}});
    }
    report.pass = positive && converged;
    report.worst_residual = to_text(worst_gap);
    report.witness = {{"i", worst_i}, {"n", n_max}};
    report.metrics = {{"all_gaps_positive", positive}, {"uniform_gap", to_text(worst_gap)}, {"gaps", gaps}};
    return report;
}

} // namespace ratsys
