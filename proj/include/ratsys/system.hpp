#pragma once

// Evolution of x' = x / y, y' = x + gamma y and of the coupled (x, w) form
// x' = x w / (x + gamma_prev), w' = w / (x + gamma_prev), where
// w_n = (gamma_{n-1} + x_n) / y_n.

#include <cstdint>
#include <ostream>
#include <utility>
#include <variant>
#include <vector>

#include "ratsys/coefficients.hpp"
#include "ratsys/scalar.hpp"

namespace ratsys {

template <Scalar S>
struct OrbitPoint {
    std::int64_t n = 0;
    S x;
    S y;
    S w;
    S gamma_prev;  ///< gamma_{n-1}
};

template <Scalar S>
class Orbit {
public:
    using scalar_type = S;

    Orbit(std::vector<OrbitPoint<S>> points, NumericMode mode, CoefficientSequence coefficients)
        : points_(std::move(points)), mode_(mode), coefficients_(std::move(coefficients)) {}

    /// Number of stored points (N + 1 for an N-step orbit).
    std::size_t size() const noexcept { return points_.size(); }
    std::int64_t last_index() const noexcept { return static_cast<std::int64_t>(points_.size()) - 1; }

    const OrbitPoint<S>& at(std::int64_t n) const {
        if (n < 0 || n > last_index())
            throw IndexOutOfRange("orbit index " + std::to_string(n) + " outside [0, " +
                                  std::to_string(last_index()) + "]");
        return points_[static_cast<std::size_t>(n)];
    }
    const OrbitPoint<S>& operator[](std::size_t n) const noexcept { return points_[n]; }

    const S& x(std::int64_t n) const { return at(n).x; }
    const S& y(std::int64_t n) const { return at(n).y; }
    const S& w(std::int64_t n) const { return at(n).w; }

    /// gamma_j for -1 <= j <= last_index() - 1, as stored alongside the points.
    const S& gamma(std::int64_t j) const { return at(j + 1).gamma_prev; }

    const std::vector<OrbitPoint<S>>& points() const noexcept { return points_; }
    const NumericMode& mode() const noexcept { return mode_; }
    const CoefficientSequence& coefficients() const noexcept { return coefficients_; }

    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

private:
    std::vector<OrbitPoint<S>> points_;
    NumericMode mode_;
    CoefficientSequence coefficients_;
};

using ExactOrbit = Orbit<Rational>;
using FloatOrbit = Orbit<Real>;
using AnyOrbit = std::variant<ExactOrbit, FloatOrbit>;

// -- single steps ------------------------------------------------------------

template <Scalar S>
std::pair<S, S> step(const S& x, const S& y, const S& gamma) {
    S next_x = x / y;
    S next_y = x + gamma * y;
    return {std::move(next_x), std::move(next_y)};
}

template <Scalar S>
S w_of(const S& x, const S& y, const S& gamma_prev) {
    return S((gamma_prev + x) / y);
}

template <Scalar S>
std::pair<S, S> w_step(const S& x, const S& w, const S& gamma_prev) {
    S divisor = x + gamma_prev;
    S next_x = x * w / divisor;
    S next_w = w / divisor;
    return {std::move(next_x), std::move(next_w)};
}

namespace detail {

inline void require_positive_state(const Rational& x0, const Rational& y0) {
    if (sgn(x0) <= 0) throw NonPositiveInput("x0 must be positive, got " + to_text(x0));
    if (sgn(y0) <= 0) throw NonPositiveInput("y0 must be positive, got " + to_text(y0));
}

inline void require_horizon(const CoefficientSequence& seq, std::int64_t steps) {
    // Evolving N steps consumes gamma_0 .. gamma_{N-1}.
    const std::int64_t last = seq.last_index();
    if (last >= 0 && steps > last + 1)
        throw IndexOutOfRange("coefficient file holds " + std::to_string(last + 1) + " values but " +
                              std::to_string(steps) + " steps were requested");
}

template <Scalar S>
void enforce_budget(const OrbitPoint<S>& p, const NumericMode& mode) {
    if constexpr (is_exact_v<S>) {
        const std::uint64_t budget = mode.bit_budget();
        for (const Rational* v : {&p.x, &p.y, &p.w}) {
            const std::uint64_t bits = bit_size(*v);
            if (bits > budget) throw ExactBudgetExceeded(p.n, bits, budget);
        }
    }
}

} // namespace detail

/// Orbit of `steps + 1` points. Each point carries w_n and gamma_{n-1}.
template <Scalar S>
Orbit<S> evolve(const Rational& x0, const Rational& y0, const CoefficientSequence& seq, std::int64_t steps,
                const NumericMode& mode) {
    detail::require_positive_state(x0, y0);
    if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
    if (is_exact_v<S> != mode.is_exact()) throw std::invalid_argument("scalar type does not match numeric mode");
    detail::require_horizon(seq, steps);

    std::vector<OrbitPoint<S>> points;
    points.reserve(static_cast<std::size_t>(steps) + 1);

    S gamma_prev = lift<S>(seq.at(-1), mode);
    S x = lift<S>(x0, mode);
    S y = lift<S>(y0, mode);
    for (std::int64_t n = 0;; ++n) {
        S w = w_of(x, y, gamma_prev);
        points.push_back(OrbitPoint<S>{n, x, y, std::move(w), gamma_prev});
        detail::enforce_budget(points.back(), mode);
        if (n == steps) break;
        S gamma = lift<S>(seq.at(n), mode);
        auto [nx, ny] = step(x, y, gamma);
        x = std::move(nx);
        y = std::move(ny);
        gamma_prev = std::move(gamma);
    }
    return Orbit<S>(std::move(points), mode, seq);
}

AnyOrbit evolve_any(const Rational& x0, const Rational& y0, const CoefficientSequence& seq, std::int64_t steps,
                    const NumericMode& mode);

template <Scalar S>
struct XWPoint {
    S x;
    S w;
};

/// Iterates the (x, w) system from (x0, w0) for `steps` steps.
template <Scalar S>
std::vector<XWPoint<S>> evolve_w(const S& x0, const S& w0, const CoefficientSequence& seq, std::int64_t steps,
                                 const NumericMode& mode) {
    detail::require_horizon(seq, steps);
    std::vector<XWPoint<S>> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back({x0, w0});
    for (std::int64_t n = 0; n < steps; ++n) {
        const auto& cur = out.back();
        auto [nx, nw] = w_step(cur.x, cur.w, lift<S>(seq.at(n - 1), mode));
        out.push_back({std::move(nx), std::move(nw)});
    }
    return out;
}

/// Writes `n,x,y,w,gamma_prev` CSV, one row per point.
template <Scalar S>
void write_csv(std::ostream& out, const Orbit<S>& orbit) {
    out << "n,x,y,w,gamma_prev\n";
    for (const auto& p : orbit)
        out << p.n << ',' << to_text(p.x) << ',' << to_text(p.y) << ',' << to_text(p.w) << ','
            << to_text(p.gamma_prev) << '\n';
}

void write_csv(std::ostream& out, const AnyOrbit& orbit);

} // namespace ratsys
