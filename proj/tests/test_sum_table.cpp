#include <doctest.h>

#include <vector>

#include "oracle.hpp"
#include "ratsys/sum_table.hpp"

using namespace ratsys;

namespace {

const auto half = CoefficientSequence::constant(Rational(1, 2));
const auto thirds = CoefficientSequence::periodic({Rational(1, 3), Rational(2, 3)});

} // namespace

TEST_CASE("mu and phi on the gamma = 1/2 orbit") {
    CHECK(mu(0, 1, half) == 1);
    CHECK(mu(0, 2, half) == Rational(1, 2));
    CHECK(mu(0, 4, half) == Rational(1, 8));
    const ExactOrbit o = evolve<Rational>(1, 1, half, 3, NumericMode::exact());
    CHECK(phi(0, 1, o) == 1);
    CHECK(phi(0, 2, o) == Rational(4, 3));
    CHECK(phi(0, 3, o) == Rational(10, 7));
    CHECK(telescoping_check(0, 1, o) == 0);
    CHECK(residual_check(0, 3, o) == 0);
    CHECK(o.w(0) - phi(0, 3, o) == Rational(1, 14));
}

TEST_CASE("periodic values against frozen and oracle numbers") {
    const ExactOrbit o = evolve<Rational>(Rational(3, 2), Rational(5, 7), thirds, 8, NumericMode::exact());
    CHECK(o.w(1) == Rational(7, 5));
    CHECK(phi(1, 5, o) == Rational("2212476750404109/1604062325864435"));
    CHECK(mu(1, 6, o) == Rational(4, 243));
    CHECK(mu(2, 4, o) == Rational(4, 27));
    CHECK(o.w(1) - phi(1, 5, o) == Rational("6642101161220/320812465172887"));

    const auto ref = oracle::evolve(Rational(3, 2), Rational(5, 7), oracle::alternating(Rational(1, 3), Rational(2, 3)), 8);
    const SumTable<Rational> table(o, 6, 30);
    for (std::int64_t i = 0; i <= 6; ++i) {
        CHECK(table.row_length(i) == 8 - i);
        for (std::int64_t n = 1; n <= table.row_length(i); ++n) {
            CHECK(table.phi(i, n) == ref.phi(i, n));
            CHECK(phi(i, n, o) == ref.phi(i, n));
            CHECK(table.mu(i, n + 1) == ref.mu(i, n + 1));
            CHECK(mu(i, n + 1, o) == ref.mu(i, n + 1));
            CHECK(telescoping_check(i, n, table) == 0);
            CHECK(residual_check(i, n, table) == 0);
            CHECK(telescoping_check(i, n, o) == 0);
        }
    }
    CHECK_THROWS_AS(table.phi(0, 9), IndexOutOfRange);
    CHECK_THROWS_AS(SumTable<Rational>(o, 8, 3), IndexOutOfRange);
}

TEST_CASE("float sums satisfy the identities to working precision") {
    const FloatOrbit o = evolve<Real>(Rational(3, 2), Rational(5, 7), thirds, 40, NumericMode::floating(256));
    const SumTable<Real> table(o, 10, 25);
    for (std::int64_t i = 0; i <= 10; ++i)
        for (std::int64_t n = 1; n <= table.row_length(i); ++n) {
            const Real lhs = o.w(i);
            const Real rhs = table.phi(i, n) + table.mu(i, n + 1) * o.w(i + n);
            CHECK(identity_holds(lhs, rhs));
        }
}

TEST_CASE("mu decay") {
    const auto sub = CoefficientSequence::seeded_uniform(Rational(1, 4), Rational(3, 4), 9, 16);
    const VerificationReport r = mu_decay_check(10, 30, sub, Rational(3, 4));
    CHECK(r.pass);
    CHECK(Rational(r.worst_residual) < 1);
    CHECK_FALSE(r.metrics["all_saturated"].get<bool>());

    const VerificationReport c = mu_decay_check(10, 30, CoefficientSequence::constant(Rational(3, 4)), Rational(3, 4));
    CHECK(c.pass);
    CHECK(c.worst_residual == "1/1");
    CHECK(c.metrics["all_saturated"].get<bool>());

    CHECK_THROWS_AS(mu_decay_check(2, 5, CoefficientSequence::constant(Rational(4, 5)), Rational(3, 4)),
                    InvalidCoefficient);
    CHECK_THROWS_AS(mu_decay_check(2, 5, half, Rational(1)), RegimeMismatch);
}

TEST_CASE("ratio monotonicity") {
    const ExactOrbit o = evolve<Rational>(1, 1, half, 3, NumericMode::exact());
    const VerificationReport r = ratio_monotone_check(0, 2, o);
    CHECK(r.pass);
    CHECK(r.metrics["ratios"] == Json::array({"2/1", "6/1", "14/1"}));
    CHECK(r.worst_residual == "0/1");

    const ExactOrbit p = evolve<Rational>(Rational(3, 2), Rational(5, 7), thirds, 12, NumericMode::exact());
    for (std::int64_t i = 0; i <= 4; ++i) CHECK(ratio_monotone_check(i, 12 - i, p).pass);
}

TEST_CASE("tail probe") {
    const ExactOrbit o = evolve<Rational>(1, 1, half, 3, NumericMode::exact());
    const std::vector<std::int64_t> i0{0};
    const VerificationReport tight = phi_tail_probe<Rational>(i0, 3, o, Rational(1, 10));
    CHECK(tight.pass);
    CHECK(tight.worst_residual == "1/14");
    const VerificationReport loose = phi_tail_probe<Rational>(i0, 1, o, Rational(1, 10));
    CHECK_FALSE(loose.pass);
    CHECK(loose.worst_residual == "1/2");
    CHECK(loose.metrics["all_gaps_positive"].get<bool>());
}
