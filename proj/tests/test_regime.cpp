#include <doctest.h>

#include "ratsys/regime.hpp"

using namespace ratsys;

TEST_CASE("classification from declared parameters") {
    CHECK(classify_regime(CoefficientSequence::parse("const:1/2")).regime == Regime::SubUnit);
    CHECK(classify_regime(CoefficientSequence::parse("const:1")).regime == Regime::Unit);
    CHECK(classify_regime(CoefficientSequence::parse("const:3/2")).regime == Regime::SuperUnit);
    CHECK(classify_regime(CoefficientSequence::parse("periodic:1/2,3/2")).regime == Regime::Mixed);
    CHECK(classify_regime(CoefficientSequence::parse("periodic:1/2,1")).regime == Regime::Mixed);
    CHECK(classify_regime(CoefficientSequence::parse("periodic:3/2,2")).regime == Regime::Mixed);

    const auto u = classify_regime(CoefficientSequence::parse("uniform:0.3:0.7:seed=1"));
    CHECK(u.regime == Regime::SubUnit);
    CHECK(u.basis == RegimeBasis::DeclaredBounds);
    CHECK(u.gamma_sup == Rational(7, 10));

    const auto f = classify_regime(CoefficientSequence::from_values({Rational(1, 5), Rational(3, 5)}));
    CHECK(f.basis == RegimeBasis::SampledPrefix);
    CHECK(f.gamma_inf == Rational(1, 5));
    CHECK(to_string(Regime::SuperUnit) == "super-unit");
}

TEST_CASE("conserved quantity and unit limit") {
    CHECK(conserved_A(Rational(1), Rational(1)) == 4);
    CHECK(conserved_A(Rational(2), Rational(1)) == 6);

    const Real l4 = unit_gamma_limit(Rational(4), 256);
    const Real expected4 = Real(2L, 256) + sqrt(Real(3L, 256));
    CHECK(identity_holds(l4, expected4, 4));
    CHECK(l4.to_string().rfind("3.7320508075688772935274463415058723669428052538103806280558", 0) == 0);

    const Real l6 = unit_gamma_limit(Rational(6), 256);
    CHECK(l6.to_string().rfind("5.8284271247461900976033774484193961571393437507538961463533", 0) == 0);

    CHECK_THROWS_AS(unit_gamma_limit(Rational(2)), RegimeMismatch);
}

TEST_CASE("unit orbit conserves A exactly") {
    const auto one = CoefficientSequence::constant(Rational(1));
    const ExactOrbit o = evolve<Rational>(1, 1, one, 5, NumericMode::exact());
    CHECK(o.y(5) == Rational(26, 7));
    CHECK(o.x(5) == Rational(1, 77));
    const auto inv = unit_convergence_probe(o, Rational(1, 10));
    CHECK(inv.A == 4);
    CHECK(inv.max_drift == 0);

    const ExactOrbit sub = evolve<Rational>(1, 1, CoefficientSequence::constant(Rational(1, 2)), 3, NumericMode::exact());
    CHECK_THROWS_AS(unit_convergence_probe(sub, Rational(1, 10)), RegimeMismatch);
}

TEST_CASE("bounds report on a short sub-unit orbit") {
    const ExactOrbit o = evolve<Rational>(1, 1, CoefficientSequence::constant(Rational(1, 2)), 3, NumericMode::exact());
    const auto b = bounds_report(o, Rational(1, 2), Rational(1, 2));
    CHECK(b.m_emp == 1);
    CHECK(b.theoretical_cap == 2);
    CHECK(b.y_sup_emp == Rational(7, 4));
    CHECK(b.skeleton_ok);
    CHECK(b.tail_bound_ok);
    CHECK_THROWS_AS(bounds_report(o, Rational(1, 3), Rational(1, 2)), InvalidCoefficient);

    const auto s = skeleton_check(o);
    CHECK(s.ok);
    CHECK(s.max_product == Rational(2, 3));
}

TEST_CASE("super-unit growth") {
    const auto g = CoefficientSequence::constant(Rational(3, 2));
    const ExactOrbit o = evolve<Rational>(1, 1, g, 12, NumericMode::exact());
    CHECK(o.y(1) == Rational(5, 2));
    CHECK(superunit_growth_check(o, 12).pass);
    CHECK(divergence_probe(o, Rational(10), Rational(1)).pass);

    const auto cert = certified_growth_check(1, 1, Rational(3, 2), 40);
    CHECK(cert.pass);
    CHECK(Rational(cert.worst_residual) > 0);
    CHECK_THROWS_AS(certified_growth_check(1, 1, Rational(1), 5), RegimeMismatch);

    const ExactOrbit sub = evolve<Rational>(1, 1, CoefficientSequence::constant(Rational(1, 2)), 3, NumericMode::exact());
    CHECK_THROWS_AS(divergence_probe(sub, Rational(10), Rational(1)), RegimeMismatch);
}

TEST_CASE("late minima") {
    const FloatOrbit o = evolve<Real>(1, 1, CoefficientSequence::constant(Rational(1, 2)), 400, NumericMode::floating(128));
    const auto lm = late_minima_check(o);
    CHECK(lm.ok);
}
