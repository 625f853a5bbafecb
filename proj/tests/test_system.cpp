#include <doctest.h>

#include <sstream>

#include "oracle.hpp"
#include "ratsys/system.hpp"

using namespace ratsys;

namespace {

const auto half = CoefficientSequence::constant(Rational(1, 2));
const auto thirds = CoefficientSequence::periodic({Rational(1, 3), Rational(2, 3)});

} // namespace

TEST_CASE("single steps from (1, 1) with gamma = 1/2") {
    const Rational g(1, 2);
    auto [x1, y1] = step(Rational(1), Rational(1), g);
    CHECK(x1 == 1);
    CHECK(y1 == Rational(3, 2));
    auto [x2, y2] = step(x1, y1, g);
    CHECK(x2 == Rational(2, 3));
    CHECK(y2 == Rational(7, 4));
    auto [x3, y3] = step(x2, y2, g);
    CHECK(x3 == Rational(8, 21));
    CHECK(y3 == Rational(37, 24));
}

TEST_CASE("evolve stores x, y, w and the previous coefficient") {
    const ExactOrbit o = evolve<Rational>(1, 1, half, 3, NumericMode::exact());
    REQUIRE(o.size() == 4);
    CHECK(o.y(3) == Rational(37, 24));
    CHECK(o.w(0) == Rational(3, 2));
    CHECK(o.w(1) == 1);
    CHECK(o.w(2) == Rational(2, 3));
    CHECK(o.w(3) == Rational(4, 7));
    CHECK(o.gamma(-1) == Rational(1, 2));
    CHECK(w_of(Rational(2, 3), Rational(7, 4), Rational(1, 2)) == Rational(2, 3));
    CHECK_THROWS_AS(o.at(4), IndexOutOfRange);
}

TEST_CASE("agrees with the brute-force oracle on a periodic instance") {
    const ExactOrbit o = evolve<Rational>(Rational(3, 2), Rational(5, 7), thirds, 8, NumericMode::exact());
    const auto ref = oracle::evolve(Rational(3, 2), Rational(5, 7), oracle::alternating(Rational(1, 3), Rational(2, 3)), 8);
    for (std::int64_t n = 0; n <= 8; ++n) {
        CHECK(o.x(n) == ref.x[static_cast<std::size_t>(n)]);
        CHECK(o.y(n) == ref.y[static_cast<std::size_t>(n)]);
        CHECK(o.w(n) == ref.w(n));
    }
    CHECK(o.y(8) == Rational("323935994195632156205101783465591410243282258326005721888680702/"
                             "848312715190857863572614601089059016776324392302370593202846395"));
    CHECK(o.x(8) == Rational("24583938004936975475647920034732413522448235682473228297184375/"
                             "44108091541502575837803565814299232277148211057791588026393613"));
}

TEST_CASE("coupling w_{n+1} y_n = 1") {
    const ExactOrbit o = evolve<Rational>(Rational(3, 2), Rational(5, 7), thirds, 10, NumericMode::exact());
    for (std::int64_t n = 0; n < 10; ++n) CHECK(o.w(n + 1) * o.y(n) == 1);
}

TEST_CASE("the (x, w) system reproduces the (x, y) orbit") {
    const ExactOrbit o = evolve<Rational>(Rational(3, 2), Rational(5, 7), thirds, 10, NumericMode::exact());
    const auto xw = evolve_w<Rational>(o.x(0), o.w(0), thirds, 10, NumericMode::exact());
    for (std::int64_t n = 0; n <= 10; ++n) {
        CHECK(xw[static_cast<std::size_t>(n)].x == o.x(n));
        CHECK(xw[static_cast<std::size_t>(n)].w == o.w(n));
    }
    auto [x1, w1] = w_step(Rational(1), Rational(3, 2), Rational(1, 2));
    CHECK(x1 == 1);
    CHECK(w1 == 1);
}

TEST_CASE("float orbits track the exact one") {
    const ExactOrbit e = evolve<Rational>(Rational(3, 2), Rational(5, 7), thirds, 12, NumericMode::exact());
    const FloatOrbit f = evolve<Real>(Rational(3, 2), Rational(5, 7), thirds, 12, NumericMode::floating(256));
    for (std::int64_t n = 0; n <= 12; ++n) {
        const Rational err = abs(f.y(n).to_rational() - e.y(n)) / e.y(n);
        CHECK(err < pow2(-240));
    }
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(evolve<Rational>(0, 1, half, 3, NumericMode::exact()), NonPositiveInput);
    CHECK_THROWS_AS(evolve<Rational>(1, -1, half, 3, NumericMode::exact()), NonPositiveInput);
    const auto short_seq = CoefficientSequence::from_values({Rational(1, 2), Rational(1, 3)});
    CHECK_NOTHROW(evolve<Rational>(1, 1, short_seq, 2, NumericMode::exact()));
    CHECK_THROWS(evolve<Rational>(1, 1, short_seq, 3, NumericMode::exact()));
}

TEST_CASE("exact budget exhaustion reports the step") {
    try {
        (void)evolve<Rational>(1, 1, half, 60, NumericMode::exact(1024));
        FAIL("expected ExactBudgetExceeded");
    } catch (const ExactBudgetExceeded& e) {
        CHECK(e.index() > 5);
        CHECK(e.index() < 60);
    }
}

TEST_CASE("csv output") {
    const ExactOrbit o = evolve<Rational>(1, 1, half, 2, NumericMode::exact());
    std::ostringstream out;
    write_csv(out, o);
    CHECK(out.str() == "n,x,y,w,gamma_prev\n0,1/1,1/1,3/2,1/2\n1,1/1,3/2,1/1,1/2\n2,2/3,7/4,2/3,1/2\n");
}
