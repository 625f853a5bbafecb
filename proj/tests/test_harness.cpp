#include <doctest.h>

#include <sstream>

#include "ratsys/harness.hpp"

using namespace ratsys;

TEST_CASE("parse_mode") {
    CHECK(parse_mode("exact") == NumericMode::exact());
    CHECK(parse_mode("exact,budget=4096") == NumericMode::exact(4096));
    CHECK(parse_mode("float:128") == NumericMode::floating(128));
    CHECK(parse_mode("exact", 2048) == NumericMode::exact(2048));
    CHECK_THROWS(parse_mode("float:8"));
    CHECK_THROWS(parse_mode("exact,budget=10"));
    CHECK_THROWS(parse_mode("double"));
}

TEST_CASE("simulate exit codes") {
    std::ostringstream out, err;
    RunConfig cfg;
    cfg.steps = 3;
    CHECK(run_simulate(cfg, out, err) == kExitPass);
    CHECK(out.str().find("3,8/21,37/24,4/7,1/2") != std::string::npos);
    CHECK(err.str().find("sub-unit") != std::string::npos);

    RunConfig big = cfg;
    big.steps = 60;
    big.mode = NumericMode::exact(1024);
    std::ostringstream o2, e2;
    CHECK(run_simulate(big, o2, e2) == kExitBudgetExhausted);
    CHECK(e2.str().find("budget") != std::string::npos);

    RunConfig bad = cfg;
    bad.steps = -1;
    std::ostringstream o3, e3;
    CHECK(run_simulate(bad, o3, e3) == kExitInvalidInput);
}

TEST_CASE("verify suites pass on small runs") {
    for (const auto& suite : verify_suites()) {
        VerifyOptions opt;
        opt.suite = suite;
        opt.trials = 4;
        opt.seed = 3;
        if (suite != "mu-decay" && suite != "unit-invariant") opt.steps = 10;
        const VerifyOutcome r = run_verify(opt);
        INFO(suite);
        CHECK(r.exit_code == kExitPass);
        CHECK(r.report["pass"].get<bool>());
        CHECK(r.report["suite"] == suite);
    }
}

TEST_CASE("verify input errors and budget") {
    VerifyOptions opt;
    opt.suite = "nope";
    CHECK(run_verify(opt).exit_code == kExitInvalidInput);
    opt.suite = "telescoping";
    opt.trials = 0;
    CHECK(run_verify(opt).exit_code == kExitInvalidInput);
    opt.trials = 2;
    opt.steps = 20;
    opt.budget = 1024;
    const VerifyOutcome r = run_verify(opt);
    CHECK(r.exit_code == kExitBudgetExhausted);
    CHECK_FALSE(r.message.empty());
}

TEST_CASE("verify output does not depend on jobs") {
    VerifyOptions opt;
    opt.suite = "residual";
    opt.trials = 12;
    opt.seed = 11;
    opt.steps = 12;
    const std::string serial = dump(run_verify(opt).report);
    opt.jobs = 4;
    CHECK(dump(run_verify(opt).report) == serial);
    opt.seed = 12;
    CHECK(dump(run_verify(opt).report) != serial);
}

TEST_CASE("sweep covers every cell in order") {
    SweepSpec spec;
    spec.x0 = parse_scalar_list("1,2");
    spec.y0 = parse_scalar_list("1/2");
    spec.coefficients = {CoefficientSequence::parse("const:1/2"), CoefficientSequence::parse("const:1"),
                         CoefficientSequence::parse("const:3/2")};
    spec.steps = 200;
    spec.mode = NumericMode::floating(128);
    const SweepOutcome serial = run_sweep(spec);
    CHECK(serial.exit_code == kExitPass);
    const Json& cells = serial.aggregate["cells"];
    REQUIRE(cells.size() == 6);
    CHECK(cells[0]["index"] == Json::array({0, 0, 0}));
    CHECK(cells[5]["index"] == Json::array({1, 0, 2}));
    CHECK(cells[1]["regime"]["regime"] == "unit");
    CHECK(serial.aggregate["summary"]["cells"] == 6);

    spec.jobs = 3;
    CHECK(dump(run_sweep(spec).aggregate) == dump(serial.aggregate));

    CHECK_THROWS(parse_scalar_list("1,,2"));
    CHECK_THROWS(parse_scalar_list("1,-2"));
}
