// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ratsys/harness.hpp"
#include "ratsys/regime.hpp"
#include "ratsys/sum_table.hpp"

using namespace ratsys;

namespace {

struct Line {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(const Real& v) {
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.4Re", v.get());
    return buf;
}

std::string fmt(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

VerifyOutcome verify(const std::string& suite, std::int64_t trials, std::uint64_t seed, unsigned jobs = 1) {
    VerifyOptions opt;
    opt.suite = suite;
    opt.trials = trials;
    opt.seed = seed;
    opt.jobs = jobs;
    return run_verify(opt);
}

std::string summary(const VerifyOutcome& r) {
    if (r.report.is_null()) return "exit " + std::to_string(r.exit_code) + ": " + r.message;
    const Json& m = r.report["metrics"];
    return "exit " + std::to_string(r.exit_code) + ", checks " + m["checks"].dump() + ", failed trials " +
           m["failed_trials"].dump() + ", worst " + r.report["worst_residual"].get<std::string>() + ", horizon " +
           r.report["parameters"].value("steps", Json(0)).dump();
}

bool ok(const VerifyOutcome& r) { return r.exit_code == kExitPass && r.report["pass"].get<bool>(); }

std::string telescoping_serial;

Line criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyOutcome r = verify("telescoping", 200, 7);
    const double dt = seconds_since(t0);
    if (!r.report.is_null()) telescoping_serial = dump(r.report);
    return {ok(r) && r.report["worst_residual"] == "0/1" && dt <= 10.0,
            "telescoping, 200 exact trials, i<=20, n<=30 within the horizon: " + summary(r) + ", " + fmt(dt) +
                " s (limit 10 s)"};
}

Line criterion2() {
    const VerifyOutcome r = verify("coupling", 200, 7);
    return {ok(r) && r.report["worst_residual"] == "0/1", "coupling w_{n+1} y_n = 1: " + summary(r)};
}

Line criterion3() {
    const VerifyOutcome r = verify("residual", 200, 7);
    return {ok(r) && r.report["worst_residual"] == "0/1",
            "residual form and strict decrease in n: " + summary(r)};
}

Line criterion4() {
    VerifyOptions opt;
    opt.suite = "unit-invariant";
    opt.trials = 50;
    opt.seed = 7;
    opt.steps = 25;
    const VerifyOutcome exact = run_verify(opt);
    const bool drift_zero = ok(exact) && exact.report["worst_residual"] == "0/1";

    const FloatOrbit o =
        evolve<Real>(1, 1, CoefficientSequence::constant(Rational(1)), 300, NumericMode::floating(256));
    const Real limit = Real(2L, 256) + sqrt(Real(3L, 256));
    const Real tol(Rational(1, mpz_class("100000000000000000000")), 256);
    const Real gap = abs(o.y(300) - limit);
    const bool converged = gap <= tol && o.x(300) <= tol;
    return {drift_zero && converged, "unit regime: 50 exact trials x 25 steps, max drift " +
                                         (exact.report.is_null() ? std::string("n/a")
                                                                 : exact.report["worst_residual"].get<std::string>()) +
                                         "; float:256 300 steps |y_300 - (2+sqrt 3)| = " + sci(gap) +
                                         ", x_300 = " + sci(o.x(300))};
}

Line criterion5() {
    const auto g = CoefficientSequence::constant(Rational(3, 2));
    const FloatOrbit f = evolve<Real>(1, 1, g, 200, NumericMode::floating(256));
    const VerificationReport div = divergence_probe(f, Rational(1000000), Rational(1, 1000000));

    const std::int64_t exact_n = 24;
    const ExactOrbit e = evolve<Rational>(1, 1, g, exact_n, NumericMode::exact());
    const VerificationReport growth = superunit_growth_check(e, exact_n);
    const VerificationReport cert = certified_growth_check(1, 1, Rational(3, 2), 40);

    return {div.pass && growth.pass && cert.pass,
            "super-unit 3/2: 200 float steps, y_200 = " + sci(f.y(200)) + ", x_200 = " + sci(f.x(200)) +
                ", y increasing " +
                div.metrics["y_strictly_increasing"].dump() + "; y_n >= 1.5^(n-1) y_1 exact for n<=" +
                std::to_string(exact_n) + " (" + (growth.pass ? "ok" : "violated") +
                "), certified enclosure for n<=40 (" + (cert.pass ? "ok" : "violated") + ")"};
}

Line criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t N = 100000;
    const Rational lo(3, 10), hi(7, 10);
    int skeleton = 0, tail = 0, minima = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const std::uint64_t s = mix_seed(2024, t);
        const Rational x0(static_cast<long>(s % 1000 + 1), 100);
        const Rational y0(static_cast<long>((s >> 20) % 1000 + 1), 100);
        const auto seq = CoefficientSequence::seeded_uniform(lo, hi, s, 16);
        const FloatOrbit o = evolve<Real>(x0, y0, seq, N, NumericMode::floating(256));
        const auto b = bounds_report(o, hi, Rational(1, 2));
        const auto lm = late_minima_check(o);
        skeleton += b.skeleton_ok;
        tail += b.tail_bound_ok;
        minima += lm.ok;
        if (!lm.ok)
            std::printf("  criterion 6 instance %llu: min y over [N/4,N] is %s at n=%lld, over [N/2,N] %s at n=%lld\n",
                        static_cast<unsigned long long>(t), sci(lm.min_wide).c_str(),
                        static_cast<long long>(lm.wide_index), sci(lm.min_late).c_str(),
                        static_cast<long long>(lm.late_index));
    }
    const double dt = seconds_since(t0);
    return {skeleton == 20 && tail == 20 && minima == 20 && dt <= 60.0,
            "sub-unit uniform[0.3,0.7], 20 instances x 1e5 steps float:256: skeleton " + std::to_string(skeleton) +
                "/20, tail cap " + std::to_string(tail) + "/20, no late minima " + std::to_string(minima) + "/20, " +
                fmt(dt) + " s (limit 60 s)"};
}

Line criterion7() {
    const VerifyOutcome decay = verify("mu-decay", 200, 7);
    const bool strict = ok(decay) && Rational(decay.report["worst_residual"].get<std::string>()) < 1;
    const VerificationReport constant =
        mu_decay_check(10, 30, CoefficientSequence::constant(Rational(3, 4)), Rational(3, 4));
    const bool saturated = constant.pass && constant.metrics["all_saturated"].get<bool>();
    const VerifyOutcome ratio = verify("ratio-monotone", 200, 7);
    return {strict && saturated && ok(ratio),
            "mu decay over i<=10, k<=30: max ratio (k>=3) " +
                (decay.report.is_null() ? std::string("n/a") : decay.report["worst_residual"].get<std::string>()) +
                ", constant 3/4 saturates " + (saturated ? "yes" : "no") + "; ratio monotone: " + summary(ratio)};
}

Line criterion8() {
    const auto g = CoefficientSequence::constant(Rational(1, 2));
    const FloatOrbit a = evolve<Real>(1, 1, g, 1000, NumericMode::floating(128));
    const FloatOrbit b = evolve<Real>(1, 1, g, 1000, NumericMode::floating(256));
    Rational worst = 0;
    for (std::int64_t n = 0; n <= 1000; ++n) {
        for (auto [p, q] : {std::pair{&a.x(n), &b.x(n)}, std::pair{&a.y(n), &b.y(n)}, std::pair{&a.w(n), &b.w(n)}}) {
            const Rational d = abs(p->to_rational() - q->to_rational()) / abs(q->to_rational());
            if (d > worst) worst = d;
        }
    }
    const Rational limit(1, 10000000000L);
    return {worst <= limit, "128 vs 256 bits, gamma 1/2, 1000 steps: max relative disagreement " +
                                sci(Real(worst, 64)) + " (limit 1e-10)"};
}

Line criterion9() {
    const VerifyOutcome again = verify("telescoping", 200, 7);
    const unsigned jobs = std::max(2u, std::thread::hardware_concurrency());
    const VerifyOutcome parallel = verify("telescoping", 200, 7, jobs);
    const bool same_run = !telescoping_serial.empty() && dump(again.report) == telescoping_serial;
    const bool same_jobs = dump(parallel.report) == telescoping_serial;
    return {same_run && same_jobs, "telescoping seed 7 report identical across runs (" +
                                       std::string(same_run ? "yes" : "no") + ") and serial vs " +
                                       std::to_string(jobs) + " jobs (" + (same_jobs ? "yes" : "no") + ")"};
}

} // namespace

int main() {
    const std::vector<std::function<Line()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Line line;
        try {
            line = criteria[i]();
        } catch (const std::exception& e) {
            line = {false, std::string("exception: ") + e.what()};
        }
        if (!line.pass) ++failed;
        std::printf("%s criterion %zu: %s\n", line.pass ? "PASS" : "FAIL", i + 1, line.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
