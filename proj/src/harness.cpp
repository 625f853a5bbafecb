#include "ratsys/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <thread>

#include "ratsys/regime.hpp"
#include "ratsys/sum_table.hpp"
#include "ratsys/system.hpp"

namespace ratsys {

void parallel_for(std::int64_t count, unsigned jobs, const std::function<void(std::int64_t)>& task) {
    if (count <= 0) return;
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::int64_t>(count, 1024))));
    if (jobs == 1) {
        for (std::int64_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&next, count, &task] {
        for (std::int64_t i = next++; i < count; i = next++) task(i);
    };
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) workers.emplace_back(worker);
    for (auto& t : workers) t.join();
}

NumericMode parse_mode(std::string_view text, std::optional<std::uint64_t> budget) {
    auto bad = [&] { return std::invalid_argument("mode must be exact[,budget=BITS] or float:BITS, got '" + std::string(text) + "'"); };
    auto parse_uint = [&](std::string_view s) -> std::uint64_t {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) throw bad();
        try {
            return std::stoull(std::string(s));
        } catch (const std::out_of_range&) {
            throw bad();
        }
    };
    if (text.rfind("float:", 0) == 0) {
        if (budget) throw std::invalid_argument("a bit budget only applies to exact mode");
        const std::uint64_t bits = parse_uint(text.substr(6));
        if (bits > static_cast<std::uint64_t>(MPFR_PREC_MAX)) throw bad();
        return NumericMode::floating(static_cast<long>(bits));
    }
    if (text == "exact") return NumericMode::exact(budget.value_or(kDefaultExactBudget));
    if (text.rfind("exact,budget=", 0) == 0) {
        const std::uint64_t bits = parse_uint(text.substr(13));
        return NumericMode::exact(budget.value_or(bits));
    }
    throw bad();
}

std::vector<Rational> parse_scalar_list(std::string_view text) {
    std::vector<Rational> out;
    if (text.find_first_not_of(" \t") == std::string_view::npos) return out;
    size_t start = 0;
    while (true) {
        size_t p = text.find(',', start);
        out.push_back(parse_positive(text.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

// -- simulate ----------------------------------------------------------------

namespace {

template <Scalar S>
void write_summary(std::ostream& os, const Orbit<S>& orbit) {
    const auto cls = classify_regime(orbit.coefficients());
    std::int64_t m_idx = 0;
    std::int64_t x_idx = 0;
    std::int64_t y_idx = 0;
    for (std::int64_t n = 1; n <= orbit.last_index(); ++n) {
        if (orbit.y(n) < orbit.y(m_idx)) m_idx = n;
        if (orbit.x(n) > orbit.x(x_idx)) x_idx = n;
        if (orbit.y(n) > orbit.y(y_idx)) y_idx = n;
    }
    os << "regime: " << to_string(cls.regime) << " (" << to_string(cls.basis) << ", gamma in ["
       << to_text(cls.gamma_inf) << ", " << to_text(cls.gamma_sup) << "])\n"
       << "steps: " << orbit.last_index() << '\n'
       << "mode: " << orbit.mode().to_string() << '\n'
       << "m_emp: " << to_text(orbit.y(m_idx)) << " (n=" << m_idx << ")\n"
       << "sup_x: " << to_text(orbit.x(x_idx)) << " (n=" << x_idx << ")\n"
       << "sup_y: " << to_text(orbit.y(y_idx)) << " (n=" << y_idx << ")\n";
}

} // namespace

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<AnyOrbit> orbit;
    try {
        orbit.emplace(evolve_any(config.x0, config.y0, config.coefficients, config.steps, config.mode));
    } catch (const ExactBudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitBudgetExhausted;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    std::ostream* summary = &out;
    if (config.out_path.empty()) {
        write_csv(out, *orbit);
        summary = &err;
    } else {
        std::ofstream file(config.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << config.out_path << '\n';
            return kExitInvalidInput;
        }
        write_csv(file, *orbit);
    }
    std::visit([&](const auto& o) { write_summary(*summary, o); }, *orbit);
    return kExitPass;
}

// -- verify ------------------------------------------------------------------

namespace {

struct Instance {
    Rational x0;
    Rational y0;
    CoefficientSequence coefficients;
};

Rational draw_rational(std::mt19937_64& rng) {
    // num/den in (0, 10] with num, den <= 2^16
    constexpr std::uint64_t kMax = std::uint64_t{1} << 16;
    const std::uint64_t den = 1 + rng() % kMax;
    const std::uint64_t num = 1 + rng() % std::min(kMax, 10 * den);
    return rational_of(static_cast<long>(num), static_cast<long>(den));
}

Instance draw_instance(std::uint64_t seed, std::int64_t trial, bool unit) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    Rational x0 = draw_rational(rng);
    Rational y0 = draw_rational(rng);
    const std::uint64_t gamma_seed = rng();
    if (unit) return {std::move(x0), std::move(y0), CoefficientSequence::constant(Rational(1))};
    return {std::move(x0), std::move(y0),
            CoefficientSequence::seeded_uniform(Rational(1, 4), Rational(3, 4), gamma_seed, 16)};
}

struct TrialResult {
    bool pass = true;
    Rational worst_key{0};  ///< larger is worse
    std::string worst_text = "0/1";
    Json witness = Json::object();
    std::int64_t checks = 0;
    std::int64_t converged = 0;  ///< tail suite only
    bool have_worst = false;
    int error_code = kExitPass;
    std::string error;

    void offer(const Rational& key, const Rational& value, Json where) {
        if (!have_worst || key > worst_key) {
            have_worst = true;
            worst_key = key;
            worst_text = to_text(value);
            witness = std::move(where);
        }
    }
    void offer_residual(const Rational& r, Json where) { offer(abs(r), r, std::move(where)); }
};

struct SuiteWindow {
    std::int64_t steps;
    std::int64_t i_max;
    std::int64_t n_max;
};

SuiteWindow window_for(const std::string& suite, std::optional<std::int64_t> steps) {
    if (suite == "unit-invariant") return {steps.value_or(kUnitInvariantSteps), 0, 0};
    if (suite == "mu-decay") return {0, 10, 30};
    const std::int64_t h = steps.value_or(kVerifyExactHorizon);
    if (suite == "ratio-monotone") return {h, std::min<std::int64_t>(10, h - 1), 28};
    if (suite == "tail") return {h, std::min<std::int64_t>(4, h - 1), h - std::min<std::int64_t>(4, h - 1)};
    if (suite == "coupling" || suite == "skeleton") return {h, 0, 0};
    return {h, std::min<std::int64_t>(20, h - 1), 30};
}

TrialResult run_trial(const std::string& suite, const Instance& inst, const SuiteWindow& win,
                      const VerifyOptions& opt) {
    TrialResult t;
    const NumericMode mode = NumericMode::exact(opt.budget);

    if (suite == "mu-decay") {
        const Rational sup(3, 4);
        VerificationReport r = mu_decay_check(win.i_max, win.n_max, inst.coefficients, sup);
        t.pass = r.pass;
        t.offer(Rational(r.worst_residual), Rational(r.worst_residual), r.witness);
        t.checks = (win.i_max + 1) * win.n_max;
        return t;
    }

    const ExactOrbit orbit = evolve<Rational>(inst.x0, inst.y0, inst.coefficients, win.steps, mode);
    const std::int64_t N = orbit.last_index();

    if (suite == "telescoping" || suite == "residual") {
        if (N < 1) return t;
        const SumTable<Rational> table(orbit, win.i_max, win.n_max);
        for (std::int64_t i = 0; i <= win.i_max; ++i) {
            Rational prev_gap;
            for (std::int64_t n = 1; n <= table.row_length(i); ++n) {
                if (suite == "telescoping") {
                    const Rational r = telescoping_check(i, n, table);
                    if (sgn(r) != 0) t.pass = false;
                    t.offer_residual(r, {{"i", i}, {"n", n}});
                } else {
                    const Rational r = residual_check(i, n, table);
                    const Rational gap = orbit.w(i) - table.phi(i, n);
                    if (sgn(r) != 0 || (n > 1 && !(gap < prev_gap))) t.pass = false;
                    t.offer_residual(r, {{"i", i}, {"n", n}});
                    prev_gap = gap;
                }
                ++t.checks;
            }
        }
        return t;
    }
    if (suite == "coupling") {
        for (std::int64_t n = 0; n < N; ++n) {
            const Rational r = orbit.w(n + 1) * orbit.y(n) - 1;
            if (sgn(r) != 0) t.pass = false;
            t.offer_residual(r, {{"n", n}});
            ++t.checks;
        }
        return t;
    }
    if (suite == "skeleton") {
        const auto s = skeleton_check(orbit);
        t.pass = s.ok;
        if (s.index >= 0) t.offer(s.max_product, s.max_product, {{"n", s.index}});
        t.checks = std::max<std::int64_t>(0, N - 1);
        return t;
    }
    if (suite == "unit-invariant") {
        const auto inv = unit_convergence_probe(orbit, opt.tolerance);
        t.pass = sgn(inv.max_drift) == 0;
        t.offer(inv.max_drift, inv.max_drift, {{"n", inv.drift_index}});
        t.checks = N;
        return t;
    }
    if (suite == "ratio-monotone") {
        for (std::int64_t i = 0; i <= win.i_max; ++i) {
            const std::int64_t n_max = std::min(win.n_max, N - i);
            VerificationReport r = ratio_monotone_check(i, n_max, orbit);
            if (!r.pass) t.pass = false;
            t.offer_residual(Rational(r.worst_residual), r.witness);
            t.checks += n_max + 1;
        }
        return t;
    }
    if (suite == "tail") {
        std::vector<std::int64_t> i_list;
        for (std::int64_t i = 0; i <= win.i_max; ++i) i_list.push_back(i);
        VerificationReport r = phi_tail_probe(std::span<const std::int64_t>(i_list), win.n_max, orbit, opt.tolerance);
        t.pass = r.metrics["all_gaps_positive"].get<bool>();
        for (std::int64_t i : i_list) {
            // The gap must equal the exact remainder mu(i, n+1) / y_{i+n-1}.
            const Rational rem = residual_check(i, win.n_max, orbit);
            if (sgn(rem) != 0) t.pass = false;
            t.offer_residual(rem, {{"i", i}, {"n", win.n_max}});
            ++t.checks;
        }
        for (const auto& g : r.metrics["gaps"])
            if (g["converged"].get<bool>()) ++t.converged;
        return t;
    }
    throw std::logic_error("unhandled suite " + suite);
}

} // namespace

VerifyOutcome run_verify(const VerifyOptions& opt) {
    VerifyOutcome out;
    const auto& suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), opt.suite) == suites.end()) {
        out.exit_code = kExitInvalidInput;
        out.message = "unknown suite '" + opt.suite + "'";
        return out;
    }
    if (opt.trials < 1) {
        out.exit_code = kExitInvalidInput;
        out.message = "trials must be >= 1";
        return out;
    }
    const SuiteWindow win = window_for(opt.suite, opt.steps);
    if (opt.suite != "mu-decay" && win.steps < 1) {
        out.exit_code = kExitInvalidInput;
        out.message = "steps must be >= 1";
        return out;
    }
    if (opt.budget < kMinExactBudget) {
        out.exit_code = kExitInvalidInput;
        out.message = "exact bit budget must be at least " + std::to_string(kMinExactBudget);
        return out;
    }

    std::vector<TrialResult> results(static_cast<std::size_t>(opt.trials));
    parallel_for(opt.trials, opt.jobs, [&](std::int64_t trial) {
        TrialResult& slot = results[static_cast<std::size_t>(trial)];
        try {
            const Instance inst = draw_instance(opt.seed, trial, opt.suite == "unit-invariant");
            slot = run_trial(opt.suite, inst, win, opt);
        } catch (const ExactBudgetExceeded& e) {
            slot.pass = false;
            slot.error_code = kExitBudgetExhausted;
            slot.error = e.what();
        } catch (const std::exception& e) {
            slot.pass = false;
            slot.error_code = kExitInvalidInput;
            slot.error = e.what();
        }
    });

    VerificationReport report;
    report.suite = opt.suite;
    report.parameters = {{"trials", opt.trials}, {"seed", opt.seed}};
    if (opt.suite != "mu-decay") report.parameters["steps"] = win.steps;
    if (win.n_max > 0) {
        report.parameters["i_max"] = win.i_max;
        report.parameters[opt.suite == "mu-decay" ? "k_max" : "n_max"] = win.n_max;
    }
    report.parameters["mode"] = NumericMode::exact(opt.budget).to_string();
    report.parameters["instances"] =
        opt.suite == "unit-invariant" ? "x0, y0 in (0, 10] (num, den <= 2^16); gamma = 1"
                                      : "x0, y0 in (0, 10] (num, den <= 2^16); gamma uniform:1/4:3/4, 16-bit";
    if (opt.suite == "tail") report.parameters["tolerance"] = to_text(opt.tolerance);

    std::int64_t checks = 0;
    std::int64_t failed = 0;
    std::int64_t converged = 0;
    std::int64_t worst_trial = -1;
    Json failures = Json::array();
    for (std::int64_t trial = 0; trial < opt.trials; ++trial) {
        const TrialResult& r = results[static_cast<std::size_t>(trial)];
        checks += r.checks;
        converged += r.converged;
        if (!r.pass) {
            ++failed;
            if (failures.size() < 10) failures.push_back(trial);
        }
        if (r.error_code != kExitPass && out.exit_code == kExitPass) {
            out.exit_code = r.error_code;
            out.message = "trial " + std::to_string(trial) + ": " + r.error;
        }
        if (r.error_code == kExitPass && (worst_trial < 0 || r.worst_key > results[static_cast<std::size_t>(worst_trial)].worst_key))
            worst_trial = trial;
    }
    report.pass = failed == 0;
    if (worst_trial >= 0) {
        const TrialResult& w = results[static_cast<std::size_t>(worst_trial)];
        report.worst_residual = w.worst_text;
        report.witness = Json{{"trial", worst_trial}};
        for (auto it = w.witness.begin(); it != w.witness.end(); ++it) report.witness[it.key()] = it.value();
    }
    report.metrics = {{"checks", checks}, {"failed_trials", failed}};
    if (!failures.empty()) report.metrics["first_failures"] = failures;
    if (opt.suite == "tail") report.metrics["converged_gaps"] = converged;
    if (out.exit_code != kExitPass) report.metrics["error"] = out.message;

    out.report = report.to_json();
    if (out.exit_code == kExitPass && !report.pass) out.exit_code = kExitCheckFailed;
    return out;
}

// -- sweep -------------------------------------------------------------------

namespace {

struct CellResult {
    Json json;
    bool pass = true;
    std::optional<Rational> min_y;
    std::optional<Rational> max_x;
    std::optional<Rational> max_y;
    std::string min_y_text, max_x_text, max_y_text;
    int error_code = kExitPass;
    std::string error;
};

Rational exact_value(const Rational& r) { return r; }
Rational exact_value(const Real& r) { return r.to_rational(); }

template <Scalar S>
void analyse_cell(const Orbit<S>& orbit, const SweepSpec& spec, CellResult& cell) {
    const auto cls = classify_regime(orbit.coefficients());
    Json& j = cell.json;
    j["regime"] = cls.to_json();

    const auto skeleton = skeleton_check(orbit);
    Json asserted = {{"skeleton_ok", skeleton.ok}};

    std::int64_t m_idx = 0;
    std::int64_t x_idx = 0;
    std::int64_t y_idx = 0;
    for (std::int64_t n = 1; n <= orbit.last_index(); ++n) {
        if (orbit.y(n) < orbit.y(m_idx)) m_idx = n;
        if (orbit.x(n) > orbit.x(x_idx)) x_idx = n;
        if (orbit.y(n) > orbit.y(y_idx)) y_idx = n;
    }
    cell.min_y = exact_value(orbit.y(m_idx));
    cell.max_x = exact_value(orbit.x(x_idx));
    cell.max_y = exact_value(orbit.y(y_idx));
    cell.min_y_text = to_text(orbit.y(m_idx));
    cell.max_x_text = to_text(orbit.x(x_idx));
    cell.max_y_text = to_text(orbit.y(y_idx));

    switch (cls.regime) {
    case Regime::SubUnit: {
        const auto b = bounds_report(orbit, cls.gamma_sup, spec.tail_fraction, spec.tolerance);
        j["bounds"] = b.to_json();
        asserted["tail_bound_ok"] = b.tail_bound_ok;
        break;
    }
    case Regime::Unit: {
        const auto inv = unit_convergence_probe(orbit, spec.tolerance);
        j["invariant"] = inv.to_json();
        const bool drift_ok = [&] {
            if constexpr (is_exact_v<S>) {
                return sgn(inv.max_drift) == 0;
            } else {
                const long bits = orbit.mode().mantissa_bits();
                return inv.max_drift <= inv.A * pow2_real(16 - bits, bits) * Real(orbit.last_index() + 1, bits);
            }
        }();
        asserted["conservation_ok"] = drift_ok;
        break;
    }
    case Regime::SuperUnit: {
        const auto d = divergence_probe(orbit, Rational(1000000), Rational(1, 1000000));
        j["divergence"] = d.to_json();
        asserted["y_strictly_increasing"] = d.metrics["y_strictly_increasing"];
        break;
    }
    case Regime::Mixed:
        j["skeleton"] = {{"max_product", to_text(skeleton.max_product)}, {"index", skeleton.index}};
        break;
    }
    j["asserted"] = asserted;
    for (const auto& [key, value] : asserted.items())
        if (!value.template get<bool>()) cell.pass = false;
    j["pass"] = cell.pass;
}

} // namespace

SweepOutcome run_sweep(const SweepSpec& spec) {
    SweepOutcome out;
    if (spec.x0.empty() || spec.y0.empty() || spec.coefficients.empty()) {
        out.exit_code = kExitInvalidInput;
        out.message = "sweep grids must be nonempty";
        return out;
    }
    if (spec.steps < 0) {
        out.exit_code = kExitInvalidInput;
        out.message = "steps must be nonnegative";
        return out;
    }
    const std::size_t nx = spec.x0.size();
    const std::size_t ny = spec.y0.size();
    const std::size_t ng = spec.coefficients.size();
    const auto count = static_cast<std::int64_t>(nx * ny * ng);

    std::vector<CellResult> cells(static_cast<std::size_t>(count));
    parallel_for(count, spec.jobs, [&](std::int64_t c) {
        const auto idx = static_cast<std::size_t>(c);
        const std::size_t ix = idx / (ny * ng);
        const std::size_t iy = (idx / ng) % ny;
        const std::size_t ig = idx % ng;
        CellResult& cell = cells[idx];
        cell.json = {{"cell", c},
                     {"index", {ix, iy, ig}},
                     {"x0", to_text(spec.x0[ix])},
                     {"y0", to_text(spec.y0[iy])},
                     {"coefficients", spec.coefficients[ig].describe()},
                     {"steps", spec.steps},
                     {"mode", spec.mode.to_string()}};
        try {
            const AnyOrbit orbit = evolve_any(spec.x0[ix], spec.y0[iy], spec.coefficients[ig], spec.steps, spec.mode);
            std::visit([&](const auto& o) { analyse_cell(o, spec, cell); }, orbit);
        } catch (const ExactBudgetExceeded& e) {
            cell.pass = false;
            cell.error_code = kExitBudgetExhausted;
            cell.error = e.what();
        } catch (const std::exception& e) {
            cell.pass = false;
            cell.error_code = kExitInvalidInput;
            cell.error = e.what();
        }
        if (cell.error_code != kExitPass) {
            cell.json["error"] = cell.error;
            cell.json["pass"] = false;
        }
    });

    Json array = Json::array();
    std::int64_t passed = 0;
    std::int64_t best_m = -1, best_x = -1, best_y = -1;
    for (std::int64_t c = 0; c < count; ++c) {
        const CellResult& cell = cells[static_cast<std::size_t>(c)];
        array.push_back(cell.json);
        if (cell.pass) ++passed;
        if (cell.error_code != kExitPass && out.exit_code == kExitPass) {
            out.exit_code = cell.error_code;
            out.message = "cell " + std::to_string(c) + ": " + cell.error;
        }
        if (!cell.min_y) continue;
        auto at = [&](std::int64_t k) -> const CellResult& { return cells[static_cast<std::size_t>(k)]; };
        if (best_m < 0 || *cell.min_y < *at(best_m).min_y) best_m = c;
        if (best_x < 0 || *cell.max_x > *at(best_x).max_x) best_x = c;
        if (best_y < 0 || *cell.max_y > *at(best_y).max_y) best_y = c;
    }
    Json summary = {{"cells", count}, {"passed", passed}, {"failed", count - passed}};
    if (best_m >= 0) {
        summary["min_y"] = {{"value", cells[static_cast<std::size_t>(best_m)].min_y_text}, {"cell", best_m}};
        summary["max_x"] = {{"value", cells[static_cast<std::size_t>(best_x)].max_x_text}, {"cell", best_x}};
        summary["max_y"] = {{"value", cells[static_cast<std::size_t>(best_y)].max_y_text}, {"cell", best_y}};
    }
    out.aggregate = {{"cells", array}, {"summary", summary}};
    if (out.exit_code == kExitPass && passed != count) out.exit_code = kExitCheckFailed;
    return out;
}

} // namespace ratsys
