#pragma once

// Drivers behind the command-line front end. Each returns the process exit
// status:
//   0 all checks pass, 1 a check failed, 2 invalid input, 3 exact budget hit.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ratsys/coefficients.hpp"
#include "ratsys/report.hpp"
#include "ratsys/scalar.hpp"

namespace ratsys {

enum ExitCode : int {
    kExitPass = 0,
    kExitCheckFailed = 1,
    kExitInvalidInput = 2,
    kExitBudgetExhausted = 3,
};

/// "exact", "exact,budget=BITS" or "float:BITS". A separate budget, when
/// given, overrides the one in the text (and implies exact mode).
NumericMode parse_mode(std::string_view text, std::optional<std::uint64_t> budget = std::nullopt);

struct RunConfig {
    Rational x0{1};
    Rational y0{1};
    CoefficientSequence coefficients = CoefficientSequence::constant(Rational(1, 2));
    std::int64_t steps = 100;
    NumericMode mode = NumericMode::exact();
    std::uint64_t seed = 0;
    std::string out_path;  ///< empty: CSV goes to the `out` stream
};

/// Evolves the orbit, writes the CSV and a summary (regime, m_emp, sup x,
/// sup y). With no out_path the CSV goes to `out` and the summary to `err`.
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

inline const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> suites{"telescoping", "coupling",       "residual", "skeleton",
                                                 "unit-invariant", "mu-decay", "ratio-monotone", "tail"};
    return suites;
}

/// Largest orbit index used by the exact verification suites that need an
/// orbit (all but unit-invariant and mu-decay). Exact bit sizes grow roughly
/// by the golden ratio per step under non-unit coefficients.
inline constexpr std::int64_t kVerifyExactHorizon = 16;
inline constexpr std::int64_t kUnitInvariantSteps = 25;

struct VerifyOptions {
    std::string suite;
    std::int64_t trials = 200;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> steps;  ///< orbit horizon; suite default when empty
    std::uint64_t budget = kDefaultExactBudget;
    unsigned jobs = 1;
    Rational tolerance{1, 10};  ///< convergence tolerance reported by the tail suite
};

struct VerifyOutcome {
    int exit_code = kExitPass;
    Json report;
    std::string message;  ///< diagnostic for exit codes 2 and 3
};

/// Runs `trials` seeded random exact instances of the named suite. Trial t
/// draws from (seed, t) alone, and the report is independent of `jobs`.
VerifyOutcome run_verify(const VerifyOptions& options);

struct SweepSpec {
    std::vector<Rational> x0;
    std::vector<Rational> y0;
    std::vector<CoefficientSequence> coefficients;
    std::int64_t steps = 1000;
    NumericMode mode = NumericMode::floating();
    Rational tail_fraction{1, 2};
    Rational tolerance{1, 1000000};
    unsigned jobs = 1;
};

struct SweepOutcome {
    int exit_code = kExitPass;
    Json aggregate;
    std::string message;
};

/// One report per (x0, y0, coefficients) cell in lexicographic index order,
/// plus a summary of global extrema.
SweepOutcome run_sweep(const SweepSpec& spec);

/// Splits a comma-separated list of scalars.
std::vector<Rational> parse_scalar_list(std::string_view text);

/// Runs `count` independent tasks on up to `jobs` threads; task i writes its
/// own slot, so results never depend on scheduling.
void parallel_for(std::int64_t count, unsigned jobs, const std::function<void(std::int64_t)>& task);

} // namespace ratsys
