// Command-line front end: simulate, verify, sweep, report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ratsys/harness.hpp"
#include "ratsys/report.hpp"

namespace {

using namespace ratsys;

// Flat `key = value` lines become `--key value` arguments. Keys that also
// appear on the command line are dropped.
std::vector<std::string> config_arguments(const std::string& path, const std::vector<std::string>& given) {
    auto given_on_command_line = [&](const std::string& key) {
        for (const auto& a : given)
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        return false;
    };
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::vector<std::string> args;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (given_on_command_line(key)) continue;
        if (key == "gamma") {
            // `gamma = a; b` lists several sequences for sweeps.
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ';')) {
                args.push_back("--gamma");
                args.push_back(trim(item));
            }
            continue;
        }
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

CoefficientSequence parse_gamma(std::string spec, std::optional<std::uint64_t> seed) {
    if (spec.rfind("uniform:", 0) == 0 && spec.find("seed=") == std::string::npos) {
        if (!seed) throw std::invalid_argument("uniform coefficients need seed= or --seed");
        spec += ":seed=" + std::to_string(*seed);
    }
    return CoefficientSequence::parse(spec);
}

int write_json(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << dump(j);
        return kExitPass;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot write " << path << '\n';
        return kExitInvalidInput;
    }
    file << dump(j);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    // --config entries are spliced in right after the subcommand name.
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            continue;
        }
        try {
            auto extra = config_arguments(path, args);
            const auto at = args.empty() ? args.end() : args.begin() + 1;
            args.insert(at, extra.begin(), extra.end());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitInvalidInput;
        }
        break;
    }

    CLI::App app{"Simulator and verifier for x' = x/y, y' = x + gamma_n y"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string x0_text = "1", y0_text = "1", mode_text = "exact", out_path;
    std::vector<std::string> gamma_specs;
    std::int64_t steps = 100;
    std::optional<std::uint64_t> budget;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::string tol_text;

    auto* sim = app.add_subcommand("simulate", "Evolve one orbit and write it as CSV");
    sim->add_option("--x0", x0_text, "Initial x (p/q or decimal)");
    sim->add_option("--y0", y0_text, "Initial y (p/q or decimal)");
    sim->add_option("--gamma", gamma_specs, "const:G | periodic:G1,G2,... | uniform:LO:HI:seed=S[:bits=B] | file:PATH")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sim->add_option("--steps", steps, "Number of steps");
    sim->add_option("--mode", mode_text, "exact[,budget=BITS] | float:BITS");
    sim->add_option("--budget", budget, "Exact bit budget per scalar");
    sim->add_option("--seed", seed, "Seed for uniform coefficients without seed=");
    sim->add_option("--out", out_path, "CSV output path (stdout when omitted)");

    std::string suite;
    std::int64_t trials = 200;
    std::optional<std::int64_t> verify_steps;
    auto* ver = app.add_subcommand("verify", "Run an exact verification suite over seeded random instances");
    ver->add_option("--suite", suite, "telescoping | coupling | residual | skeleton | unit-invariant | mu-decay | ratio-monotone | tail")
        ->required();
    ver->add_option("--trials", trials, "Number of random instances");
    ver->add_option("--seed", seed, "Base seed");
    ver->add_option("--steps", verify_steps, "Orbit horizon (suite default when omitted)");
    ver->add_option("--budget", budget, "Exact bit budget per scalar");
    ver->add_option("--tol", tol_text, "Convergence tolerance (tail suite)");
    ver->add_option("--jobs", jobs, "Worker threads");
    ver->add_option("--out", out_path, "Report path (stdout when omitted)");

    std::string x0_list = "1", y0_list = "1", tail_text = "1/2";
    std::int64_t sweep_steps = 1000;
    std::string sweep_mode = "float:256";
    auto* swp = app.add_subcommand("sweep", "Run a grid of orbits and aggregate per-cell reports");
    swp->add_option("--x0", x0_list, "Comma-separated initial x values");
    swp->add_option("--y0", y0_list, "Comma-separated initial y values");
    swp->add_option("--gamma", gamma_specs, "Coefficient sequence (repeat for a grid)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    swp->add_option("--steps", sweep_steps, "Steps per cell");
    swp->add_option("--mode", sweep_mode, "exact[,budget=BITS] | float:BITS");
    swp->add_option("--budget", budget, "Exact bit budget per scalar");
    swp->add_option("--seed", seed, "Seed for uniform coefficients without seed=");
    swp->add_option("--tail", tail_text, "Tail fraction held to the cap");
    swp->add_option("--tol", tol_text, "Additive tolerance on the tail cap");
    swp->add_option("--jobs", jobs, "Worker threads");
    swp->add_option("--out", out_path, "Aggregate JSON path (stdout when omitted)");

    std::string report_path;
    auto* rep = app.add_subcommand("report", "Pretty-print a JSON report");
    rep->add_option("path", report_path, "Report file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (sim->parsed()) {
            RunConfig cfg;
            cfg.x0 = parse_positive(x0_text);
            cfg.y0 = parse_positive(y0_text);
            cfg.coefficients = parse_gamma(gamma_specs.empty() ? "const:1/2" : gamma_specs.back(), seed);
            cfg.steps = steps;
            cfg.mode = parse_mode(mode_text, budget);
            cfg.seed = seed.value_or(0);
            cfg.out_path = out_path;
            return run_simulate(cfg, std::cout, std::cerr);
        }
        if (ver->parsed()) {
            VerifyOptions opt;
            opt.suite = suite;
            opt.trials = trials;
            opt.seed = seed.value_or(0);
            opt.steps = verify_steps;
            opt.budget = budget.value_or(kDefaultExactBudget);
            opt.jobs = jobs;
            if (!tol_text.empty()) opt.tolerance = parse_positive(tol_text);
            VerifyOutcome result = run_verify(opt);
            if (!result.message.empty()) std::cerr << "error: " << result.message << '\n';
            if (result.report.is_null()) return result.exit_code;
            if (int rc = write_json(result.report, out_path); rc != kExitPass) return rc;
            if (result.exit_code == kExitCheckFailed)
                std::cerr << "FAIL " << suite << ": worst " << result.report["worst_residual"].get<std::string>()
                          << " at " << result.report["witness"].dump() << '\n';
            return result.exit_code;
        }
        if (swp->parsed()) {
            SweepSpec spec;
            spec.x0 = parse_scalar_list(x0_list);
            spec.y0 = parse_scalar_list(y0_list);
            if (gamma_specs.empty()) gamma_specs.push_back("const:1/2");
            for (const auto& g : gamma_specs) spec.coefficients.push_back(parse_gamma(g, seed));
            spec.steps = sweep_steps;
            spec.mode = parse_mode(sweep_mode, budget);
            spec.tail_fraction = parse_positive(tail_text);
            if (!tol_text.empty()) spec.tolerance = parse_positive(tol_text);
            spec.jobs = jobs;
            SweepOutcome result = run_sweep(spec);
            if (!result.message.empty()) std::cerr << "error: " << result.message << '\n';
            if (result.aggregate.is_null()) return result.exit_code;
            if (int rc = write_json(result.aggregate, out_path); rc != kExitPass) return rc;
            return result.exit_code;
        }
        if (rep->parsed()) {
            std::ifstream in(report_path);
            if (!in) throw std::invalid_argument("cannot open " + report_path);
            const Json j = Json::parse(in);
            std::cout << pretty_print(j);
            return kExitPass;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
