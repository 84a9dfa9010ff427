// Command-line front end: closed-form summaries, identity and
// Euler-Lagrange verification, the two solvers, and alpha sweeps.
//
// Exit codes: 0 success/pass, 1 verification or convergence failure,
// 2 usage or domain error.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ie1d/closed_form.hpp"
#include "ie1d/kernel.hpp"
#include "ie1d/measure.hpp"
#include "ie1d/numeric.hpp"
#include "ie1d/quadrature.hpp"
#include "ie1d/solver.hpp"
#include "ie1d/verify.hpp"

namespace {

using nlohmann::json;
using namespace ie1d;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// ---------------------------------------------------------------------------
// config file: flat key=value lines, '#' comments; keys mirror long option
// names; command-line flags take precedence; unknown keys are rejected.

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     ": empty key");
        kv[key] = val;
    }
    return kv;
}

template <class T>
struct is_optional : std::false_type {};
template <class U>
struct is_optional<std::optional<U>> : std::true_type {};

// Applies config values to options the command line left unset.
class ConfigBinder {
  public:
    explicit ConfigBinder(CLI::App* cmd) : cmd_(cmd) {}

    template <class T>
    void bind(const std::string& key, T& target) {
        setters_[key] = [&target, key](const std::string& raw) {
            target = parse_value<T>(raw, key);
        };
    }

    void apply(const std::map<std::string, std::string>& kv) const {
        for (const auto& [key, raw] : kv) {
            const auto it = setters_.find(key);
            if (it == setters_.end())
                throw std::invalid_argument("unknown config key '" + key + "'");
            const CLI::Option* opt = cmd_->get_option_no_throw("--" + key);
            if (opt != nullptr && opt->count() > 0) continue;  // flag wins
            it->second(raw);
        }
    }

  private:
    template <class T>
    static T parse_value(const std::string& raw, const std::string& key) {
        if constexpr (is_optional<T>::value) {
            return parse_value<typename T::value_type>(raw, key);
        } else if constexpr (std::is_same_v<T, std::string>) {
            return raw;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (raw == "true" || raw == "1" || raw == "yes") return true;
            if (raw == "false" || raw == "0" || raw == "no") return false;
            throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" +
                                        raw + "'");
        } else {
            std::istringstream ss(raw);
            T v{};
            ss >> v;
            if (ss.fail() || !ss.eof())
                throw std::invalid_argument("config key '" + key + "': cannot parse '" + raw +
                                            "'");
            return v;
        }
    }

    CLI::App* cmd_;
    std::map<std::string, std::function<void(const std::string&)>> setters_;
};

// ---------------------------------------------------------------------------

Regime parse_regime(const std::string& s) {
    if (s == "A") return Regime::A;
    if (s == "B") return Regime::B;
    throw std::invalid_argument("regime must be A or B, got '" + s + "'");
}

// Resolves alpha plus an optional explicit regime into a kernel; a declared
// regime that disagrees with alpha is a usage error.
Kernel make_kernel(double alpha, const std::string& regime_str) {
    const Regime inferred = regime_of_alpha(alpha);  // throws outside both ranges
    if (!regime_str.empty() && parse_regime(regime_str) != inferred)
        throw std::invalid_argument("alpha " + format_double(alpha) +
                                    " does not lie in regime " + regime_str);
    return Kernel(alpha, inferred);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::invalid_argument("error writing '" + path + "'");
}

std::string num_or_na(double v) { return std::isnan(v) ? "n/a" : format_double(v); }

json num_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

// ---------------------------------------------------------------------------
// summary

struct SummaryArgs {
    std::optional<double> alpha;
    std::string regime;
    bool as_json = false;
    std::string config;
};

int cmd_summary(CLI::App* cmd, const SummaryArgs& args_in) {
    SummaryArgs args = args_in;
    if (!args.config.empty()) {
        ConfigBinder b(cmd);
        b.bind("alpha", args.alpha);
        b.bind("regime", args.regime);
        b.bind("json", args.as_json);
        b.apply(load_config(args.config));
    }
    if (!args.alpha) throw std::invalid_argument("--alpha is required");
    const Kernel k = make_kernel(*args.alpha, args.regime);
    const cf::ClosedFormSolution sol(k);
    const cf::Constants& c = sol.constants();
    const bool regime_b = k.regime() == Regime::B;
    const double energy = sol.energy_available() ? sol.energy()
                                                 : std::numeric_limits<double>::quiet_NaN();
    const double eta = sol.energy_available() ? sol.eta()
                                              : std::numeric_limits<double>::quiet_NaN();
    if (args.as_json) {
        json out{{"alpha", k.alpha()},
                 {"regime", regime_b ? "B" : "A"},
                 {"R", sol.radius()},
                 {"E", num_or_null(energy)},
                 {"eta", num_or_null(eta)},
                 {"C", c.C},
                 {"C_prime", c.C_prime},
                 {"second_moment", sol.second_moment()}};
        if (regime_b) out["D"] = c.D;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "alpha          = " << format_double(k.alpha()) << "\n"
                  << "regime         = " << (regime_b ? "B" : "A") << "\n"
                  << "R              = " << format_double(sol.radius()) << "\n"
                  << "E              = " << num_or_na(energy) << "\n"
                  << "eta            = " << num_or_na(eta) << "\n"
                  << "C              = " << format_double(c.C) << "\n"
                  << "C_prime        = " << format_double(c.C_prime) << "\n";
        if (regime_b) std::cout << "D              = " << format_double(c.D) << "\n";
        std::cout << "second_moment  = " << format_double(sol.second_moment()) << "\n";
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    std::optional<double> alpha;
    std::string regime;
    std::string identity;
    bool el = false;
    std::vector<double> xs;
    double tol = 1e-6;
    int interior_pts = 64;
    double exterior_span = 1.0;
    std::string config;
};

int cmd_verify(CLI::App* cmd, const VerifyArgs& args_in) {
    VerifyArgs args = args_in;
    if (!args.config.empty()) {
        ConfigBinder b(cmd);
        b.bind("alpha", args.alpha);
        b.bind("regime", args.regime);
        b.bind("identity", args.identity);
        b.bind("el", args.el);
        b.bind("tol", args.tol);
        b.bind("interior-pts", args.interior_pts);
        b.bind("exterior-span", args.exterior_span);
        b.apply(load_config(args.config));
    }
    if (!args.alpha) throw std::invalid_argument("--alpha is required");
    if (args.el != args.identity.empty())
        throw std::invalid_argument("exactly one of --identity or --el is required");

    if (args.el) {
        const Kernel k = make_kernel(*args.alpha, args.regime);
        const verify::ELReport rep =
            verify::verify_euler_lagrange(k, args.interior_pts, args.exterior_span, args.tol);
        std::cout << rep.to_json().dump(2) << "\n";
        return rep.pass ? kExitPass : kExitFail;
    }

    // identity mode: alpha only has to lie in the identity's admissible
    // range, which verify_identity enforces; an explicit regime must still
    // agree with alpha
    if (!args.regime.empty()) make_kernel(*args.alpha, args.regime);
    const verify::Identity id = verify::identity_from_name(args.identity);
    std::vector<double> xs = args.xs;
    if (xs.empty()) xs = {0.15, 0.45, 0.8, 1.25, 1.75, 2.5};
    const verify::IdentityReport rep = verify::verify_identity(id, *args.alpha, xs, args.tol);
    std::cout << rep.to_json().dump(2) << "\n";
    return rep.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    std::optional<double> alpha;
    std::string regime;
    std::string method;
    int n = 200;
    std::uint64_t seed = 0;
    std::string grid = "-2:2:401";
    long long max_iters = -1;  // -1: per-method default
    double grad_tol = 1e-8;
    double gap_tol = 1e-6;
    std::string out;
    std::string config;
};

// "lo:hi:m" with m >= 3, or "c:c:1" for the degenerate one-point grid
void parse_grid(const std::string& s, solve::FwOpts& opts) {
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("--grid expects lo:hi:m, got '" + s + "'");
    double lo = 0.0, hi = 0.0;
    long m = 0;
    try {
        std::size_t used = 0;
        const std::string lo_s = s.substr(0, c1), hi_s = s.substr(c1 + 1, c2 - c1 - 1),
                          m_s = s.substr(c2 + 1);
        lo = std::stod(lo_s, &used);
        if (used != lo_s.size()) throw std::invalid_argument(lo_s);
        hi = std::stod(hi_s, &used);
        if (used != hi_s.size()) throw std::invalid_argument(hi_s);
        m = std::stol(m_s, &used);
        if (used != m_s.size()) throw std::invalid_argument(m_s);
    } catch (const std::exception&) {
        throw std::invalid_argument("--grid expects lo:hi:m, got '" + s + "'");
    }
    if (m == 1) {
        if (lo != hi)
            throw std::invalid_argument("--grid with m=1 needs lo == hi, got '" + s + "'");
        opts.custom_grid = std::vector<double>{lo};
        return;
    }
    if (m < 3 || !(hi > lo))
        throw std::invalid_argument("--grid needs hi > lo and m >= 3, got '" + s + "'");
    opts.lo = lo;
    opts.hi = hi;
    opts.m = static_cast<int>(m);
}

int cmd_solve(CLI::App* cmd, const SolveArgs& args_in) {
    SolveArgs args = args_in;
    if (!args.config.empty()) {
        ConfigBinder b(cmd);
        b.bind("alpha", args.alpha);
        b.bind("regime", args.regime);
        b.bind("method", args.method);
        b.bind("n", args.n);
        b.bind("seed", args.seed);
        b.bind("grid", args.grid);
        b.bind("max-iters", args.max_iters);
        b.bind("grad-tol", args.grad_tol);
        b.bind("gap-tol", args.gap_tol);
        b.bind("out", args.out);
        b.apply(load_config(args.config));
    }
    if (!args.alpha) throw std::invalid_argument("--alpha is required");
    if (args.method != "particles" && args.method != "grid")
        throw std::invalid_argument("--method must be particles or grid");
    const Kernel k = make_kernel(*args.alpha, args.regime);

    meas::Measure result{meas::DiscreteMeasure{}};
    solve::SolveReport report;
    if (args.method == "particles") {
        solve::ParticleOpts opts;
        opts.n = args.n;
        opts.seed = args.seed;
        opts.grad_tol = args.grad_tol;
        if (args.max_iters >= 0) opts.max_iters = args.max_iters;
        auto [mu, rep] = solve::solve_particles(k, opts);
        result = std::move(mu);
        report = std::move(rep);
    } else {
        solve::FwOpts opts;
        parse_grid(args.grid, opts);
        opts.gap_tol = args.gap_tol;
        if (args.max_iters >= 0) opts.max_iters = args.max_iters;
        auto [mu, rep] = solve::solve_grid_fw(k, opts);
        result = std::move(mu);
        report = std::move(rep);
    }
    if (!args.out.empty()) write_text_file(args.out, meas::to_json(result).dump(2) + "\n");
    std::cout << report.to_json().dump(2) << "\n";
    return report.termination == "max_iters" ? kExitFail : kExitPass;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::optional<double> alpha_min;
    std::optional<double> alpha_max;
    std::optional<int> steps;
    std::string regime;
    double tol = 1e-6;
    int interior_pts = 64;
    double exterior_span = 1.0;
    std::string out;
    std::string config;
};

int cmd_sweep(CLI::App* cmd, const SweepArgs& args_in) {
    SweepArgs args = args_in;
    if (!args.config.empty()) {
        ConfigBinder b(cmd);
        b.bind("alpha-min", args.alpha_min);
        b.bind("alpha-max", args.alpha_max);
        b.bind("steps", args.steps);
        b.bind("regime", args.regime);
        b.bind("tol", args.tol);
        b.bind("interior-pts", args.interior_pts);
        b.bind("exterior-span", args.exterior_span);
        b.bind("out", args.out);
        b.apply(load_config(args.config));
    }
    if (!args.alpha_min || !args.alpha_max || !args.steps)
        throw std::invalid_argument("--alpha-min, --alpha-max and --steps are required");
    const int steps = *args.steps;
    if (steps < 1) throw std::invalid_argument("--steps must be >= 1");

    std::vector<double> alphas;
    for (int i = 0; i < steps; ++i) {
        const double a = steps == 1 ? *args.alpha_min
                                    : *args.alpha_min + i * (*args.alpha_max - *args.alpha_min) /
                                                            (steps - 1);
        alphas.push_back(a);
    }
    // validate the whole grid up front so a mid-sweep domain error cannot
    // leave a truncated table behind
    std::vector<Kernel> kernels;
    kernels.reserve(alphas.size());
    for (double a : alphas) kernels.push_back(make_kernel(a, args.regime));

    std::ostringstream csv;
    csv << "alpha,R,E,second_moment,el_residual\n";
    for (const Kernel& k : kernels) {
        const cf::ClosedFormSolution sol(k);
        const verify::ELReport rep =
            verify::verify_euler_lagrange(k, args.interior_pts, args.exterior_span, args.tol);
        const double residual =
            std::max(rep.max_interior_dev, std::max(0.0, -rep.min_exterior_slack));
        const double energy = sol.energy_available()
                                  ? sol.energy()
                                  : std::numeric_limits<double>::quiet_NaN();
        csv << format_double(k.alpha()) << ',' << format_double(sol.radius()) << ','
            << format_double(energy) << ',' << format_double(sol.second_moment()) << ','
            << format_double(residual) << "\n";
    }
    if (!args.out.empty())
        write_text_file(args.out, csv.str());
    else
        std::cout << csv.str();
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-dimensional interaction-energy toolkit"};
    app.require_subcommand(1);

    SummaryArgs sum_args;
    CLI::App* sum = app.add_subcommand("summary", "closed-form constants for one alpha");
    sum->add_option("--alpha", sum_args.alpha, "kernel exponent");
    sum->add_option("--regime", sum_args.regime, "A or B (inferred when omitted)");
    sum->add_flag("--json", sum_args.as_json, "emit JSON instead of text");
    sum->add_option("--config", sum_args.config, "key=value config file");

    VerifyArgs ver_args;
    CLI::App* ver = app.add_subcommand("verify", "check one identity or the EL conditions");
    ver->add_option("--alpha", ver_args.alpha, "kernel exponent");
    ver->add_option("--regime", ver_args.regime, "A or B (inferred when omitted)");
    ver->add_option("--identity", ver_args.identity,
                    "INT, INT1, INT2, INT3, INT1A, INT2A, INT3A or COMPINT");
    ver->add_flag("--el", ver_args.el, "verify the Euler-Lagrange conditions");
    ver->add_option("--x", ver_args.xs, "evaluation points (defaults to six spanning points)");
    ver->add_option("--tol", ver_args.tol, "pass tolerance");
    ver->add_option("--interior-pts", ver_args.interior_pts, "interior grid size (EL)");
    ver->add_option("--exterior-span", ver_args.exterior_span, "exterior reach beyond R (EL)");
    ver->add_option("--config", ver_args.config, "key=value config file");

    SolveArgs sol_args;
    CLI::App* sol = app.add_subcommand("solve", "run a minimizer");
    sol->add_option("--alpha", sol_args.alpha, "kernel exponent");
    sol->add_option("--regime", sol_args.regime, "A or B (inferred when omitted)");
    sol->add_option("--method", sol_args.method, "particles or grid");
    sol->add_option("-n,--n", sol_args.n, "particle count");
    sol->add_option("--seed", sol_args.seed, "PRNG seed (particle init)");
    sol->add_option("--grid", sol_args.grid, "uniform grid lo:hi:m");
    sol->add_option("--max-iters", sol_args.max_iters, "iteration budget");
    sol->add_option("--grad-tol", sol_args.grad_tol, "gradient norm target (particles)");
    sol->add_option("--gap-tol", sol_args.gap_tol, "duality gap target (grid)");
    sol->add_option("--out", sol_args.out, "write the final measure JSON here");
    sol->add_option("--config", sol_args.config, "key=value config file");

    SweepArgs swp_args;
    CLI::App* swp = app.add_subcommand("sweep", "CSV table over an alpha range");
    swp->add_option("--alpha-min", swp_args.alpha_min, "first alpha");
    swp->add_option("--alpha-max", swp_args.alpha_max, "last alpha");
    swp->add_option("--steps", swp_args.steps, "row count (1 emits alpha-min only)");
    swp->add_option("--regime", swp_args.regime, "A or B (inferred when omitted)");
    swp->add_option("--tol", swp_args.tol, "EL pass tolerance");
    swp->add_option("--interior-pts", swp_args.interior_pts, "interior grid size (EL)");
    swp->add_option("--exterior-span", swp_args.exterior_span, "exterior reach beyond R (EL)");
    swp->add_option("--out", swp_args.out, "write CSV here instead of stdout");
    swp->add_option("--config", swp_args.config, "key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(sum)) return cmd_summary(sum, sum_args);
        if (app.got_subcommand(ver)) return cmd_verify(ver, ver_args);
        if (app.got_subcommand(sol)) return cmd_solve(sol, sol_args);
        if (app.got_subcommand(swp)) return cmd_sweep(swp, swp_args);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const solve::BudgetError& e) {
        std::cout << e.report().to_json().dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const quad::AccuracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
