// Two independent minimizers of the interaction energy, both compared
// against the closed form: gradient descent on particle positions and
// Frank-Wolfe on grid weights.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ie1d/kernel.hpp"
#include "ie1d/measure.hpp"

namespace ie1d::solve {

struct ParticleOpts {
    int n = 50;
    long long max_iters = 100000;
    double grad_tol = 1e-8;
    double init_step = 1.0;   // backtracking start, doubled after an accepted step
    double shrink = 0.5;      // backtracking factor, in (0, 1)
    double armijo_c = 1e-4;   // sufficient-decrease constant
    std::uint64_t seed = 0;
    // When nonempty (size n), used verbatim instead of the seeded
    // equispaced-plus-noise initialization.
    std::vector<double> initial_positions;
};

struct FwOpts {
    double lo = -2.0;
    double hi = 2.0;
    int m = 401;
    long long max_iters = 10000000;
    double gap_tol = 1e-6;
    bool recenter_each_iter = true;
    // When nonempty overrides lo/hi/m; may be non-uniform (no recentering,
    // dense Gram) and may have fewer than 3 nodes.
    std::vector<double> custom_grid;
};

struct SolveReport {
    std::string method;       // "particles" | "grid_fw"
    double alpha = 0.0;
    std::string regime;       // "A" | "B"
    long long size = 0;       // particle count n or grid size m
    std::uint64_t seed = 0;
    long long iterations = 0;
    std::string termination;  // "grad_tol" | "gap_tol" | "max_iters" | "stalled"
    double initial_energy = 0.0;
    double final_energy = 0.0;
    // Continuum energy estimate: particles add a per-cell self-interaction
    // correction to the off-diagonal objective; the grid value already is the
    // energy of the cell-smeared measure.
    double energy_continuum_estimate = 0.0;
    double energy_gap_abs = 0.0;  // continuum estimate minus reference energy
    double energy_gap_rel = 0.0;
    double residual = 0.0;        // particles: max |gradient|; grid: FW gap
    double wasserstein1 = 0.0;
    bool diagonal_included = true;

    nlohmann::json to_json() const;
};

// Budget exhaustion for the grid solver; carries the best iterate.
class BudgetError : public std::runtime_error {
  public:
    BudgetError(const std::string& msg, meas::GridMeasure best, SolveReport report)
        : std::runtime_error(msg), best_(std::move(best)), report_(std::move(report)) {}
    const meas::GridMeasure& best() const { return best_; }
    const SolveReport& report() const { return report_; }

  private:
    meas::GridMeasure best_;
    SolveReport report_;
};

std::pair<meas::DiscreteMeasure, SolveReport> solve_particles(const Kernel& k,
                                                              const ParticleOpts& opts);

std::pair<meas::GridMeasure, SolveReport> solve_grid_fw(const Kernel& k, const FwOpts& opts);

}  // namespace ie1d::solve
