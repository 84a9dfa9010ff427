// Probability measures on the line and the two fundamental functionals:
// total interaction energy and pointwise potential, plus the Wasserstein-1
// distance used to compare solver output against the closed form.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ie1d/closed_form.hpp"
#include "ie1d/kernel.hpp"

namespace ie1d::meas {

// Atomic measure: sum of weighted Diracs. Positions need not be sorted.
struct DiscreteMeasure {
    std::vector<double> positions;
    std::vector<double> weights;
};

// Weighted nodes on a strictly increasing grid.
struct GridMeasure {
    std::vector<double> grid;
    std::vector<double> weights;
};

struct CenterOfMass {
    double value;
};

using Measure = std::variant<DiscreteMeasure, GridMeasure, cf::ClosedFormSolution>;

// Throw std::invalid_argument unless weights are positive (discrete) or
// nonnegative (grid), sum to 1 within 1e-12, sizes match, positions are
// finite, and a grid is strictly increasing.
void validate(const DiscreteMeasure& mu);
void validate(const GridMeasure& mu);

// (1/2) sum_{i,j} w_i w_j K(|x_i - x_j|) for atomic inputs. The diagonal is
// included when K(0) is finite (it contributes 0); in regime B with
// alpha <= 0 self-pairs are excluded so the off-diagonal objective stays
// finite. Closed-form inputs return the exact energy when available and the
// quadrature value otherwise.
double energy(const Measure& mu, const Kernel& k);

// phi(x) = integral of K(|x - y|) dmu(y). May return +infinity in regime B
// with alpha <= 0 when x sits on an atom.
double potential_at(const Measure& mu, const Kernel& k, double x);

// integral of |F_mu - F_nu| over the line. Exact for piecewise-constant
// CDFs; segments involving the closed-form CDF are integrated by quadrature
// between breakpoints with sign changes located by bisection.
double wasserstein1(const Measure& mu, const Measure& nu);

CenterOfMass center_of_mass(const Measure& mu);

Measure translate(const Measure& mu, double t);

// JSON measure exchange format:
//   {"type": "discrete", "positions": [...], "weights": [...]}
//   {"type": "grid",     "positions": [...], "weights": [...]}
//   {"type": "closedform", "alpha": a, "regime": "A"|"B", "center": c}
nlohmann::json to_json(const Measure& mu);
Measure measure_from_json(const nlohmann::json& j);

}  // namespace ie1d::meas
