// Verification harness: certifies the integral identities behind the closed
// form, the Euler-Lagrange optimality conditions, and the convexity of the
// energy's quadratic form on the constrained perturbation space.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ie1d/kernel.hpp"

namespace ie1d::verify {

// Weighted integrals of |x-y|-kernels against (1-y^2)^{-(alpha-1)/2} dy on
// (-1,1). The wire names are part of the CLI contract.
enum class Identity { INT, INT1, INT2, INT3, INT1A, INT2A, INT3A, COMPINT };

const char* identity_name(Identity id);
Identity identity_from_name(const std::string& name);  // throws std::invalid_argument

// Admissible alpha ranges (open intervals): INT and COMPINT (2,3);
// INT1/INT2/INT3 (1,3); INT1A (1,2); INT2A (0,2); INT3A (-1,2).
bool identity_admits(Identity id, double alpha);

// Left side by direct singular quadrature; right side by closed-form
// constants plus graded-mesh remainder integrals. |x| must stay clear of the
// support edge (|x| != 1).
double identity_lhs(Identity id, double alpha, double x);
double identity_rhs(Identity id, double alpha, double x);

struct IdentityReport {
    Identity id;
    double alpha;
    std::vector<double> xs;
    double max_abs_err;
    double max_rel_err;  // |L-R| / max(1, |L|, |R|)
    double tol;
    bool pass;
    nlohmann::json to_json() const;
};

IdentityReport verify_identity(Identity id, double alpha, const std::vector<double>& xs,
                               double tol = 1e-6);

struct ELReport {
    double alpha;
    std::string regime;           // "A" | "B"
    double eta_ref;
    bool eta_empirical;           // true when eta comes from quadrature (alpha = 0)
    double max_interior_dev;      // max |phi - eta| on the interior grid
    double min_exterior_slack;    // min (phi - eta) on the exterior grid
    bool pass;
    nlohmann::json to_json() const;
};

// phi computed by direct quadrature against the closed-form density.
// Interior grid: Chebyshev points of the open support; exterior grid: 1000
// equispaced points of [a+R, a+R+exterior_span] and their mirror images.
ELReport verify_euler_lagrange(const Kernel& k, int interior_pts, double exterior_span,
                               double tol = 1e-6);

// Regime quadratic form on a uniform grid, smeared over cells so it is
// finite for every admissible alpha: +1/alpha * cell-averaged power form in
// regime A, the negated power (or log) form in regime B.
double quadratic_form_value(const Kernel& k, double lo, double hi,
                            const std::vector<double>& nu);

// Draws `trials` random coefficient vectors, projects onto zero mass (and
// zero first moment in regime A), normalizes, and evaluates the quadratic
// form. Returns the minimum over non-degenerate draws; throws
// std::runtime_error if any value fails to be strictly positive.
double convexity_probe(const Kernel& k, int trials, double lo, double hi, int m,
                       std::uint64_t seed);

// Dense oracle for the probe: smallest eigenvalue of the quadratic form's
// matrix restricted to the constraint subspace (Jacobi eigensolver).
double projected_gram_min_eig(const Kernel& k, double lo, double hi, int m);

}  // namespace ie1d::verify
