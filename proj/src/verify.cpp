#include "ie1d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ie1d/closed_form.hpp"
#include "ie1d/numeric.hpp"
#include "ie1d/quadrature.hpp"
#include "ie1d/rng.hpp"

namespace ie1d::verify {
namespace {

struct IdentitySpec {
    const char* name;
    double lo, hi;  // open alpha range
    double shift;   // kernel exponent is alpha + shift
    bool odd;       // kernel carries sgn(x - y)
};

constexpr IdentitySpec kSpecs[] = {
    {"INT", 2.0, 3.0, -3.0, true},     {"INT1", 1.0, 3.0, -2.0, false},
    {"INT2", 1.0, 3.0, -1.0, true},    {"INT3", 1.0, 3.0, 0.0, false},
    {"INT1A", 1.0, 2.0, -2.0, false},  {"INT2A", 0.0, 2.0, -1.0, true},
    {"INT3A", -1.0, 2.0, 0.0, false},  {"COMPINT", 2.0, 3.0, 0.0, false},
};

const IdentitySpec& spec_of(Identity id) { return kSpecs[static_cast<int>(id)]; }

void require_admissible(Identity id, double alpha) {
    if (!identity_admits(id, alpha)) {
        const IdentitySpec& sp = spec_of(id);
        throw std::domain_error(std::string(sp.name) + " requires alpha in (" +
                                format_double(sp.lo) + ", " + format_double(sp.hi) +
                                "), got " + format_double(alpha));
    }
}

constexpr double kLhsTol = 1e-11;
constexpr double kEdgeGap = 1e-6;

// Direct quadrature of the weighted kernel for x >= 0. Every piece is
// parametrized by the distance v to its own singular point, which the
// Gauss-Jacobi weight of integrate_power_left then absorbs; the remaining
// factor is analytic.
double lhs_nonnegative_x(const IdentitySpec& sp, double alpha, double x) {
    const double p = -0.5 * (alpha - 1.0);  // weight exponent
    const double e = alpha + sp.shift;      // kernel exponent
    double total = 0.0;
    auto add = [&total](double sigma, double len, const std::function<double(double)>& g,
                        double tol) { total += quad::integrate_power_left(g, len, sigma, tol); };
    if (x > 1.0) {
        // x - y > 0 throughout; only the weight endpoints are singular
        add(p, 1.0, [=](double v) { return std::pow((x + 1.0) - v, e) * std::pow(2.0 - v, p); },
            0.5 * kLhsTol);
        add(p, 1.0, [=](double v) { return std::pow((x - 1.0) + v, e) * std::pow(2.0 - v, p); },
            0.5 * kLhsTol);
        return total;
    }
    const double sr = sp.odd ? -1.0 : 1.0;  // sign on the y > x side
    add(p, 0.5 * (1.0 + x),
        [=](double v) { return std::pow((x + 1.0) - v, e) * std::pow(2.0 - v, p); },
        0.25 * kLhsTol);
    add(e, 0.5 * (1.0 + x),
        [=](double v) { return std::pow(((1.0 - x) + v) * ((1.0 + x) - v), p); },
        0.25 * kLhsTol);
    add(e, 0.5 * (1.0 - x),
        [=](double v) { return sr * std::pow(((1.0 - x) - v) * ((1.0 + x) + v), p); },
        0.25 * kLhsTol);
    add(p, 0.5 * (1.0 - x),
        [=](double v) { return sr * std::pow((1.0 - x) - v, e) * std::pow(2.0 - v, p); },
        0.25 * kLhsTol);
    return total;
}

}  // namespace

const char* identity_name(Identity id) { return spec_of(id).name; }

Identity identity_from_name(const std::string& name) {
    for (int i = 0; i < 8; ++i)
        if (name == kSpecs[i].name) return static_cast<Identity>(i);
    throw std::invalid_argument("unknown identity '" + name + "'");
}

bool identity_admits(Identity id, double alpha) {
    const IdentitySpec& sp = spec_of(id);
    return alpha > sp.lo && alpha < sp.hi;
}

double identity_lhs(Identity id, double alpha, double x) {
    require_admissible(id, alpha);
    if (std::abs(std::abs(x) - 1.0) < kEdgeGap)
        throw std::domain_error("identity_lhs: x too close to the support edge");
    const IdentitySpec& sp = spec_of(id);
    if (x < 0.0) return (sp.odd ? -1.0 : 1.0) * lhs_nonnegative_x(sp, alpha, -x);
    return lhs_nonnegative_x(sp, alpha, x);
}

double identity_rhs(Identity id, double alpha, double x) {
    require_admissible(id, alpha);
    const cf::Constants k = cf::compute_constants(alpha);
    const double ax = std::abs(x);
    const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    const bool out = ax > 1.0;
    switch (id) {
        case Identity::INT:
            if (!out) return 0.0;
            return k.C * sgn * std::pow(x * x - 1.0, -0.5 * (3.0 - alpha));
        case Identity::INT1: {
            double r = k.c;
            if (out) r += (alpha - 2.0) * k.C * cf::one_sided_integral(alpha, ax);
            return r;
        }
        case Identity::INT2: {
            double r = (alpha - 1.0) * k.c * x;
            if (out)
                r += (alpha - 1.0) * (alpha - 2.0) * k.C * sgn * cf::ramp_integral(alpha, ax);
            return r;
        }
        case Identity::INT3: {
            double r = 0.5 * alpha * (alpha - 1.0) * k.c * x * x + k.C_prime;
            if (out) {
                quad::Hints h;
                h.left_exponent = 0.5 * (alpha + 1.0);
                const double nested = quad::integrate_adaptive(
                    [alpha](double y) { return cf::ramp_integral(alpha, y); }, 1.0, ax, 1e-12,
                    h);
                r += alpha * (alpha - 1.0) * (alpha - 2.0) * k.C * nested;
            }
            return r;
        }
        case Identity::INT1A: {
            double r = k.c;
            if (out) r += k.c1 - (alpha - 2.0) * k.C * cf::tail_integral(alpha, ax);
            return r;
        }
        case Identity::INT2A: {
            double r = 2.0 * k.C_prime * x;
            if (out) {
                double extra = -2.0 * k.D * (ax - 1.0);
                const double coeff = (alpha - 1.0) * (alpha - 2.0) * k.C;
                if (coeff != 0.0) {
                    const double t2 = cf::wedge_integral(alpha, ax) +
                                      (ax - 1.0) * cf::tail_integral(alpha, ax);
                    extra -= coeff * t2;
                }
                r += sgn * extra;
            }
            return r;
        }
        case Identity::INT3A: {
            double r = alpha * k.C_prime * x * x + k.C_prime;
            if (out && alpha != 0.0) r -= alpha * cf::remainder_g(alpha, ax);
            return r;
        }
        case Identity::COMPINT: {
            double r = alpha * k.C_prime * x * x + k.C_prime;
            if (out) r += alpha * cf::compint_remainder(alpha, ax);
            return r;
        }
    }
    throw std::logic_error("identity_rhs: unknown identity");
}

nlohmann::json IdentityReport::to_json() const {
    return {{"identity", identity_name(id)}, {"alpha", alpha},
            {"xs", xs},                      {"max_abs_err", max_abs_err},
            {"max_rel_err", max_rel_err},    {"tol", tol},
            {"pass", pass}};
}

IdentityReport verify_identity(Identity id, double alpha, const std::vector<double>& xs,
                               double tol) {
    require_admissible(id, alpha);
    if (xs.empty()) throw std::invalid_argument("verify_identity: xs must be nonempty");
    if (!(tol > 0.0)) throw std::invalid_argument("verify_identity: tol must be positive");
    IdentityReport rep;
    rep.id = id;
    rep.alpha = alpha;
    rep.xs = xs;
    rep.tol = tol;
    rep.max_abs_err = 0.0;
    rep.max_rel_err = 0.0;
    for (double x : xs) {
        const double lhs = identity_lhs(id, alpha, x);
        const double rhs = identity_rhs(id, alpha, x);
        const double abs_err = std::abs(lhs - rhs);
        const double rel_err = abs_err / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        rep.max_abs_err = std::max(rep.max_abs_err, abs_err);
        rep.max_rel_err = std::max(rep.max_rel_err, rel_err);
    }
    rep.pass = rep.max_rel_err <= tol;
    return rep;
}

nlohmann::json ELReport::to_json() const {
    return {{"alpha", alpha},
            {"regime", regime},
            {"eta_ref", eta_ref},
            {"eta_empirical", eta_empirical},
            {"max_interior_dev", max_interior_dev},
            {"min_exterior_slack", min_exterior_slack},
            {"pass", pass}};
}

ELReport verify_euler_lagrange(const Kernel& k, int interior_pts, double exterior_span,
                               double tol) {
    if (interior_pts < 1)
        throw std::invalid_argument("verify_euler_lagrange: interior_pts must be >= 1");
    if (!(exterior_span > 0.0))
        throw std::invalid_argument("verify_euler_lagrange: exterior_span must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("verify_euler_lagrange: tol must be positive");
    const cf::ClosedFormSolution sol(k);
    const double R = sol.radius();
    const double eta = sol.eta_ref();

    ELReport rep;
    rep.alpha = k.alpha();
    rep.regime = k.regime() == Regime::A ? "A" : "B";
    rep.eta_ref = eta;
    rep.eta_empirical = !sol.energy_available();

    double dev = 0.0;
    for (double x : chebyshev_points(interior_pts, -R, R))
        dev = std::max(dev, std::abs(sol.potential_by_quadrature(x) - eta));

    double slack = std::numeric_limits<double>::infinity();
    constexpr int kExteriorPts = 1000;
    for (int j = 0; j < kExteriorPts; ++j) {
        const double x = R + exterior_span * j / (kExteriorPts - 1.0);
        slack = std::min(slack, sol.potential_by_quadrature(x) - eta);
        slack = std::min(slack, sol.potential_by_quadrature(-x) - eta);
    }

    rep.max_interior_dev = dev;
    rep.min_exterior_slack = slack;
    rep.pass = dev <= tol && slack >= -tol;
    return rep;
}

namespace {

// Second antiderivative of the kernel's power (or log) term, normalized so
// that value and slope vanish at 0; cell averages are its second differences.
double power_h(double alpha, double r) {
    if (r == 0.0) return 0.0;
    if (alpha == 0.0) return 0.5 * r * r * std::log(r) - 0.75 * r * r;
    return std::pow(r, alpha + 2.0) / (alpha * (alpha + 1.0) * (alpha + 2.0));
}

std::vector<double> smeared_power_row(double alpha, double h, int m) {
    std::vector<double> g(static_cast<std::size_t>(m));
    const double inv_h2 = 1.0 / (h * h);
    g[0] = 2.0 * power_h(alpha, h) * inv_h2;
    for (int j = 1; j < m; ++j) {
        const double d = j * h;
        g[static_cast<std::size_t>(j)] =
            (power_h(alpha, d + h) - 2.0 * power_h(alpha, d) + power_h(alpha, d - h)) * inv_h2;
    }
    return g;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Orthonormal basis of the constraint space: zero mass always, zero first
// moment additionally in regime A.
std::vector<std::vector<double>> constraint_basis(const Kernel& k, double lo, double h, int m) {
    std::vector<std::vector<double>> basis;
    basis.emplace_back(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));
    if (k.regime() == Regime::A) {
        std::vector<double> u(static_cast<std::size_t>(m));
        double mean = lo + 0.5 * h * (m - 1);
        for (int i = 0; i < m; ++i) u[static_cast<std::size_t>(i)] = lo + i * h - mean;
        const double n = std::sqrt(dot(u, u));
        for (double& v : u) v /= n;
        basis.push_back(std::move(u));
    }
    return basis;
}

void check_grid_args(double lo, double hi, int m) {
    if (m < 2) throw std::invalid_argument("quadratic form grid needs at least two cells");
    if (!(hi > lo)) throw std::invalid_argument("quadratic form grid needs hi > lo");
}

// Cyclic Jacobi iteration on a dense symmetric matrix; returns the diagonal
// after convergence.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    auto at = [&a, n](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, scale = 0.0;
        for (int p = 0; p < n; ++p) {
            scale = std::max(scale, std::abs(at(p, p)));
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(at(p, q)));
        }
        if (off <= 1e-15 * (scale + 1e-300)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t =
                    std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int r = 0; r < n; ++r) {  // columns p and q
                    const double arp = at(r, p), arq = at(r, q);
                    at(r, p) = c * arp - s * arq;
                    at(r, q) = s * arp + c * arq;
                }
                for (int r = 0; r < n; ++r) {  // rows p and q
                    const double apr = at(p, r), aqr = at(q, r);
                    at(p, r) = c * apr - s * aqr;
                    at(q, r) = s * apr + c * aqr;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
    return eig;
}

}  // namespace

double quadratic_form_value(const Kernel& k, double lo, double hi,
                            const std::vector<double>& nu) {
    const int m = static_cast<int>(nu.size());
    check_grid_args(lo, hi, m);
    const double h = (hi - lo) / (m - 1);
    const std::vector<double> g = smeared_power_row(k.alpha(), h, m);
    const double sign = k.regime() == Regime::A ? 1.0 : -1.0;
    double q = 0.0;
    for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j) row += g[static_cast<std::size_t>(std::abs(i - j))] * nu[static_cast<std::size_t>(j)];
        q += nu[static_cast<std::size_t>(i)] * row;
    }
    return sign * q;
}

double convexity_probe(const Kernel& k, int trials, double lo, double hi, int m,
                       std::uint64_t seed) {
    check_grid_args(lo, hi, m);
    if (trials < 1) throw std::invalid_argument("convexity_probe: trials must be >= 1");
    const double h = (hi - lo) / (m - 1);
    const auto basis = constraint_basis(k, lo, h, m);
    Xorshift64Star rng(seed);
    double min_q = std::numeric_limits<double>::infinity();
    int counted = 0;
    std::vector<double> nu(static_cast<std::size_t>(m));
    for (int t = 0; t < trials; ++t) {
        for (double& v : nu) v = rng.uniform(-1.0, 1.0);
        for (const auto& b : basis) {
            const double d = dot(nu, b);
            for (std::size_t i = 0; i < nu.size(); ++i) nu[i] -= d * b[i];
        }
        const double norm = std::sqrt(dot(nu, nu));
        if (norm < 1e-14) continue;
        for (double& v : nu) v /= norm;
        const double q = quadratic_form_value(k, lo, hi, nu);
        if (!(q > 0.0))
            throw std::runtime_error("convexity_probe: non-positive form value " +
                                     format_double(q));
        min_q = std::min(min_q, q);
        ++counted;
    }
    if (counted == 0) throw std::runtime_error("convexity_probe: all draws degenerate");
    return min_q;
}

double projected_gram_min_eig(const Kernel& k, double lo, double hi, int m) {
    check_grid_args(lo, hi, m);
    if (m > 64) throw std::invalid_argument("projected_gram_min_eig: dense oracle capped at 64");
    const double h = (hi - lo) / (m - 1);
    const std::vector<double> g = smeared_power_row(k.alpha(), h, m);
    const double sign = k.regime() == Regime::A ? 1.0 : -1.0;
    const auto sz = [](int i) { return static_cast<std::size_t>(i); };
    std::vector<double> M(sz(m * m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M[sz(i * m + j)] = sign * g[sz(std::abs(i - j))];

    const auto basis = constraint_basis(k, lo, h, m);
    // complement of the constraint directions, by Gram-Schmidt over unit vectors
    std::vector<std::vector<double>> comp;
    const std::size_t want = sz(m) - basis.size();
    for (int i = 0; i < m && comp.size() < want; ++i) {
        std::vector<double> v(sz(m), 0.0);
        v[sz(i)] = 1.0;
        for (const auto& b : basis) {
            const double d = dot(v, b);
            for (std::size_t r = 0; r < v.size(); ++r) v[r] -= d * b[r];
        }
        for (const auto& b : comp) {
            const double d = dot(v, b);
            for (std::size_t r = 0; r < v.size(); ++r) v[r] -= d * b[r];
        }
        const double norm = std::sqrt(dot(v, v));
        if (norm < 1e-10) continue;
        for (double& x : v) x /= norm;
        comp.push_back(std::move(v));
    }
    const int n = static_cast<int>(comp.size());
    if (comp.size() != want)
        throw std::logic_error("projected_gram_min_eig: basis construction failed");

    std::vector<double> S(sz(n * n));
    std::vector<double> mb(sz(m));
    for (int cidx = 0; cidx < n; ++cidx) {
        for (int r = 0; r < m; ++r) {
            double s = 0.0;
            for (int j = 0; j < m; ++j) s += M[sz(r * m + j)] * comp[sz(cidx)][sz(j)];
            mb[sz(r)] = s;
        }
        for (int ridx = 0; ridx < n; ++ridx) S[sz(ridx * n + cidx)] = dot(comp[sz(ridx)], mb);
    }
    const std::vector<double> eig = jacobi_eigenvalues(std::move(S), n);
    return *std::min_element(eig.begin(), eig.end());
}

}  // namespace ie1d::verify
