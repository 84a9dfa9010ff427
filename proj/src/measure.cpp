#include "ie1d/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "ie1d/numeric.hpp"

namespace ie1d::meas {

namespace {

void check_weights(const std::vector<double>& w, bool allow_zero) {
    double sum = 0.0;
    for (double wi : w) {
        if (!std::isfinite(wi) || wi < 0.0 || (!allow_zero && wi == 0.0))
            throw std::invalid_argument("measure: weights must be positive and finite");
        sum += wi;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("measure: weights must sum to 1");
}

const cf::ClosedFormSolution& require_matching(const cf::ClosedFormSolution& s,
                                               const Kernel& k) {
    if (s.alpha() != k.alpha() || s.regime() != k.regime())
        throw std::domain_error("measure: kernel does not match the closed-form solution");
    return s;
}

// Atomic CDF evaluator over sorted atoms; F(x) = total weight at positions <= x.
struct StepCdf {
    std::vector<double> pos;   // sorted
    std::vector<double> cum;   // cum[i] = weight of pos[0..i]

    StepCdf(std::vector<double> positions, const std::vector<double>& weights) {
        std::vector<std::size_t> order(positions.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
        pos.reserve(order.size());
        cum.reserve(order.size());
        double running = 0.0;
        for (std::size_t idx : order) {
            running += weights[idx];
            pos.push_back(positions[idx]);
            cum.push_back(running);
        }
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(pos.begin(), pos.end(), x);
        if (it == pos.begin()) return 0.0;
        return cum[static_cast<std::size_t>(it - pos.begin() - 1)];
    }
};

using CdfFn = std::function<double(double)>;

struct CdfView {
    CdfFn eval;
    std::vector<double> breakpoints;  // atoms or support endpoints and interior nodes
    double lo, hi;                    // support bounds
};

CdfView make_cdf_view(const Measure& mu) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        validate(*d);
        auto cdf = std::make_shared<StepCdf>(d->positions, d->weights);
        CdfView v;
        v.eval = [cdf](double x) { return (*cdf)(x); };
        v.breakpoints = cdf->pos;
        v.lo = cdf->pos.front();
        v.hi = cdf->pos.back();
        return v;
    }
    if (const auto* g = std::get_if<GridMeasure>(&mu)) {
        validate(*g);
        auto cdf = std::make_shared<StepCdf>(g->grid, g->weights);
        CdfView v;
        v.eval = [cdf](double x) { return (*cdf)(x); };
        v.breakpoints = cdf->pos;
        v.lo = cdf->pos.front();
        v.hi = cdf->pos.back();
        return v;
    }
    const auto& s = std::get<cf::ClosedFormSolution>(mu);
    CdfView v;
    v.eval = [s](double x) { return s.cdf(x); };
    v.lo = s.center() - s.radius();
    v.hi = s.center() + s.radius();
    v.breakpoints = chebyshev_points(512, v.lo, v.hi);
    v.breakpoints.push_back(v.lo);
    v.breakpoints.push_back(v.hi);
    return v;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half, symmetric).
constexpr double kGlX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// integral of |D| over [l, r] where D is continuous on the open segment.
// At most one sign change per recursion level is resolved by bisection.
double abs_integral(const std::function<double(double)>& D, double l, double r, int depth) {
    const double c = 0.5 * (l + r), h = 0.5 * (r - l);
    double vals[16];
    for (int i = 0; i < 8; ++i) {
        vals[i] = D(c - h * kGlX[7 - i]);
        vals[15 - i] = D(c + h * kGlX[7 - i]);
    }
    double signed_sum = 0.0;
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < 8; ++i) {
        signed_sum += kGlW[7 - i] * (vals[i] + vals[15 - i]);
        if (vals[i] > 0.0 || vals[15 - i] > 0.0) has_pos = true;
        if (vals[i] < 0.0 || vals[15 - i] < 0.0) has_neg = true;
    }
    signed_sum *= h;
    if (!(has_pos && has_neg) || depth == 0) return std::fabs(signed_sum);

    double a = c - h * kGlX[7], b = a;
    for (int i = 0; i < 15; ++i) {
        const double xi = (i < 8) ? c - h * kGlX[7 - i] : c + h * kGlX[i - 8];
        const double xj = (i + 1 < 8) ? c - h * kGlX[7 - (i + 1)] : c + h * kGlX[i + 1 - 8];
        if ((vals[i] > 0.0 && vals[i + 1] < 0.0) || (vals[i] < 0.0 && vals[i + 1] > 0.0)) {
            a = xi;
            b = xj;
            break;
        }
    }
    double fa = D(a);
    for (int it = 0; it < 60 && b - a > 0.0; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = D(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    const double root = 0.5 * (a + b);
    return abs_integral(D, l, root, depth - 1) + abs_integral(D, root, r, depth - 1);
}

}  // namespace

void validate(const DiscreteMeasure& mu) {
    if (mu.positions.empty() || mu.positions.size() != mu.weights.size())
        throw std::invalid_argument("DiscreteMeasure: need equal-length nonempty lists");
    for (double x : mu.positions)
        if (!std::isfinite(x)) throw std::invalid_argument("DiscreteMeasure: positions must be finite");
    check_weights(mu.weights, /*allow_zero=*/false);
}

void validate(const GridMeasure& mu) {
    if (mu.grid.empty() || mu.grid.size() != mu.weights.size())
        throw std::invalid_argument("GridMeasure: need equal-length nonempty lists");
    for (std::size_t i = 0; i < mu.grid.size(); ++i) {
        if (!std::isfinite(mu.grid[i]))
            throw std::invalid_argument("GridMeasure: grid must be finite");
        if (i > 0 && !(mu.grid[i] > mu.grid[i - 1]))
            throw std::invalid_argument("GridMeasure: grid must be strictly increasing");
    }
    check_weights(mu.weights, /*allow_zero=*/true);
}

namespace {

double atomic_energy(const std::vector<double>& x, const std::vector<double>& w,
                     const Kernel& k) {
    const bool skip_diagonal = (k.regime() == Regime::B && k.alpha() <= 0.0);
    const std::size_t n = x.size();
    std::vector<double> row_sums;
    row_sums.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            row += w[i] * w[j] * k.value(std::fabs(x[i] - x[j]));
        if (!skip_diagonal) row += 0.5 * w[i] * w[i] * k.value(0.0);
        row_sums.push_back(row);
    }
    return pairwise_sum(row_sums);
}

double atomic_potential(const std::vector<double>& x, const std::vector<double>& w,
                        const Kernel& k, double at) {
    std::vector<double> terms;
    terms.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        terms.push_back(w[j] * k.value(std::fabs(at - x[j])));
    return pairwise_sum(terms);
}

}  // namespace

double energy(const Measure& mu, const Kernel& k) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        validate(*d);
        return atomic_energy(d->positions, d->weights, k);
    }
    if (const auto* g = std::get_if<GridMeasure>(&mu)) {
        validate(*g);
        return atomic_energy(g->grid, g->weights, k);
    }
    const auto& s = require_matching(std::get<cf::ClosedFormSolution>(mu), k);
    return s.energy_available() ? s.energy() : s.energy_by_quadrature();
}

double potential_at(const Measure& mu, const Kernel& k, double x) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        validate(*d);
        return atomic_potential(d->positions, d->weights, k, x);
    }
    if (const auto* g = std::get_if<GridMeasure>(&mu)) {
        validate(*g);
        return atomic_potential(g->grid, g->weights, k, x);
    }
    const auto& s = require_matching(std::get<cf::ClosedFormSolution>(mu), k);
    return s.potential_by_quadrature(x);
}

double wasserstein1(const Measure& mu, const Measure& nu) {
    const CdfView a = make_cdf_view(mu);
    const CdfView b = make_cdf_view(nu);

    std::vector<double> pts;
    pts.reserve(a.breakpoints.size() + b.breakpoints.size());
    pts.insert(pts.end(), a.breakpoints.begin(), a.breakpoints.end());
    pts.insert(pts.end(), b.breakpoints.begin(), b.breakpoints.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto D = [&a, &b](double x) { return a.eval(x) - b.eval(x); };
    std::vector<double> contributions;
    contributions.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] > pts[i])
            contributions.push_back(abs_integral(D, pts[i], pts[i + 1], 8));
    }
    return pairwise_sum(contributions);
}

CenterOfMass center_of_mass(const Measure& mu) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        validate(*d);
        std::vector<double> terms;
        terms.reserve(d->positions.size());
        for (std::size_t i = 0; i < d->positions.size(); ++i)
            terms.push_back(d->weights[i] * d->positions[i]);
        return {pairwise_sum(terms)};
    }
    if (const auto* g = std::get_if<GridMeasure>(&mu)) {
        validate(*g);
        std::vector<double> terms;
        terms.reserve(g->grid.size());
        for (std::size_t i = 0; i < g->grid.size(); ++i)
            terms.push_back(g->weights[i] * g->grid[i]);
        return {pairwise_sum(terms)};
    }
    return {std::get<cf::ClosedFormSolution>(mu).center()};
}

Measure translate(const Measure& mu, double t) {
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        DiscreteMeasure out = *d;
        for (double& x : out.positions) x += t;
        return out;
    }
    if (const auto* g = std::get_if<GridMeasure>(&mu)) {
        GridMeasure out = *g;
        for (double& x : out.grid) x += t;
        return out;
    }
    const auto& s = std::get<cf::ClosedFormSolution>(mu);
    return cf::ClosedFormSolution(s.kernel(), s.center() + t);
}

nlohmann::json to_json(const Measure& mu) {
    nlohmann::json j;
    if (const auto* d = std::get_if<DiscreteMeasure>(&mu)) {
        j["type"] = "discrete";
        j["positions"] = d->positions;
        j["weights"] = d->weights;
        return j;
    }
    if (const auto* g = std::get_if<GridMeasure>(&mu)) {
        j["type"] = "grid";
        j["positions"] = g->grid;
        j["weights"] = g->weights;
        return j;
    }
    const auto& s = std::get<cf::ClosedFormSolution>(mu);
    j["type"] = "closedform";
    j["alpha"] = s.alpha();
    j["regime"] = (s.regime() == Regime::A) ? "A" : "B";
    j["center"] = s.center();
    return j;
}

Measure measure_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "discrete" || type == "grid") {
        std::vector<double> positions = j.at("positions").get<std::vector<double>>();
        std::vector<double> weights = j.at("weights").get<std::vector<double>>();
        if (type == "discrete") {
            DiscreteMeasure m{std::move(positions), std::move(weights)};
            validate(m);
            return m;
        }
        GridMeasure m{std::move(positions), std::move(weights)};
        validate(m);
        return m;
    }
    if (type == "closedform") {
        const double alpha = j.at("alpha").get<double>();
        const std::string regime = j.at("regime").get<std::string>();
        if (regime != "A" && regime != "B")
            throw std::invalid_argument("measure JSON: regime must be \"A\" or \"B\"");
        const Regime r = (regime == "A") ? Regime::A : Regime::B;
        const double center = j.contains("center") ? j.at("center").get<double>() : 0.0;
        return cf::ClosedFormSolution(Kernel(alpha, r), center);
    }
    throw std::invalid_argument("measure JSON: unknown type \"" + type + "\"");
}

}  // namespace ie1d::meas
