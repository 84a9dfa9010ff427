#include "ie1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <limits>

#include "ie1d/closed_form.hpp"
#include "ie1d/numeric.hpp"
#include "ie1d/rng.hpp"

namespace ie1d::solve {

namespace {

double reference_energy(const cf::ClosedFormSolution& s) {
    return s.energy_available() ? s.energy() : s.energy_by_quadrature();
}

void fill_common(SolveReport& r, const Kernel& k) {
    r.alpha = k.alpha();
    r.regime = (k.regime() == Regime::A) ? "A" : "B";
    r.diagonal_included = !(k.regime() == Regime::B && k.alpha() <= 0.0);
}

void fill_gaps(SolveReport& r, double e_ref) {
    r.energy_gap_abs = r.energy_continuum_estimate - e_ref;
    r.energy_gap_rel = std::fabs(r.energy_gap_abs) / std::fabs(e_ref);
}

// ---------------------------------------------------------------- particles

double particle_energy(const std::vector<double>& x, const Kernel& k) {
    const std::size_t n = x.size();
    std::vector<double> rows(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            row += k.value(std::fabs(x[i] - x[j]));
        rows[i] = row;
    }
    return pairwise_sum(rows) / (static_cast<double>(n) * static_cast<double>(n));
}

void particle_gradient(const std::vector<double>& x, const Kernel& k,
                       std::vector<double>& g) {
    const std::size_t n = x.size();
    g.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            if (d == 0.0) continue;  // symmetric pair exerts no net force
            const double f = k.derivative(std::fabs(d)) * (d > 0.0 ? 1.0 : -1.0);
            g[i] += f;
            g[j] -= f;
        }
    }
    const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (double& gi : g) gi *= inv;
}

// mean interaction of two independent uniforms on a cell of width h
double self_cell_mean(const Kernel& k, double h) {
    const double alpha = k.alpha();
    const double quad = h * h / 12.0;
    double power;
    if (alpha == 0.0)
        power = std::log(h) - 1.5;
    else
        power = 2.0 * std::pow(h, alpha) / (alpha * (alpha + 1.0) * (alpha + 2.0));
    return (k.regime() == Regime::A) ? power - quad : quad - power;
}

double continuum_estimate(const std::vector<double>& sorted_x, const Kernel& k,
                          double offdiag_energy) {
    const std::size_t n = sorted_x.size();
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double h;
        if (i == 0)
            h = sorted_x[1] - sorted_x[0];
        else if (i == n - 1)
            h = sorted_x[n - 1] - sorted_x[n - 2];
        else
            h = 0.5 * (sorted_x[i + 1] - sorted_x[i - 1]);
        terms.push_back(h > 0.0 ? self_cell_mean(k, h) : 0.0);
    }
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    return offdiag_energy + pairwise_sum(terms) / (2.0 * nn);
}

// ------------------------------------------------------------------ FW gram

// H'' = K piecewise: double antiderivative of the kernel with H(0) = 0, used
// for exact cell averages of K via second differences
double kernel_h(const Kernel& k, double r) {
    if (r == 0.0) return 0.0;
    const double alpha = k.alpha();
    const double quad = r * r * r * r / 24.0;
    double power;
    if (alpha == 0.0)
        power = 0.5 * r * r * std::log(r) - 0.75 * r * r;
    else
        power = std::pow(r, alpha + 2.0) / (alpha * (alpha + 1.0) * (alpha + 2.0));
    return (k.regime() == Regime::A) ? power - quad : quad - power;
}

// Toeplitz Gram of cell averages on a uniform grid: entry k is the mean of
// K(|x - y|) over two cells whose centers are k*h apart. This makes the
// objective the exact continuum energy of the cell-smeared measure, finite
// for every alpha > -1.
struct UniformGram {
    std::vector<double> g;
    double at(std::size_t i, std::size_t s) const {
        return g[i >= s ? i - s : s - i];
    }
    double diag(std::size_t) const { return g[0]; }
};

UniformGram build_uniform_gram(const Kernel& k, std::size_t m, double h) {
    UniformGram gram;
    gram.g.resize(m);
    gram.g[0] = 2.0 * kernel_h(k, h) / (h * h);
    for (std::size_t j = 1; j < m; ++j) {
        const double d = static_cast<double>(j) * h;
        gram.g[j] = (kernel_h(k, d + h) - 2.0 * kernel_h(k, d) + kernel_h(k, d - h)) / (h * h);
    }
    return gram;
}

// Pointwise Gram for custom (possibly non-uniform) grids; the diagonal is
// K(0) where finite and 0 otherwise (off-diagonal objective).
struct DenseGram {
    std::vector<double> full;
    std::size_t m = 0;
    double at(std::size_t i, std::size_t s) const { return full[i * m + s]; }
    double diag(std::size_t i) const { return full[i * m + i]; }
};

DenseGram build_dense_gram(const Kernel& k, const std::vector<double>& x) {
    DenseGram gram;
    gram.m = x.size();
    gram.full.assign(gram.m * gram.m, 0.0);
    const double k0 = (k.regime() == Regime::B && k.alpha() <= 0.0) ? 0.0 : k.value(0.0);
    for (std::size_t i = 0; i < gram.m; ++i) {
        gram.full[i * gram.m + i] = k0;
        for (std::size_t j = i + 1; j < gram.m; ++j) {
            const double v = k.value(std::fabs(x[i] - x[j]));
            gram.full[i * gram.m + j] = v;
            gram.full[j * gram.m + i] = v;
        }
    }
    return gram;
}

struct FwState {
    std::vector<double> w, phi;
    double energy = 0.0;
    double com = 0.0;
};

template <class Gram>
void recompute(const Gram& gram, const std::vector<double>& x, FwState& st) {
    const std::size_t m = st.w.size();
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += gram.at(i, j) * st.w[j];
        st.phi[i] = acc;
    }
    double e = 0.0, c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        e += st.w[i] * st.phi[i];
        c += st.w[i] * x[i];
    }
    st.energy = 0.5 * e;
    st.com = c;
}

// shifts weights by `shift` grid cells if no mass would fall off the grid;
// translation leaves the Toeplitz energy and potential profile unchanged
bool shift_cells(FwState& st, long long shift, double h) {
    const long long m = static_cast<long long>(st.w.size());
    if (shift == 0 || std::llabs(shift) >= m) return false;
    if (shift > 0) {
        for (long long j = 0; j < shift; ++j)
            if (st.w[static_cast<std::size_t>(j)] != 0.0) return false;
        std::memmove(st.w.data(), st.w.data() + shift,
                     static_cast<std::size_t>(m - shift) * sizeof(double));
        std::memmove(st.phi.data(), st.phi.data() + shift,
                     static_cast<std::size_t>(m - shift) * sizeof(double));
        std::fill(st.w.end() - shift, st.w.end(), 0.0);
    } else {
        const long long s = -shift;
        for (long long j = m - s; j < m; ++j)
            if (st.w[static_cast<std::size_t>(j)] != 0.0) return false;
        std::memmove(st.w.data() + s, st.w.data(),
                     static_cast<std::size_t>(m - s) * sizeof(double));
        std::memmove(st.phi.data() + s, st.phi.data(),
                     static_cast<std::size_t>(m - s) * sizeof(double));
        std::fill(st.w.begin(), st.w.begin() + s, 0.0);
    }
    st.com -= static_cast<double>(shift) * h;
    return true;
}

// vacated potential entries after a shift are rebuilt from the weights
template <class Gram>
void repair_phi(const Gram& gram, FwState& st, long long shift) {
    const std::size_t m = st.w.size();
    const std::size_t count = static_cast<std::size_t>(std::llabs(shift));
    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::size_t i = (shift > 0) ? m - count + idx : idx;
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += gram.at(i, j) * st.w[j];
        st.phi[i] = acc;
    }
}

}  // namespace

nlohmann::json SolveReport::to_json() const {
    nlohmann::json j;
    j["method"] = method;
    j["alpha"] = alpha;
    j["regime"] = regime;
    j["size"] = size;
    j["seed"] = seed;
    j["iterations"] = iterations;
    j["termination"] = termination;
    j["initial_energy"] = initial_energy;
    j["final_energy"] = final_energy;
    j["energy_continuum_estimate"] = energy_continuum_estimate;
    j["energy_gap_abs"] = energy_gap_abs;
    j["energy_gap_rel"] = energy_gap_rel;
    j["residual"] = residual;
    j["wasserstein1"] = wasserstein1;
    j["diagonal_included"] = diagonal_included;
    return j;
}

std::pair<meas::DiscreteMeasure, SolveReport> solve_particles(const Kernel& k,
                                                              const ParticleOpts& opts) {
    if (opts.n < 2) throw std::invalid_argument("solve_particles: n must be >= 2");
    if (!(opts.grad_tol > 0.0)) throw std::invalid_argument("solve_particles: grad_tol must be > 0");
    if (!(opts.shrink > 0.0 && opts.shrink < 1.0))
        throw std::invalid_argument("solve_particles: shrink must be in (0,1)");
    if (!(opts.armijo_c > 0.0 && opts.armijo_c < 1.0))
        throw std::invalid_argument("solve_particles: armijo_c must be in (0,1)");
    if (!(opts.init_step > 0.0)) throw std::invalid_argument("solve_particles: init_step must be > 0");
    if (!opts.initial_positions.empty() &&
        opts.initial_positions.size() != static_cast<std::size_t>(opts.n))
        throw std::invalid_argument("solve_particles: initial_positions must have size n");

    const cf::ClosedFormSolution ref(k);
    const std::size_t n = static_cast<std::size_t>(opts.n);

    std::vector<double> x;
    if (!opts.initial_positions.empty()) {
        x = opts.initial_positions;
        for (double xi : x)
            if (!std::isfinite(xi))
                throw std::invalid_argument("solve_particles: initial positions must be finite");
    } else {
        Xorshift64Star rng(opts.seed);
        const double radius = ref.radius();
        const double spacing = 2.0 * radius / static_cast<double>(opts.n - 1);
        x.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double noise = 0.1 * spacing * (2.0 * rng.next_double() - 1.0);
            x[i] = -radius + spacing * static_cast<double>(i) + noise;
        }
    }

    double energy = particle_energy(x, k);
    if (!std::isfinite(energy))
        throw std::runtime_error("solve_particles: non-finite energy at initialization");
    const double initial_energy = energy;

    std::vector<double> g(n), trial(n);
    double step = opts.init_step;
    std::string termination = "max_iters";
    long long iters = 0;
    while (iters < opts.max_iters) {
        particle_gradient(x, k, g);
        double gmax = 0.0, g2 = 0.0;
        for (double gi : g) {
            gmax = std::max(gmax, std::fabs(gi));
            g2 += gi * gi;
        }
        if (gmax < opts.grad_tol) {
            termination = "grad_tol";
            break;
        }
        double s = step;
        bool accepted = false;
        while (s * gmax > 1e-18) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - s * g[i];
            const double trial_energy = particle_energy(trial, k);
            if (trial_energy <= energy - opts.armijo_c * s * g2) {
                x.swap(trial);
                energy = trial_energy;
                accepted = true;
                break;
            }
            s *= opts.shrink;
        }
        ++iters;
        if (!accepted) {
            termination = "stalled";
            break;
        }
        step = 2.0 * s;
    }

    particle_gradient(x, k, g);
    double residual = 0.0;
    for (double gi : g) residual = std::max(residual, std::fabs(gi));

    std::sort(x.begin(), x.end());
    std::vector<double> centered;
    centered.reserve(n);
    for (double xi : x) centered.push_back(xi / static_cast<double>(n));
    const double com = pairwise_sum(centered);
    for (double& xi : x) xi -= com;

    meas::DiscreteMeasure mu{x, std::vector<double>(n, 1.0 / static_cast<double>(n))};

    SolveReport rep;
    rep.method = "particles";
    fill_common(rep, k);
    rep.size = opts.n;
    rep.seed = opts.seed;
    rep.iterations = iters;
    rep.termination = termination;
    rep.initial_energy = initial_energy;
    rep.final_energy = energy;
    rep.energy_continuum_estimate = continuum_estimate(x, k, energy);
    fill_gaps(rep, reference_energy(ref));
    rep.residual = residual;
    rep.wasserstein1 = meas::wasserstein1(mu, ref);
    return {std::move(mu), std::move(rep)};
}

namespace {

template <class Gram>
std::pair<meas::GridMeasure, SolveReport> run_fw(const Kernel& k, const FwOpts& opts,
                                                 const std::vector<double>& x,
                                                 const Gram& gram, bool recenter, double h) {
    const std::size_t m = x.size();
    FwState st;
    st.w.assign(m, 1.0 / static_cast<double>(m));
    st.phi.assign(m, 0.0);
    recompute(gram, x, st);
    const double initial_energy = st.energy;

    SolveReport rep;
    rep.method = "grid_fw";
    fill_common(rep, k);
    rep.size = static_cast<long long>(m);
    rep.seed = 0;
    rep.initial_energy = initial_energy;

    std::string termination;
    long long iters = 0;
    double prev_energy = st.energy;
    while (true) {
        // linear oracle: lowest-index argmin of the current potential
        std::size_t s = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (st.phi[i] < st.phi[s]) s = i;
        double etahat = 0.0;
        for (std::size_t i = 0; i < m; ++i) etahat += st.w[i] * st.phi[i];
        const double gap = etahat - st.phi[s];
        if (gap <= opts.gap_tol) {
            termination = "gap_tol";
            break;
        }
        if (iters >= opts.max_iters) {
            termination = "max_iters";
            break;
        }

        const double d2 = gram.diag(s) - 2.0 * st.phi[s] + etahat;
        double gamma = 1.0;
        if (d2 > 0.0) gamma = std::clamp(gap / d2, 0.0, 1.0);

        st.energy = (1.0 - gamma) * (1.0 - gamma) * st.energy +
                    gamma * (1.0 - gamma) * st.phi[s] + 0.5 * gamma * gamma * gram.diag(s);
        const double one_minus = 1.0 - gamma;
        for (std::size_t i = 0; i < m; ++i)
            st.phi[i] = one_minus * st.phi[i] + gamma * gram.at(i, s);
        for (std::size_t i = 0; i < m; ++i) st.w[i] *= one_minus;
        st.w[s] += gamma;
        st.com = one_minus * st.com + gamma * x[s];
        ++iters;

        if (st.energy > prev_energy + 1e-10 * (1.0 + std::fabs(prev_energy)))
            throw std::logic_error("solve_grid_fw: energy increased");
        prev_energy = st.energy;

        if (recenter) {
            const long long shift = std::llround(st.com / h);
            if (shift != 0 && shift_cells(st, shift, h)) repair_phi(gram, st, shift);
        }
        if (iters % 4096 == 0) {
            recompute(gram, x, st);
            prev_energy = st.energy;
        }
    }

    recompute(gram, x, st);
    double phi_min = st.phi[0];
    for (std::size_t i = 1; i < m; ++i) phi_min = std::min(phi_min, st.phi[i]);
    const double gap = 2.0 * st.energy - phi_min;

    rep.iterations = iters;
    rep.termination = termination;
    rep.final_energy = st.energy;
    rep.energy_continuum_estimate = st.energy;
    rep.residual = gap;

    meas::GridMeasure mu{x, st.w};
    const cf::ClosedFormSolution ref(k);
    fill_gaps(rep, reference_energy(ref));
    rep.wasserstein1 = meas::wasserstein1(mu, ref);

    if (termination == "max_iters") {
        throw BudgetError("solve_grid_fw: FW gap " + format_double(gap) +
                              " above tolerance after iteration budget",
                          std::move(mu), std::move(rep));
    }
    return {std::move(mu), std::move(rep)};
}

}  // namespace

std::pair<meas::GridMeasure, SolveReport> solve_grid_fw(const Kernel& k, const FwOpts& opts) {
    if (!(opts.gap_tol > 0.0)) throw std::invalid_argument("solve_grid_fw: gap_tol must be > 0");

    if (!opts.custom_grid.empty()) {
        const std::vector<double>& x = opts.custom_grid;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]))
                throw std::invalid_argument("solve_grid_fw: grid must be finite");
            if (i > 0 && !(x[i] > x[i - 1]))
                throw std::invalid_argument("solve_grid_fw: grid must be strictly increasing");
        }
        return run_fw(k, opts, x, build_dense_gram(k, x), /*recenter=*/false, 1.0);
    }

    if (!(opts.lo < opts.hi) || opts.m < 3)
        throw std::invalid_argument("solve_grid_fw: need lo < hi and m >= 3");
    const std::size_t m = static_cast<std::size_t>(opts.m);
    const double h = (opts.hi - opts.lo) / static_cast<double>(opts.m - 1);
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i)
        x[i] = opts.lo + h * static_cast<double>(i);
    return run_fw(k, opts, x, build_uniform_gram(k, m, h), opts.recenter_each_iter, h);
}

}  // namespace ie1d::solve
