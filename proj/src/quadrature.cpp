#include "ie1d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>

#include "ie1d/specfun.hpp"

namespace ie1d::quad {

namespace {

// Monic Jacobi recurrence coefficients for the weight (1-x)^a (1+x)^b.
// d holds the diagonal (alpha_k), e the off-diagonal (sqrt(beta_k)).
void jacobi_recurrence(int n, double a, double b, std::vector<double>& d, std::vector<double>& e) {
    const double ab = a + b;
    d.assign(static_cast<std::size_t>(n), 0.0);
    e.assign(static_cast<std::size_t>(n), 0.0);  // e[i] couples rows i and i+1
    d[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double two_k_ab = 2.0 * k + ab;
        d[static_cast<std::size_t>(k)] =
            (b * b - a * a) / (two_k_ab * (two_k_ab + 2.0));
        double beta;
        if (k == 1) {
            // the (k + ab) / (2k + ab - 1) pair cancels at k = 1
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) /
                   (two_k_ab * two_k_ab * (two_k_ab + 1.0) * (two_k_ab - 1.0));
        }
        e[static_cast<std::size_t>(k - 1)] = std::sqrt(beta);
    }
}

// Implicit-shift QL for a symmetric tridiagonal matrix, accumulating only the
// first row of the eigenvector matrix in z. On return d holds eigenvalues.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    constexpr int kMaxSweeps = 64;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::fabs(d[static_cast<std::size_t>(m)]) +
                                  std::fabs(d[static_cast<std::size_t>(m + 1)]);
                if (std::fabs(e[static_cast<std::size_t>(m)]) <= 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > kMaxSweeps) throw std::runtime_error("tridiagonal_ql: no convergence");
            double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                       (2.0 * e[static_cast<std::size_t>(l)]);
            double r = std::hypot(g, 1.0);
            g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
                e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[static_cast<std::size_t>(i)];
                const double bb = c * e[static_cast<std::size_t>(i)];
                r = std::hypot(f, g);
                e[static_cast<std::size_t>(i + 1)] = r;
                if (r == 0.0) {
                    d[static_cast<std::size_t>(i + 1)] -= p;
                    e[static_cast<std::size_t>(m)] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[static_cast<std::size_t>(i + 1)] - p;
                r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[static_cast<std::size_t>(i + 1)] = g + p;
                g = c * r - bb;
                f = z[static_cast<std::size_t>(i + 1)];
                z[static_cast<std::size_t>(i + 1)] = s * z[static_cast<std::size_t>(i)] + c * f;
                z[static_cast<std::size_t>(i)] = c * z[static_cast<std::size_t>(i)] - s * f;
            }
            if (r == 0.0 && m - 1 >= l) continue;
            d[static_cast<std::size_t>(l)] -= p;
            e[static_cast<std::size_t>(l)] = g;
            e[static_cast<std::size_t>(m)] = 0.0;
        }
    }
}

JacobiRule build_rule(int n, double a, double b) {
    if (n < 1 || n > 512) throw std::invalid_argument("gauss_jacobi: n must be in [1, 512]");
    if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");

    std::vector<double> d, e;
    jacobi_recurrence(n, a, b, d, e);
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    z[0] = 1.0;
    tridiagonal_ql(d, e, z);

    // total mass of the weight: 2^{a+b+1} B(a+1, b+1)
    const double mu0 = std::exp((a + b + 1.0) * std::numbers::ln2_v<double> +
                                specfun::ln_gamma(a + 1.0) + specfun::ln_gamma(b + 1.0) -
                                specfun::ln_gamma(a + b + 2.0));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return d[static_cast<std::size_t>(i)] < d[static_cast<std::size_t>(j)]; });

    JacobiRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double zi = z[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        rule.nodes[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        rule.weights[static_cast<std::size_t>(i)] = mu0 * zi * zi;
    }

    if (a == b) {
        // enforce exact +/- node pairing and weight symmetry
        for (int i = 0, j = n - 1; i < j; ++i, --j) {
            const double t = 0.5 * (rule.nodes[static_cast<std::size_t>(i)] -
                                    rule.nodes[static_cast<std::size_t>(j)]);
            rule.nodes[static_cast<std::size_t>(i)] = t;
            rule.nodes[static_cast<std::size_t>(j)] = -t;
            const double w = 0.5 * (rule.weights[static_cast<std::size_t>(i)] +
                                    rule.weights[static_cast<std::size_t>(j)]);
            rule.weights[static_cast<std::size_t>(i)] = w;
            rule.weights[static_cast<std::size_t>(j)] = w;
        }
        if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double integral = 0.0;
    double error = 0.0;
};

PanelResult gauss_kronrod_15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double res_k = kWgk[7] * fv[7];
    double res_g = kWg[3] * fv[7];
    double res_abs = kWgk[7] * std::fabs(fv[7]);
    for (int i = 0; i < 7; ++i) {
        res_k += kWgk[i] * (fv[i] + fv[14 - i]);
        res_abs += kWgk[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
        if (i % 2 == 1) res_g += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    const double mean = 0.5 * res_k;
    double res_asc = kWgk[7] * std::fabs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        res_asc += kWgk[i] * (std::fabs(fv[i] - mean) + std::fabs(fv[14 - i] - mean));
    res_asc *= h;
    res_abs *= h;

    PanelResult out;
    out.integral = res_k * h;
    double err = std::fabs((res_k - res_g) * h);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double round = 50.0 * 1.1e-16 * res_abs;
    out.error = std::max(err, round);
    return out;
}

struct Interval {
    double a, b, integral, error;
    std::uint64_t id;  // insertion order, for a deterministic heap
};

struct IntervalLess {
    bool operator()(const Interval& p, const Interval& q) const {
        if (p.error != q.error) return p.error < q.error;
        return p.id > q.id;
    }
};

double adaptive_core(const Integrand& f, double a, double b, double tol) {
    std::priority_queue<Interval, std::vector<Interval>, IntervalLess> heap;
    std::uint64_t next_id = 0;
    const double inf = std::numeric_limits<double>::infinity();
    PanelResult first = gauss_kronrod_15(f, a, b);
    if (!std::isfinite(first.integral))
        throw AccuracyError("integrate_adaptive: integrand not finite", first.integral, inf);
    double total = first.integral;
    double total_err = first.error;
    heap.push({a, b, first.integral, first.error, next_id++});

    // tol is absolute; the relative floor keeps large-magnitude integrals from
    // chasing an unreachable target
    auto goal = [tol](double value) {
        return std::isfinite(value) ? std::max(tol, 1e-13 * std::fabs(value)) : tol;
    };
    constexpr int kMaxIntervals = 4000;
    while (total_err > goal(total) && static_cast<int>(heap.size()) < kMaxIntervals) {
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval collapsed to machine width; keep its contribution
            heap.push(worst);
            break;
        }
        PanelResult left = gauss_kronrod_15(f, worst.a, mid);
        PanelResult right = gauss_kronrod_15(f, mid, worst.b);
        if (!std::isfinite(left.integral) || !std::isfinite(right.integral))
            throw AccuracyError("integrate_adaptive: integrand not finite", total, inf);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.integral, left.error, next_id++});
        heap.push({mid, worst.b, right.integral, right.error, next_id++});
    }
    if (total_err > goal(total))
        throw AccuracyError("integrate_adaptive: tolerance not reached", total, total_err);
    return total;
}

}  // namespace

JacobiRule gauss_jacobi(int n, double p) { return build_rule(n, p, p); }

JacobiRule gauss_jacobi_general(int n, double a, double b) { return build_rule(n, a, b); }

double integrate_adaptive(const Integrand& f, double a, double b, double tol, Hints hints) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be positive");
    if (a == b) return 0.0;
    if (a > b) return -integrate_adaptive(f, b, a, tol, {hints.right_exponent, hints.left_exponent});

    if (hints.left_exponent && hints.right_exponent) {
        const double mid = 0.5 * (a + b);
        Hints lh{hints.left_exponent, std::nullopt};
        Hints rh{std::nullopt, hints.right_exponent};
        return integrate_adaptive(f, a, mid, 0.5 * tol, lh) +
               integrate_adaptive(f, mid, b, 0.5 * tol, rh);
    }

    if (hints.left_exponent) {
        const double beta = *hints.left_exponent;
        if (!(beta > -1.0)) throw std::invalid_argument("integrate_adaptive: exponent must exceed -1");
        const double gamma = std::max(1.0, 3.0 / (1.0 + beta));
        if (gamma == 1.0) return adaptive_core(f, a, b, tol);
        const double u_max = std::pow(b - a, 1.0 / gamma);
        auto g = [&f, a, gamma](double u) {
            const double y = a + std::pow(u, gamma);
            // evaluation point rounded onto the hinted endpoint: the graded
            // substitution makes the transformed integrand vanish there
            if (y == a) return 0.0;
            return f(y) * gamma * std::pow(u, gamma - 1.0);
        };
        return adaptive_core(g, 0.0, u_max, tol);
    }

    if (hints.right_exponent) {
        auto flipped = [&f, a, b](double y) { return f(a + b - y); };
        return integrate_adaptive(flipped, a, b, tol, {hints.right_exponent, std::nullopt});
    }

    return adaptive_core(f, a, b, tol);
}

double integrate_graded_left(const Integrand& f, double a, double b, double kappa, double tol) {
    if (!(kappa > -1.0)) throw std::invalid_argument("integrate_graded_left: kappa must exceed -1");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_graded_left: tol must be positive");
    if (a >= b) return 0.0;

    static const JacobiRule gl16 = gauss_jacobi(16, 0.0);
    const double q = std::max(2.0, 6.0 / (1.0 + kappa));
    const double len = b - a;

    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int panels = 8; panels <= 8192; panels *= 2) {
        // Kahan-compensated panel sum: at the largest panel counts the plain
        // accumulation noise would exceed the convergence threshold.
        double sum = 0.0, comp = 0.0;
        double lo = a;
        for (int j = 1; j <= panels; ++j) {
            const double hi = (j == panels)
                                  ? b
                                  : a + len * std::pow(static_cast<double>(j) / panels, q);
            if (hi > lo) {
                const double c = 0.5 * (lo + hi);
                const double h = 0.5 * (hi - lo);
                double acc = 0.0;
                for (std::size_t i = 0; i < gl16.nodes.size(); ++i) {
                    const double u = c + h * gl16.nodes[i];
                    if (u <= a) continue;  // node rounded onto (or past) the singular endpoint
                    acc += gl16.weights[i] * f(u);
                }
                if (!std::isfinite(acc))
                    throw AccuracyError("integrate_graded_left: integrand not finite", acc,
                                        std::numeric_limits<double>::infinity());
                const double y = acc * h - comp;
                const double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            lo = hi;
        }
        if (std::isfinite(prev) && std::fabs(sum - prev) <= std::max(tol, 4e-15 * std::fabs(sum)))
            return sum;
        prev = sum;
    }
    throw AccuracyError("integrate_graded_left: tolerance not reached", prev, tol * 16.0);
}

namespace {

constexpr int kEscalationOrders[] = {16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512};

bool escalation_converged(double val, double prev, double tol) {
    return std::isfinite(prev) && std::fabs(val - prev) <= std::max(tol, 1e-14 * std::fabs(val));
}

}  // namespace

double integrate_power_left(const Integrand& g, double length, double sigma, double tol) {
    if (!(sigma > -1.0)) throw std::invalid_argument("integrate_power_left: sigma must be > -1");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_power_left: tol must be positive");
    if (!(length > 0.0)) return 0.0;
    const double scale = std::pow(0.5 * length, sigma + 1.0);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int n : kEscalationOrders) {
        const JacobiRule rule = gauss_jacobi_general(n, 0.0, sigma);
        const double val =
            scale * rule.apply([&](double t) { return g(0.5 * length * (1.0 + t)); });
        if (escalation_converged(val, prev, tol)) return val;
        prev = val;
    }
    throw AccuracyError("integrate_power_left: tolerance not reached", prev, tol);
}

double integrate_jacobi_symmetric(const Integrand& g, double p, double tol) {
    if (!(p > -1.0)) throw std::invalid_argument("integrate_jacobi_symmetric: p must be > -1");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_jacobi_symmetric: tol must be positive");
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int n : kEscalationOrders) {
        const double val = gauss_jacobi(n, p).apply(g);
        if (escalation_converged(val, prev, tol)) return val;
        prev = val;
    }
    throw AccuracyError("integrate_jacobi_symmetric: tolerance not reached", prev, tol);
}

}  // namespace ie1d::quad
