// Interaction kernels on r = |x - y|.
//
// Regime A (2 < alpha < 3):   K(r) = r^alpha / alpha - r^2 / 2   (attractive power, repulsive square)
// Regime B (-1 < alpha < 2):  K(r) = r^2 / 2 - r^alpha / alpha   (roles switched)
//
// In regime B the power term is read as ln r when alpha = 0, the limit of
// (r^alpha - 1)/alpha up to an additive constant that drops out of all
// centered quantities.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ie1d {

enum class Regime { A, B };

class Kernel {
  public:
    Kernel(double alpha, Regime regime) : alpha_(alpha), regime_(regime) {
        if (regime == Regime::A) {
            if (!(alpha > 2.0 && alpha < 3.0))
                throw std::domain_error("Kernel: regime A needs alpha in (2,3)");
        } else {
            if (!(alpha > -1.0 && alpha < 2.0))
                throw std::domain_error("Kernel: regime B needs alpha in (-1,2)");
        }
    }

    double alpha() const { return alpha_; }
    Regime regime() const { return regime_; }

    // K(r), r >= 0. Finite except in regime B with alpha <= 0 at r = 0,
    // where the repulsion diverges and +infinity is returned.
    double value(double r) const {
        if (!(r >= 0.0)) throw std::domain_error("Kernel::value: r must be >= 0");
        if (r == 0.0) {
            if (regime_ == Regime::B && alpha_ <= 0.0)
                return std::numeric_limits<double>::infinity();
            return 0.0;
        }
        const double power = alpha_ == 0.0 ? std::log(r) : std::pow(r, alpha_) / alpha_;
        const double quad = 0.5 * r * r;
        return regime_ == Regime::A ? power - quad : quad - power;
    }

    // K'(r), r > 0. Single global minimum of K at r = 1 in both regimes.
    double derivative(double r) const {
        if (!(r > 0.0)) throw std::domain_error("Kernel::derivative: r must be > 0");
        const double power = std::pow(r, alpha_ - 1.0);
        return regime_ == Regime::A ? power - r : r - power;
    }

  private:
    double alpha_;
    Regime regime_;
};

inline Regime regime_of_alpha(double alpha) {
    if (alpha > 2.0 && alpha < 3.0) return Regime::A;
    if (alpha > -1.0 && alpha < 2.0) return Regime::B;
    throw std::domain_error("alpha outside both regime ranges");
}

}  // namespace ie1d
