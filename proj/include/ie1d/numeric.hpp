// Small numeric helpers shared across the library.
#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ie1d {

// Sums a buffer by recursive halving. The reduction tree depends only on the
// length, so results are bit-reproducible for a given input order.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

// Locale-independent float formatting, 17 significant digits (round-trip).
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// Chebyshev points of the open interval (lo, hi); endpoints are never hit.
inline std::vector<double> chebyshev_points(int n, double lo, double hi) {
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < n; ++k)
        pts.push_back(c + r * std::cos((2.0 * k + 1.0) * pi / (2.0 * n)));
    return pts;
}

}  // namespace ie1d
