#ifndef QBASK_WEIGHTED_GRID_HPP
#define QBASK_WEIGHTED_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qbask {

/// Uniform evaluation grid on [0, x_max] with weight rho_alpha(x) = 1 + x^{2+alpha}.
struct WeightedGrid {
    double x_max = 50.0;
    int n_points = 2001;
    double alpha = 0.0;

    WeightedGrid() = default;
    WeightedGrid(double xmax, int npts, double a) : x_max(xmax), n_points(npts), alpha(a) {
        if (!(x_max > 0.0)) throw std::invalid_argument("WeightedGrid: x_max must be > 0");
        if (n_points < 2) throw std::invalid_argument("WeightedGrid: n_points must be >= 2");
        if (alpha < 0.0) throw std::invalid_argument("WeightedGrid: alpha must be >= 0");
    }

    double weight(double x) const { return 1.0 + std::pow(x, 2.0 + alpha); }

    std::vector<double> points() const {
        std::vector<double> xs(n_points);
        for (int i = 0; i < n_points; ++i)
            xs[i] = x_max * static_cast<double>(i) / (n_points - 1);
        return xs;
    }
};

}  // namespace qbask

#endif
