#include "nlp/quadrature.hpp"

#include "nlp/error.hpp"

#include <string>

namespace nlp {

std::vector<double> simpson_weights(int n_cells, double h) {
    require(n_cells >= 1, "quadrature needs at least one cell");
    std::vector<double> w(static_cast<std::size_t>(n_cells) + 1, 0.0);
    if (n_cells == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    int simpson_cells = n_cells;
    if (n_cells % 2 == 1) {
        simpson_cells = n_cells - 3;
        const std::size_t s = static_cast<std::size_t>(simpson_cells);
        const double c = 3.0 * h / 8.0;
        w[s] += c;
        w[s + 1] += 3.0 * c;
        w[s + 2] += 3.0 * c;
        w[s + 3] += c;
    }
    for (int k = 0; k < simpson_cells; k += 2) {
        const std::size_t s = static_cast<std::size_t>(k);
        w[s] += h / 3.0;
        w[s + 1] += 4.0 * h / 3.0;
        w[s + 2] += h / 3.0;
    }
    return w;
}

std::vector<double> trapezoid_weights(int n_cells, double h) {
    require(n_cells >= 1, "quadrature needs at least one cell");
    std::vector<double> w(static_cast<std::size_t>(n_cells) + 1, h);
    w.front() = w.back() = 0.5 * h;
    return w;
}

double quadrature(std::span<const double> values, const Grid& grid) {
    if (values.size() != grid.node_count()) {
        fail(ErrorKind::invalid_argument,
             "quadrature: " + std::to_string(values.size()) + " values for " +
                 std::to_string(grid.node_count()) + " nodes");
    }
    const auto w = simpson_weights(grid.n_cells(), grid.h());
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i] * values[i];
    }
    return sum;
}

double boundary_normal_derivative(std::span<const double> field, double h, Side side) {
    require(field.size() >= 3, "boundary_normal_derivative needs at least 3 nodes");
    require(h > 0.0, "boundary_normal_derivative needs h > 0");
    if (side == Side::left) {
        // -u_x(0)
        return (3.0 * field[0] - 4.0 * field[1] + field[2]) / (2.0 * h);
    }
    const std::size_t n = field.size() - 1;
    return (3.0 * field[n] - 4.0 * field[n - 1] + field[n - 2]) / (2.0 * h);
}

double boundary_normal_derivative(std::span<const double> field, const Grid& grid, Side side) {
    require(field.size() == grid.node_count(), "boundary_normal_derivative: size mismatch");
    return boundary_normal_derivative(field, grid.h(), side);
}

}  // namespace nlp
