#include "nlp/grid.hpp"

#include "nlp/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlp {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::kernel_window: return "kernel-window";
        case ErrorKind::regularization_failure: return "regularization-failure";
        case ErrorKind::contraction_failure: return "contraction-failure";
        case ErrorKind::stability_failure: return "stability-failure";
        case ErrorKind::numeric_failure: return "numeric-failure";
        case ErrorKind::construction_failure: return "construction-failure";
        case ErrorKind::ladder_failure: return "ladder-failure";
        case ErrorKind::internal_error: return "internal-error";
        case ErrorKind::domain_error: return "domain-error";
        case ErrorKind::parse_error: return "parse-error";
        case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

std::string_view to_string(Side side) noexcept {
    return side == Side::left ? "left" : "right";
}

IntervalDomain::IntervalDomain(double length) : length_(length) {
    require(std::isfinite(length) && length > 0.0, "interval length must be positive");
}

Grid::Grid(IntervalDomain domain, int n_cells, double dt, int n_steps)
    : domain_(domain), n_cells_(n_cells), dt_(dt), n_steps_(n_steps), h_(0.0) {
    require(n_cells >= 1, "grid needs at least one cell");
    require(std::isfinite(dt) && dt > 0.0, "time step must be positive");
    require(n_steps >= 1, "grid needs at least two time levels");
    h_ = domain_.length() / n_cells_;
}

Grid Grid::build(IntervalDomain domain, int n_cells, double dt, double horizon) {
    require(n_cells >= 4, "build_grid: n_cells must be >= 4");
    require(std::isfinite(dt) && dt > 0.0, "build_grid: dt must be positive");
    require(std::isfinite(horizon) && horizon > 0.0, "build_grid: horizon must be positive");
    require(horizon >= dt * (1.0 - 1e-12), "build_grid: horizon must be at least one step");
    const double steps = std::round(horizon / dt);
    require(steps < 1e8, "build_grid: too many time levels");
    return Grid(domain, n_cells, dt, std::max(1, static_cast<int>(steps)));
}

std::size_t Grid::level_at_or_before(double t) const noexcept {
    if (t <= 0.0) {
        return 0;
    }
    const double k = std::floor(t / dt_ * (1.0 + 1e-12));
    return std::min(level_count() - 1, static_cast<std::size_t>(k));
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(node_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = x(i);
    }
    return out;
}

std::vector<double> Grid::times() const {
    std::vector<double> out(level_count());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = t(j);
    }
    return out;
}

Grid Grid::truncated(std::size_t levels) const {
    require(levels >= 2 && levels <= level_count(), "truncated grid needs 2..level_count levels");
    return Grid(domain_, n_cells_, dt_, static_cast<int>(levels) - 1);
}

Trajectory::Trajectory(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.node_count() * grid_.level_count()) {
        std::ostringstream msg;
        msg << "trajectory has " << values_.size() << " values, grid expects "
            << grid_.node_count() * grid_.level_count();
        fail(ErrorKind::invalid_argument, msg.str());
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::numeric_failure, "trajectory contains non-finite values");
        }
    }
}

Trajectory::Trajectory(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.node_count() * grid_.level_count(), fill) {
    require(std::isfinite(fill), "trajectory fill must be finite");
}

Trajectory Trajectory::leading(std::size_t levels) const {
    Grid g = grid_.truncated(levels);
    std::vector<double> v(values_.begin(),
                          values_.begin() + static_cast<std::ptrdiff_t>(levels * grid_.node_count()));
    return Trajectory(std::move(g), std::move(v));
}

double Trajectory::sup() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

double Trajectory::min() const noexcept {
    return *std::min_element(values_.begin(), values_.end());
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
    require(a.grid() == b.grid(), "sup_distance: grid mismatch");
    double worst = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t k = 0; k < va.size(); ++k) {
        worst = std::max(worst, std::abs(va[k] - vb[k]));
    }
    return worst;
}

}  // namespace nlp
