#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace nlp {

/// Endpoint of the interval. Outward normal is -1 at the left end, +1 at the
/// right end.
enum class Side { left, right };

inline constexpr Side kSides[] = {Side::left, Side::right};

std::string_view to_string(Side side) noexcept;

/// The open interval (0, L).
class IntervalDomain {
public:
    explicit IntervalDomain(double length);

    double length() const noexcept { return length_; }
    double endpoint(Side side) const noexcept { return side == Side::left ? 0.0 : length_; }
    static constexpr double outward_normal(Side side) noexcept { return side == Side::left ? -1.0 : 1.0; }

    bool operator==(const IntervalDomain&) const = default;

private:
    double length_;
};

/// Uniform tensor grid on [0, L] x [0, n_steps * dt].
class Grid {
public:
    Grid(IntervalDomain domain, int n_cells, double dt, int n_steps);

    /// Uniform partition of [0,L] x [0,T]; the last level is within dt/2 of T.
    static Grid build(IntervalDomain domain, int n_cells, double dt, double horizon);

    const IntervalDomain& domain() const noexcept { return domain_; }
    double length() const noexcept { return domain_.length(); }
    int n_cells() const noexcept { return n_cells_; }
    int n_steps() const noexcept { return n_steps_; }
    std::size_t node_count() const noexcept { return static_cast<std::size_t>(n_cells_) + 1; }
    std::size_t level_count() const noexcept { return static_cast<std::size_t>(n_steps_) + 1; }
    double h() const noexcept { return h_; }
    double dt() const noexcept { return dt_; }

    double x(std::size_t i) const noexcept {
        return i + 1 == node_count() ? domain_.length() : static_cast<double>(i) * h_;
    }
    double t(std::size_t j) const noexcept { return static_cast<double>(j) * dt_; }
    double horizon() const noexcept { return t(level_count() - 1); }

    std::size_t boundary_node(Side side) const noexcept { return side == Side::left ? 0 : node_count() - 1; }

    /// Index of the last level with t_j <= t (clamped to the grid).
    std::size_t level_at_or_before(double t) const noexcept;

    std::vector<double> nodes() const;
    std::vector<double> times() const;

    /// Same spatial grid and step, only the first `levels` time levels.
    Grid truncated(std::size_t levels) const;

    bool operator==(const Grid&) const = default;

private:
    IntervalDomain domain_;
    int n_cells_;
    double dt_;
    int n_steps_;
    double h_;
};

/// Space-time field u(x_i, t_j), stored level-major.
class Trajectory {
public:
    Trajectory(Grid grid, std::vector<double> values);
    Trajectory(Grid grid, double fill);

    const Grid& grid() const noexcept { return grid_; }

    double operator()(std::size_t level, std::size_t node) const noexcept {
        return values_[level * grid_.node_count() + node];
    }

    std::span<const double> level(std::size_t j) const noexcept {
        return {values_.data() + j * grid_.node_count(), grid_.node_count()};
    }
    std::span<const double> values() const noexcept { return values_; }

    Trajectory leading(std::size_t levels) const;

    double sup() const noexcept;
    double min() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// sup over all samples of |a - b|; grids must match.
double sup_distance(const Trajectory& a, const Trajectory& b);

}  // namespace nlp
