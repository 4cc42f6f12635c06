#include "nlp/green_kernel.hpp"

#include "nlp/error.hpp"
#include "nlp/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlp {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPi = std::numbers::pi;

// sum_{m>=1} cos(m theta) / m^2 for theta in [0, 2 pi]
double clausen_even(double theta) {
    return kPi * kPi / 6.0 - kPi * theta / 2.0 + theta * theta / 4.0;
}

// (1 - e^{-z}) / z and (1 - e^{-z}(1 + z)) / z^2, stable for small z.
void exponential_moments(double z, double& e1, double& e2) {
    if (z < 0.5) {
        e1 = 0.0;
        e2 = 0.0;
        double power = 1.0;      // (-z)^k
        double factorial = 1.0;  // (k+1)!
        for (int k = 0; k <= 16; ++k) {
            factorial *= static_cast<double>(k + 1);
            e1 += power / factorial;
            e2 += power * static_cast<double>(k + 1) / (factorial * static_cast<double>(k + 2));
            power *= -z;
        }
        return;
    }
    const double ez = std::exp(-z);
    e1 = -std::expm1(-z) / z;
    e2 = (1.0 - ez * (1.0 + z)) / (z * z);
}

}  // namespace

int choose_modes(double length, double t_min, double tol) {
    require(length > 0.0, "choose_modes: length must be positive");
    require(t_min > 0.0 && tol > 0.0, "choose_modes: t_min and tol must be positive");
    const double a = kPi * kPi * t_min / (length * length);
    const double scale = 2.0 / length;

    // Terms e_m = exp(-a m^2). Summing to index K and bounding the rest by a
    // geometric series (ratio e_{m+1}/e_m <= exp(-a (2K + 3)) past K) gives
    // tail(M) = sum_{M<m<=K} e_m + remainder(K).
    std::vector<double> terms{0.0};
    int k = 0;
    double remainder = 0.0;
    while (true) {
        ++k;
        const double e = std::exp(-a * static_cast<double>(k) * static_cast<double>(k));
        terms.push_back(e);
        const double q = std::exp(-a * (2.0 * k + 3.0));
        const double next = std::exp(-a * static_cast<double>(k + 1) * static_cast<double>(k + 1));
        remainder = q < 1.0 ? next / (1.0 - q) : INFINITY;
        if (scale * remainder <= 1e-6 * tol || e == 0.0) {
            break;
        }
        require(k < 50'000'000, "choose_modes: t_min too small for the tolerance");
    }
    double tail = remainder;
    int best = k;
    for (int m = k; m >= 0; --m) {
        // tail currently = sum_{i > m} e_i
        if (scale * tail <= tol) {
            best = m;
        } else {
            break;
        }
        tail += terms[static_cast<std::size_t>(m)];
    }
    return best;
}

GreenKernel::GreenKernel(double length, int modes, double t_min)
    : length_(length), modes_(modes), t_min_(t_min) {
    require(length > 0.0, "GreenKernel: length must be positive");
    require(modes >= 0, "GreenKernel: mode count must be nonnegative");
    require(t_min > 0.0, "GreenKernel: t_min must be positive");
}

GreenKernel GreenKernel::for_grid(const Grid& grid, double tol) {
    const double t_min = grid.dt() / 2.0;
    return GreenKernel(grid.length(), choose_modes(grid.length(), t_min, tol), t_min);
}

double GreenKernel::eigenvalue(int m) const noexcept {
    const double k = m * kPi / length_;
    return k * k;
}

double GreenKernel::mode_weight(int m) const noexcept {
    return m == 0 ? 1.0 / length_ : 2.0 / length_;
}

double GreenKernel::operator()(double x, double y, double gap) const {
    if (gap < t_min_ * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "kernel evaluated at gap " << gap << " below its window t_min = " << t_min_;
        throw Error(ErrorKind::kernel_window, msg.str());
    }
    double sum = 1.0 / length_;
    for (int m = 1; m <= modes_; ++m) {
        const double decay = std::exp(-eigenvalue(m) * gap);
        if (decay == 0.0) {
            break;
        }
        // The product of the two cosines is formed first so swapping x and y is bitwise exact.
        const double pair = std::cos(m * kPi * x / length_) * std::cos(m * kPi * y / length_);
        sum += 2.0 / length_ * pair * decay;
    }
    return sum;
}

double GreenKernel::resolvent_tail(double x, double xi) const {
    const double a = kPi * x / length_;
    const double b = kPi * xi / length_;
    double full = length_ / (kPi * kPi) * (clausen_even(std::abs(a - b)) + clausen_even(a + b));
    for (int m = 1; m <= modes_; ++m) {
        full -= mode_weight(m) * std::cos(m * a) * std::cos(m * b) / eigenvalue(m);
    }
    return full;
}

std::vector<double> GreenKernel::matrix(const Grid& grid, double gap) const {
    require(grid.length() == length_, "GreenKernel::matrix: grid length mismatch");
    if (gap < t_min_ * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "kernel matrix requested at gap " << gap << " below t_min = " << t_min_;
        throw Error(ErrorKind::kernel_window, msg.str());
    }
    const auto n = static_cast<Eigen::Index>(grid.node_count());
    const auto modes = static_cast<Eigen::Index>(modes_) + 1;
    RowMatrix cosines(n, modes);
    Eigen::VectorXd weights(modes);
    for (Eigen::Index m = 0; m < modes; ++m) {
        weights(m) = mode_weight(static_cast<int>(m)) * std::exp(-eigenvalue(static_cast<int>(m)) * gap);
        for (Eigen::Index i = 0; i < n; ++i) {
            cosines(i, m) = std::cos(static_cast<double>(m) * kPi * grid.x(static_cast<std::size_t>(i)) / length_);
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n * n));
    Eigen::Map<RowMatrix> g(out.data(), n, n);
    g.noalias() = cosines * weights.asDiagonal() * cosines.transpose();
    return out;
}

double gn_eval(double x, double y, double gap, const GreenKernel& kernel) {
    require(x >= 0.0 && x <= kernel.length() && y >= 0.0 && y <= kernel.length(),
            "gn_eval: points must lie in [0, L]");
    return kernel(x, y, gap);
}

std::vector<double> heat_propagate(std::span<const double> field, double gap, const GreenKernel& kernel,
                                   const Grid& grid) {
    require(field.size() == grid.node_count(), "heat_propagate: field size mismatch");
    if (gap < kernel.t_min() * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "heat_propagate: gap " << gap << " below kernel window t_min = " << kernel.t_min();
        throw Error(ErrorKind::kernel_window, msg.str());
    }
    const ModalConvolution conv(kernel, grid);
    std::vector<double> coeffs = conv.project(field);
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        coeffs[m] *= std::exp(-kernel.eigenvalue(static_cast<int>(m)) * gap);
    }
    return conv.synthesize(coeffs);
}

ModalConvolution::ModalConvolution(const GreenKernel& kernel, const Grid& grid)
    : kernel_(kernel.length(), std::max(kernel.modes(), grid.n_cells()), kernel.t_min()),
      mode_count_(static_cast<std::size_t>(kernel_.modes()) + 1),
      node_count_(grid.node_count()) {
    require(std::abs(grid.length() - kernel.length()) <= 1e-14 * kernel.length(),
            "ModalConvolution: grid and kernel lengths differ");
    const double length = kernel_.length();
    const auto w = trapezoid_weights(grid.n_cells(), grid.h());
    const auto top = static_cast<std::size_t>(grid.n_cells());

    projection_.resize(node_count_ * mode_count_);
    synthesis_.resize(node_count_ * mode_count_);
    for (std::size_t i = 0; i < node_count_; ++i) {
        const double x = grid.x(i);
        for (std::size_t m = 0; m < mode_count_; ++m) {
            const double c = std::cos(static_cast<double>(m) * kPi * x / length);
            synthesis_[i * mode_count_ + m] = c;
            // Node values only determine modes 0..n (discrete cosine basis);
            // above that the trapezoid rule aliases, so those rows stay zero.
            double weight = 0.0;
            if (m < top) {
                weight = kernel_.mode_weight(static_cast<int>(m));
            } else if (m == top) {
                weight = 1.0 / length;
            }
            projection_[i * mode_count_ + m] = w[i] * weight * c;
        }
    }

    boundary_coeff_.resize(2 * mode_count_);
    boundary_tail_.resize(2 * node_count_);
    for (Side side : kSides) {
        const std::size_t s = side == Side::left ? 0 : 1;
        const double xi = side == Side::left ? 0.0 : length;
        for (std::size_t m = 0; m < mode_count_; ++m) {
            const double sign = (side == Side::right && m % 2 == 1) ? -1.0 : 1.0;
            boundary_coeff_[s * mode_count_ + m] = kernel_.mode_weight(static_cast<int>(m)) * sign;
        }
        for (std::size_t i = 0; i < node_count_; ++i) {
            boundary_tail_[s * node_count_ + i] = kernel_.resolvent_tail(grid.x(i), xi);
        }
    }

    decay_.resize(mode_count_);
    lead_.resize(mode_count_);
    trail_.resize(mode_count_);
    const double dt = grid.dt();
    for (std::size_t m = 0; m < mode_count_; ++m) {
        const double z = kernel_.eigenvalue(static_cast<int>(m)) * dt;
        double e1 = 1.0;
        double e2 = 0.5;
        exponential_moments(z, e1, e2);
        decay_[m] = std::exp(-z);
        lead_[m] = dt * e2;
        trail_[m] = dt * (e1 - e2);
    }
}

std::span<const double> ModalConvolution::boundary_coefficients(Side side) const noexcept {
    return {boundary_coeff_.data() + (side == Side::left ? 0 : mode_count_), mode_count_};
}

std::span<const double> ModalConvolution::boundary_tail(Side side) const noexcept {
    return {boundary_tail_.data() + (side == Side::left ? 0 : node_count_), node_count_};
}

std::vector<double> ModalConvolution::project(std::span<const double> field) const {
    require(field.size() == node_count_, "project: field size mismatch");
    std::vector<double> out(mode_count_);
    const Eigen::Map<const RowMatrix> p(projection_.data(), static_cast<Eigen::Index>(node_count_),
                                        static_cast<Eigen::Index>(mode_count_));
    const Eigen::Map<const Eigen::VectorXd> f(field.data(), static_cast<Eigen::Index>(node_count_));
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(mode_count_)).noalias() = p.transpose() * f;
    return out;
}

std::vector<double> ModalConvolution::synthesize(std::span<const double> coeffs) const {
    require(coeffs.size() == mode_count_, "synthesize: coefficient count mismatch");
    std::vector<double> out(node_count_);
    const Eigen::Map<const RowMatrix> s(synthesis_.data(), static_cast<Eigen::Index>(node_count_),
                                        static_cast<Eigen::Index>(mode_count_));
    const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(mode_count_));
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(node_count_)).noalias() = s * c;
    return out;
}

}  // namespace nlp
