#pragma once

#include "nlp/grid.hpp"

#include <variant>
#include <vector>

namespace nlp {

/// A function of one real variable: constant, polynomial, or uniform table
/// with linear interpolation (clamped outside [lo, hi]).
class Profile {
public:
    struct Constant {
        double value = 0.0;
        bool operator==(const Constant&) const = default;
    };
    struct Polynomial {
        std::vector<double> coeffs;  // a0 + a1 s + a2 s^2 + ...
        bool operator==(const Polynomial&) const = default;
    };
    struct Table {
        double lo = 0.0;
        double hi = 1.0;
        std::vector<double> values;
        bool operator==(const Table&) const = default;
    };
    using Form = std::variant<Constant, Polynomial, Table>;

    Profile() = default;
    Profile(Form form);  // NOLINT: implicit on purpose
    static Profile constant(double value) { return Profile(Constant{value}); }

    double operator()(double s) const;
    const Form& form() const noexcept { return form_; }
    bool is_constant() const noexcept { return std::holds_alternative<Constant>(form_); }

    bool operator==(const Profile&) const = default;

private:
    Form form_ = Constant{};
};

/// Reaction coefficient c(x, t).
class Coefficient {
public:
    struct Constant {
        double value = 0.0;
        bool operator==(const Constant&) const = default;
    };
    struct Separable {
        Profile x;
        Profile t;
        bool operator==(const Separable&) const = default;
    };
    /// values[t_index][x_index], bilinear interpolation, clamped.
    struct Table {
        std::vector<double> x;
        std::vector<double> t;
        std::vector<std::vector<double>> values;
        bool operator==(const Table&) const = default;
    };
    using Form = std::variant<Constant, Separable, Table>;

    Coefficient() = default;
    Coefficient(Form form);  // NOLINT
    static Coefficient constant(double value) { return Coefficient(Constant{value}); }

    double operator()(double x, double t) const;
    const Form& form() const noexcept { return form_; }
    /// True when the coefficient is the constant zero.
    bool is_zero() const noexcept;

    bool operator==(const Coefficient&) const = default;

private:
    Form form_ = Constant{};
};

/// Boundary kernel k(xi, y, t) with xi one of the two endpoints.
class FluxKernel {
public:
    struct Constant {
        double value = 0.0;
        bool operator==(const Constant&) const = default;
    };
    /// k = weight(side) * f(y) * g(t)
    struct Separable {
        double left = 1.0;
        double right = 1.0;
        Profile y;
        Profile t;
        bool operator==(const Separable&) const = default;
    };
    /// left/right[t_index][y_index], bilinear interpolation, clamped.
    struct Table {
        std::vector<double> y;
        std::vector<double> t;
        std::vector<std::vector<double>> left;
        std::vector<std::vector<double>> right;
        bool operator==(const Table&) const = default;
    };
    using Form = std::variant<Constant, Separable, Table>;

    FluxKernel() = default;
    FluxKernel(Form form);  // NOLINT
    static FluxKernel constant(double value) { return FluxKernel(Constant{value}); }

    double operator()(Side side, double y, double t) const;
    const Form& form() const noexcept { return form_; }
    bool is_zero() const noexcept;

    bool operator==(const FluxKernel&) const = default;

private:
    Form form_ = Constant{};
};

/// Initial datum u0(x) on [0, L].
class InitialDatum {
public:
    struct Constant {
        double value = 0.0;
        bool operator==(const Constant&) const = default;
    };
    /// offset + amplitude * cos(mode * pi * x / L)
    struct Cosine {
        double offset = 0.0;
        double amplitude = 1.0;
        int mode = 1;
        bool operator==(const Cosine&) const = default;
    };
    /// Uniformly spaced samples over [0, L], linear interpolation.
    struct Table {
        std::vector<double> values;
        bool operator==(const Table&) const = default;
    };
    using Form = std::variant<Constant, Cosine, Table>;

    InitialDatum() = default;
    InitialDatum(Form form);  // NOLINT
    static InitialDatum constant(double value) { return InitialDatum(Constant{value}); }

    double operator()(double x, double length) const;
    std::vector<double> sample(const Grid& grid) const;
    const Form& form() const noexcept { return form_; }

    bool operator==(const InitialDatum&) const = default;

private:
    Form form_ = Constant{};
};

/// Samples of c on the grid, level-major (levels x nodes).
std::vector<double> sample_reaction(const Coefficient& c, const Grid& grid);

/// Samples of k(side, y_i, t_j), level-major (levels x nodes).
std::vector<double> sample_flux_kernel(const FluxKernel& k, Side side, const Grid& grid);

}  // namespace nlp
