#include "nlp/coefficients.hpp"

#include "nlp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlp {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// Locates s in a strictly increasing abscissa; returns (index, fraction).
std::pair<std::size_t, double> bracket(const std::vector<double>& axis, double s) {
    if (axis.size() == 1 || s <= axis.front()) {
        return {0, 0.0};
    }
    if (s >= axis.back()) {
        return {axis.size() - 2, 1.0};
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - axis.begin()) - 1;
    return {k, (s - axis[k]) / (axis[k + 1] - axis[k])};
}

double interpolate_uniform(const std::vector<double>& values, double lo, double hi, double s) {
    if (values.size() == 1) {
        return values.front();
    }
    const double pos = std::clamp((s - lo) / (hi - lo), 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const std::size_t k = std::min(values.size() - 2, static_cast<std::size_t>(pos));
    const double f = pos - static_cast<double>(k);
    return values[k] * (1.0 - f) + values[k + 1] * f;
}

double bilinear(const std::vector<double>& xs, const std::vector<double>& ts,
                const std::vector<std::vector<double>>& values, double x, double t) {
    const auto [kx, fx] = bracket(xs, x);
    const auto [kt, ft] = bracket(ts, t);
    const std::size_t kx1 = std::min(kx + 1, xs.size() - 1);
    const std::size_t kt1 = std::min(kt + 1, ts.size() - 1);
    const double a = values[kt][kx] * (1.0 - fx) + values[kt][kx1] * fx;
    const double b = values[kt1][kx] * (1.0 - fx) + values[kt1][kx1] * fx;
    return a * (1.0 - ft) + b * ft;
}

void check_axis(const std::vector<double>& axis, const char* what) {
    require(!axis.empty(), std::string(what) + " axis is empty");
    for (std::size_t k = 1; k < axis.size(); ++k) {
        require(axis[k] > axis[k - 1], std::string(what) + " axis must be strictly increasing");
    }
}

void check_table(const std::vector<double>& xs, const std::vector<double>& ts,
                 const std::vector<std::vector<double>>& values, const char* what) {
    check_axis(xs, what);
    check_axis(ts, what);
    require(values.size() == ts.size(), std::string(what) + " table needs one row per time sample");
    for (const auto& row : values) {
        require(row.size() == xs.size(), std::string(what) + " table row length mismatch");
    }
}

}  // namespace

Profile::Profile(Form form) : form_(std::move(form)) {
    if (const auto* table = std::get_if<Table>(&form_)) {
        require(!table->values.empty(), "profile table is empty");
        require(table->hi > table->lo, "profile table needs hi > lo");
    }
}

double Profile::operator()(double s) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [s](const Polynomial& p) {
                              double acc = 0.0;
                              for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
                                  acc = acc * s + *it;
                              }
                              return acc;
                          },
                          [s](const Table& t) { return interpolate_uniform(t.values, t.lo, t.hi, s); },
                      },
                      form_);
}

Coefficient::Coefficient(Form form) : form_(std::move(form)) {
    if (const auto* table = std::get_if<Table>(&form_)) {
        check_table(table->x, table->t, table->values, "reaction coefficient");
    }
}

double Coefficient::operator()(double x, double t) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [x, t](const Separable& s) { return s.x(x) * s.t(t); },
                          [x, t](const Table& tab) { return bilinear(tab.x, tab.t, tab.values, x, t); },
                      },
                      form_);
}

bool Coefficient::is_zero() const noexcept {
    const auto* c = std::get_if<Constant>(&form_);
    return c != nullptr && c->value == 0.0;
}

FluxKernel::FluxKernel(Form form) : form_(std::move(form)) {
    if (const auto* table = std::get_if<Table>(&form_)) {
        check_table(table->y, table->t, table->left, "flux kernel");
        check_table(table->y, table->t, table->right, "flux kernel");
    }
}

double FluxKernel::operator()(Side side, double y, double t) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [side, y, t](const Separable& s) {
                              return (side == Side::left ? s.left : s.right) * s.y(y) * s.t(t);
                          },
                          [side, y, t](const Table& tab) {
                              return bilinear(tab.y, tab.t, side == Side::left ? tab.left : tab.right, y, t);
                          },
                      },
                      form_);
}

bool FluxKernel::is_zero() const noexcept {
    const auto* c = std::get_if<Constant>(&form_);
    return c != nullptr && c->value == 0.0;
}

InitialDatum::InitialDatum(Form form) : form_(std::move(form)) {
    if (const auto* table = std::get_if<Table>(&form_)) {
        require(!table->values.empty(), "initial datum table is empty");
    }
}

double InitialDatum::operator()(double x, double length) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.value; },
                          [x, length](const Cosine& c) {
                              return c.offset + c.amplitude * std::cos(c.mode * std::numbers::pi * x / length);
                          },
                          [x, length](const Table& t) { return interpolate_uniform(t.values, 0.0, length, x); },
                      },
                      form_);
}

std::vector<double> InitialDatum::sample(const Grid& grid) const {
    std::vector<double> out(grid.node_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (*this)(grid.x(i), grid.length());
    }
    return out;
}

std::vector<double> sample_reaction(const Coefficient& c, const Grid& grid) {
    const std::size_t nx = grid.node_count();
    std::vector<double> out(nx * grid.level_count());
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            out[j * nx + i] = c(grid.x(i), grid.t(j));
        }
    }
    return out;
}

std::vector<double> sample_flux_kernel(const FluxKernel& k, Side side, const Grid& grid) {
    const std::size_t nx = grid.node_count();
    std::vector<double> out(nx * grid.level_count());
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            out[j * nx + i] = k(side, grid.x(i), grid.t(j));
        }
    }
    return out;
}

}  // namespace nlp
