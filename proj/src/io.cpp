#include "nlp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlp {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
    fail(ErrorKind::parse_error, path + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) {
        parse_fail(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        parse_fail(path + "." + key, "missing field");
    }
    return *it;
}

double number(const Json& obj, const char* key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_number()) {
        parse_fail(path + "." + key, "expected a number");
    }
    return v.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& path) {
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

std::vector<double> numbers(const Json& obj, const char* key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_array()) {
        parse_fail(path + "." + key, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number()) {
            parse_fail(path + "." + key + "[" + std::to_string(k) + "]", "expected a number");
        }
        out.push_back(v[k].get<double>());
    }
    return out;
}

std::vector<std::vector<double>> matrix(const Json& obj, const char* key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_array()) {
        parse_fail(path + "." + key, "expected an array of rows");
    }
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < v.size(); ++r) {
        Json holder = Json::object();
        holder["row"] = v[r];
        out.push_back(numbers(holder, "row", path + "." + key + "[" + std::to_string(r) + "]"));
    }
    return out;
}

std::string kind_of(const Json& obj, const std::string& path) {
    const Json& v = field(obj, "kind", path);
    if (!v.is_string()) {
        parse_fail(path + ".kind", "expected a string");
    }
    return v.get<std::string>();
}

/// Library validation errors inside a parsed block become parse errors at that path.
template <class F>
auto guarded(const std::string& path, F&& make) {
    try {
        return make();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::invalid_argument) {
            parse_fail(path, e.what());
        }
        throw;
    }
}

Json profile_json(const Profile& p) {
    return std::visit(overloaded{
                          [](const Profile::Constant& c) { return Json{{"kind", "constant"}, {"value", c.value}}; },
                          [](const Profile::Polynomial& c) { return Json{{"kind", "polynomial"}, {"coeffs", c.coeffs}}; },
                          [](const Profile::Table& c) {
                              return Json{{"kind", "table"}, {"lo", c.lo}, {"hi", c.hi}, {"values", c.values}};
                          },
                      },
                      p.form());
}

Profile profile_from(const Json& doc, const std::string& path) {
    const std::string kind = kind_of(doc, path);
    if (kind == "constant") {
        return Profile::constant(number(doc, "value", path));
    }
    if (kind == "polynomial") {
        return Profile(Profile::Polynomial{numbers(doc, "coeffs", path)});
    }
    if (kind == "table") {
        return guarded(path, [&] {
            return Profile(Profile::Table{number(doc, "lo", path), number(doc, "hi", path), numbers(doc, "values", path)});
        });
    }
    parse_fail(path + ".kind", "unknown profile kind '" + kind + "'");
}

Json coefficient_json(const Coefficient& c) {
    return std::visit(
        overloaded{
            [](const Coefficient::Constant& v) { return Json{{"kind", "constant"}, {"value", v.value}}; },
            [](const Coefficient::Separable& v) {
                return Json{{"kind", "separable"}, {"x", profile_json(v.x)}, {"t", profile_json(v.t)}};
            },
            [](const Coefficient::Table& v) {
                return Json{{"kind", "table"}, {"x", v.x}, {"t", v.t}, {"values", v.values}};
            },
        },
        c.form());
}

Coefficient coefficient_from(const Json& doc, const std::string& path) {
    const std::string kind = kind_of(doc, path);
    if (kind == "constant") {
        return Coefficient::constant(number(doc, "value", path));
    }
    if (kind == "separable") {
        return Coefficient(Coefficient::Separable{profile_from(field(doc, "x", path), path + ".x"),
                                                  profile_from(field(doc, "t", path), path + ".t")});
    }
    if (kind == "table") {
        return guarded(path, [&] {
            return Coefficient(
                Coefficient::Table{numbers(doc, "x", path), numbers(doc, "t", path), matrix(doc, "values", path)});
        });
    }
    parse_fail(path + ".kind", "unknown coefficient kind '" + kind + "'");
}

Json kernel_json(const FluxKernel& k) {
    return std::visit(overloaded{
                          [](const FluxKernel::Constant& v) { return Json{{"kind", "constant"}, {"value", v.value}}; },
                          [](const FluxKernel::Separable& v) {
                              return Json{{"kind", "separable"},   {"left", v.left},
                                          {"right", v.right},      {"y", profile_json(v.y)},
                                          {"t", profile_json(v.t)}};
                          },
                          [](const FluxKernel::Table& v) {
                              return Json{{"kind", "table"}, {"y", v.y}, {"t", v.t}, {"left", v.left}, {"right", v.right}};
                          },
                      },
                      k.form());
}

FluxKernel kernel_from(const Json& doc, const std::string& path) {
    const std::string kind = kind_of(doc, path);
    if (kind == "constant") {
        return FluxKernel::constant(number(doc, "value", path));
    }
    if (kind == "separable") {
        return FluxKernel(FluxKernel::Separable{number_or(doc, "left", 1.0, path), number_or(doc, "right", 1.0, path),
                                                profile_from(field(doc, "y", path), path + ".y"),
                                                profile_from(field(doc, "t", path), path + ".t")});
    }
    if (kind == "table") {
        return guarded(path, [&] {
            return FluxKernel(FluxKernel::Table{numbers(doc, "y", path), numbers(doc, "t", path),
                                                matrix(doc, "left", path), matrix(doc, "right", path)});
        });
    }
    parse_fail(path + ".kind", "unknown kernel kind '" + kind + "'");
}

Json datum_json(const InitialDatum& u0) {
    return std::visit(overloaded{
                          [](const InitialDatum::Constant& v) { return Json{{"kind", "constant"}, {"value", v.value}}; },
                          [](const InitialDatum::Cosine& v) {
                              return Json{{"kind", "cosine"},
                                          {"offset", v.offset},
                                          {"amplitude", v.amplitude},
                                          {"mode", v.mode}};
                          },
                          [](const InitialDatum::Table& v) { return Json{{"kind", "table"}, {"values", v.values}}; },
                      },
                      u0.form());
}

InitialDatum datum_from(const Json& doc, const std::string& path) {
    const std::string kind = kind_of(doc, path);
    if (kind == "constant") {
        return InitialDatum::constant(number(doc, "value", path));
    }
    if (kind == "cosine") {
        const double mode = number_or(doc, "mode", 1.0, path);
        if (mode != std::floor(mode)) {
            parse_fail(path + ".mode", "expected an integer");
        }
        return InitialDatum(InitialDatum::Cosine{number_or(doc, "offset", 0.0, path),
                                                 number_or(doc, "amplitude", 1.0, path), static_cast<int>(mode)});
    }
    if (kind == "table") {
        return guarded(path, [&] { return InitialDatum(InitialDatum::Table{numbers(doc, "values", path)}); });
    }
    parse_fail(path + ".kind", "unknown initial datum kind '" + kind + "'");
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += ch;
        }
    }
    return out;
}

double nice_step(double raw) {
    const double exponent = std::floor(std::log10(raw));
    const double base = std::pow(10.0, exponent);
    const double f = raw / base;
    double nice = 10.0;
    if (f < 1.5) {
        nice = 1.0;
    } else if (f < 3.0) {
        nice = 2.0;
    } else if (f < 7.0) {
        nice = 5.0;
    }
    return nice * base;
}

struct Axis {
    double lo;
    double hi;
    double step;
};

Axis nice_axis(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::abs(lo) > 0.0 ? 0.5 * std::abs(lo) : 0.5;
        lo -= pad;
        hi += pad;
    }
    const double step = nice_step((hi - lo) / 5.0);
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

}  // namespace

Json to_json(const ProblemSpec& spec) {
    return Json{{"L", spec.domain.length()},
                {"p", spec.p},
                {"l", spec.l},
                {"c", coefficient_json(spec.c)},
                {"k", kernel_json(spec.k)},
                {"u0", datum_json(spec.u0)},
                {"T", spec.horizon},
                {"grid", {{"n_cells", spec.grid.n_cells}, {"dt", spec.grid.dt}}}};
}

ProblemSpec problem_from_json(const Json& doc, const std::string& path) {
    ProblemSpec spec;
    const double length = number(doc, "L", path);
    if (!(length > 0.0)) {
        parse_fail(path + ".L", "must be positive");
    }
    spec.domain = IntervalDomain(length);
    spec.p = number(doc, "p", path);
    spec.l = number(doc, "l", path);
    spec.c = coefficient_from(field(doc, "c", path), path + ".c");
    spec.k = kernel_from(field(doc, "k", path), path + ".k");
    spec.u0 = datum_from(field(doc, "u0", path), path + ".u0");
    spec.horizon = number(doc, "T", path);
    const Json& grid = field(doc, "grid", path);
    const double n_cells = number(grid, "n_cells", path + ".grid");
    if (n_cells != std::floor(n_cells)) {
        parse_fail(path + ".grid.n_cells", "expected an integer");
    }
    spec.grid.n_cells = static_cast<int>(n_cells);
    spec.grid.dt = number(grid, "dt", path + ".grid");
    return spec;
}

Json to_json(const OrderReport& report) {
    return Json{{"verdict", std::string(to_string(report.verdict))},
                {"worst",
                 {{"interior", {{"x", report.interior.x}, {"t", report.interior.t}, {"value", report.interior.value}}},
                  {"boundary",
                   {{"side", std::string(to_string(report.boundary.side))},
                    {"t", report.boundary.t},
                    {"value", report.boundary.value}}},
                  {"initial", {{"x", report.initial.x}, {"value", report.initial.value}}}}}};
}

Json to_json(const Certificate& cert) {
    Json witnesses = Json::array();
    for (const Witness& w : cert.witnesses) {
        Json item{{"condition", std::string(condition_label(w.condition))},
                  {"x0", w.x0},
                  {"t0", w.t0},
                  {"value", w.value},
                  {"holds", w.holds}};
        if (!w.samples.empty()) {
            item["samples"] = w.samples;
        }
        witnesses.push_back(std::move(item));
    }
    Json evidence = Json::object();
    for (const auto& [key, value] : cert.evidence) {
        evidence[key] = value;
    }
    return Json{{"kind", std::string(to_string(cert.kind))},
                {"status", std::string(to_string(cert.status))},
                {"failing_stage", cert.failing_stage},
                {"witnesses", witnesses},
                {"evidence", evidence},
                {"notes", cert.notes}};
}

Json to_json(const Error& error) {
    Json out{{"error", std::string(to_string(error.kind()))}, {"message", error.what()}};
    if (const auto* cf = dynamic_cast<const ContractionFailure*>(&error)) {
        out["sup_diffs"] = cf->sup_diffs();
        out["ratios"] = cf->ratios();
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    const Grid& grid = traj.grid();
    std::string out = "t";
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        out += "," + g17(grid.x(i));
    }
    out += "\n";
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        out += g17(grid.t(j));
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            out += "," + g17(traj(j, i));
        }
        out += "\n";
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& row, std::size_t line_no) {
        std::vector<double> cells;
        std::size_t pos = 0;
        bool first = true;
        while (pos <= row.size()) {
            const std::size_t next = std::min(row.find(',', pos), row.size());
            const std::string cell = row.substr(pos, next - pos);
            if (!(first && line_no == 1)) {
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (cell.empty() || end != cell.c_str() + cell.size()) {
                    parse_fail("csv line " + std::to_string(line_no), "bad number '" + cell + "'");
                }
                cells.push_back(v);
            } else if (cell != "t") {
                parse_fail("csv line 1", "header must start with 't'");
            }
            first = false;
            pos = next + 1;
        }
        return cells;
    };

    std::vector<double> xs;
    std::vector<double> ts;
    std::vector<double> values;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<double> cells = split(line, line_no);
        if (line_no == 1) {
            xs = std::move(cells);
            continue;
        }
        if (cells.size() != xs.size() + 1) {
            parse_fail("csv line " + std::to_string(line_no), "expected " + std::to_string(xs.size() + 1) + " cells");
        }
        ts.push_back(cells.front());
        values.insert(values.end(), cells.begin() + 1, cells.end());
    }
    if (xs.size() < 2 || ts.size() < 2) {
        parse_fail("csv", "need at least two nodes and two levels");
    }
    const double dt = ts[1] - ts[0];
    const Grid grid(IntervalDomain(xs.back()), static_cast<int>(xs.size()) - 1, dt, static_cast<int>(ts.size()) - 1);
    for (std::size_t j = 0; j < ts.size(); ++j) {
        if (std::abs(grid.t(j) - ts[j]) > 1e-12 * std::max(1.0, std::abs(ts[j]))) {
            parse_fail("csv line " + std::to_string(j + 2), "time levels are not uniform");
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(grid.x(i) - xs[i]) > 1e-12 * std::max(1.0, std::abs(xs[i]))) {
            parse_fail("csv line 1", "nodes are not uniform");
        }
    }
    return Trajectory(grid, std::move(values));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            fail(ErrorKind::io_error, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        fail(ErrorKind::io_error, "cannot write " + path.string());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io_error, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label) {
    constexpr double kWidth = 800.0;
    constexpr double kHeight = 600.0;
    constexpr double kLeft = 90.0;
    constexpr double kRight = 170.0;
    constexpr double kTop = 50.0;
    constexpr double kBottom = 70.0;
    static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        require(s.x.size() == s.y.size(), "svg_line_plot: series length mismatch");
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            xmin = std::min(xmin, s.x[k]);
            xmax = std::max(xmax, s.x[k]);
            ymin = std::min(ymin, s.y[k]);
            ymax = std::max(ymax, s.y[k]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    const Axis ax = nice_axis(xmin, xmax);
    const Axis ay = nice_axis(ymin, ymax);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    out << "<text x=\"" << fixed2(kLeft + pw / 2) << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"18\">" << xml_escape(title) << "</text>\n";
    out << "<rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop) << "\" width=\"" << fixed2(pw) << "\" height=\""
        << fixed2(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const int x_ticks = static_cast<int>(std::lround((ax.hi - ax.lo) / ax.step));
    for (int k = 0; k <= x_ticks; ++k) {
        const double v = ax.lo + k * ax.step;
        const double px = sx(v);
        out << "<line x1=\"" << fixed2(px) << "\" y1=\"" << fixed2(kTop + ph) << "\" x2=\"" << fixed2(px) << "\" y2=\""
            << fixed2(kTop + ph + 6) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fixed2(px) << "\" y=\"" << fixed2(kTop + ph + 22)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(v) << "</text>\n";
    }
    const int y_ticks = static_cast<int>(std::lround((ay.hi - ay.lo) / ay.step));
    for (int k = 0; k <= y_ticks; ++k) {
        const double v = ay.lo + k * ay.step;
        const double py = sy(v);
        out << "<line x1=\"" << fixed2(kLeft - 6) << "\" y1=\"" << fixed2(py) << "\" x2=\"" << fixed2(kLeft) << "\" y2=\""
            << fixed2(py) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fixed2(kLeft - 10) << "\" y=\"" << fixed2(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(v) << "</text>\n";
    }
    out << "<text x=\"" << fixed2(kLeft + pw / 2) << "\" y=\"" << fixed2(kHeight - 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << fixed2(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\" transform=\"rotate(-90 20 " << fixed2(kTop + ph / 2) << ")\">" << xml_escape(y_label)
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series[s].x.size(); ++k) {
            out << (k ? " " : "") << fixed2(sx(series[s].x[k])) << "," << fixed2(sy(series[s].y[k]));
        }
        out << "\"/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
        out << "<line x1=\"" << fixed2(kWidth - kRight + 15) << "\" y1=\"" << fixed2(ly) << "\" x2=\""
            << fixed2(kWidth - kRight + 40) << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << fixed2(kWidth - kRight + 45) << "\" y=\"" << fixed2(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(series[s].label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void export_plots(const Trajectory& traj, const std::vector<double>& times, const std::filesystem::path& out_dir) {
    const Grid& grid = traj.grid();
    std::vector<PlotSeries> profiles;
    for (double t : times) {
        require(t >= 0.0 && t <= grid.horizon() * (1.0 + 1e-12), "export_plots: time outside the horizon");
        const auto j = std::min(grid.level_count() - 1, static_cast<std::size_t>(std::lround(t / grid.dt())));
        PlotSeries s;
        s.label = "t=" + tick_label(grid.t(j));
        s.x = grid.nodes();
        const auto level = traj.level(j);
        s.y.assign(level.begin(), level.end());
        profiles.push_back(std::move(s));
    }
    PlotSeries sup;
    sup.label = "sup u";
    sup.x = grid.times();
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        const auto level = traj.level(j);
        sup.y.push_back(*std::max_element(level.begin(), level.end()));
    }
    write_text(out_dir / "profiles.svg", svg_line_plot(profiles, "Profiles u(x, t)", "x", "u"));
    write_text(out_dir / "supnorm.svg", svg_line_plot({sup}, "Sup norm", "t", "sup u"));
}

}  // namespace nlp
