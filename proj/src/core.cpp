#include "iaf/core.hpp"

#include <algorithm>
#include <sstream>

#include "iaf/errors.hpp"

namespace iaf {

Grid1D::Grid1D(int n_cells, double x_left, double x_right)
    : n_cells_(n_cells), x_left_(x_left), x_right_(x_right) {
    if (n_cells <= 0) throw ConfigError("grid needs a positive number of cells");
    if (!(x_right > x_left)) throw ConfigError("grid needs x_right > x_left");
    dx_ = (x_right - x_left) / n_cells;
}

StateAF::StateAF(int n_cells, Layout layout_)
    : averages(n_cells, 0.0), points(n_points(n_cells, layout_), 0.0), layout(layout_) {}

void StateAF::validate() const {
    if (averages.empty()) throw ConfigError("state has no cells");
    if (static_cast<int>(points.size()) != n_points(n_cells(), layout))
        throw ConfigError("point value count does not match the state layout");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(averages.begin(), averages.end(), finite) ||
        !std::all_of(points.begin(), points.end(), finite))
        throw NumericalError("state contains non-finite entries");
}

namespace {

double jiang_shu(const profile::JiangShuComposite& p, double x_in) {
    const double x = x_in - p.offset;
    auto g = [&](double z) { return std::exp(-p.beta_g * (x - z) * (x - z)); };
    auto f = [&](double a) {
        return std::sqrt(std::max(1.0 - p.alpha * p.alpha * (x - a) * (x - a), 0.0));
    };
    if (x >= -0.8 && x <= -0.6) return (g(p.z0 - p.delta) + g(p.z0 + p.delta) + 4.0 * g(p.z0)) / 6.0;
    if (x >= -0.4 && x <= -0.2) return 1.0;
    if (x >= 0.0 && x <= 0.2) return 1.0 - std::abs(10.0 * (x - 0.1));
    if (x >= 0.4 && x <= 0.6) return (f(p.a - p.delta) + f(p.a + p.delta) + 4.0 * f(p.a)) / 6.0;
    return 0.0;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap(double x, double left, double length) {
    double r = std::fmod(x - left, length);
    if (r < 0) r += length;
    return left + r;
}

}  // namespace

double evaluate(const ProfileDescriptor& profile, double x) {
    return std::visit(
        overloaded{
            [](const profile::Zero&) { return 0.0; },
            [](const profile::Constant& p) { return p.value; },
            [x](const profile::Sine& p) { return std::sin(p.wavenumber * x); },
            [x](const profile::Gaussian& p) {
                const double s = (x - p.center) / p.width;
                return std::exp(-s * s);
            },
            [x](const profile::JiangShuComposite& p) { return jiang_shu(p, x); },
        },
        profile);
}

std::string describe(const ProfileDescriptor& profile) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const profile::Zero&) { os << "zero"; },
                   [&](const profile::Constant& p) { os << "constant:" << p.value; },
                   [&](const profile::Sine& p) { os << "sine:" << p.wavenumber; },
                   [&](const profile::Gaussian& p) { os << "gaussian:" << p.center << "," << p.width; },
                   [&](const profile::JiangShuComposite&) { os << "jiang-shu"; },
               },
               profile);
    return os.str();
}

ProfileDescriptor parse_profile(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + s + "' in profile '" + text + "'");
        }
    };
    if (kind == "zero") return profile::Zero{};
    if (kind == "constant") return profile::Constant{args.empty() ? 1.0 : number(args)};
    if (kind == "sine") return profile::Sine{args.empty() ? 2.0 * M_PI : number(args)};
    if (kind == "jiang-shu") return profile::JiangShuComposite{};
    if (kind == "gaussian") {
        const auto comma = args.find(',');
        if (comma == std::string::npos) throw ConfigError("gaussian profile needs CENTER,WIDTH");
        const double width = number(args.substr(comma + 1));
        if (!(width > 0)) throw ConfigError("gaussian width must be positive");
        return profile::Gaussian{number(args.substr(0, comma)), width};
    }
    throw ConfigError("unknown profile '" + text + "'");
}

SignalDescriptor parse_signal(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + s + "' in signal '" + text + "'");
        }
    };
    if (kind == "zero") return signal::Zero{};
    if (kind == "constant") return signal::Constant{args.empty() ? 1.0 : number(args)};
    if (kind == "sine") {
        if (args.empty()) return signal::Sine{};
        const auto comma = args.find(',');
        if (comma == std::string::npos) return signal::Sine{number(args), 1.0};
        return signal::Sine{number(args.substr(0, comma)), number(args.substr(comma + 1))};
    }
    throw ConfigError("unknown signal '" + text + "'");
}

BoundarySignal make_signal(const SignalDescriptor& descriptor) {
    return std::visit(overloaded{
                          [](const signal::Zero&) -> BoundarySignal {
                              return [](double) { return 0.0; };
                          },
                          [](const signal::Constant& s) -> BoundarySignal {
                              return [v = s.value](double) { return v; };
                          },
                          [](const signal::Sine& s) -> BoundarySignal {
                              return [s](double t) { return s.amplitude * std::sin(s.omega * t); };
                          },
                      },
                      descriptor);
}

void AdvectionProblem::validate() const {
    if (!(speed > 0) || !std::isfinite(speed)) throw ConfigError("advection speed must be positive");
}

namespace {

template <class Q>
StateAF sample(const Grid1D& grid, Layout layout, Q&& q) {
    StateAF s(grid.n_cells(), layout);
    for (std::size_t j = 0; j < s.points.size(); ++j) s.points[j] = q(grid.interface(static_cast<int>(j)));
    for (int i = 0; i < grid.n_cells(); ++i)
        s.averages[i] = gauss5::integrate(q, grid.interface(i), grid.interface(i + 1)) / grid.dx();
    return s;
}

}  // namespace

StateAF init_state(const Grid1D& grid, const ProfileDescriptor& profile, Layout layout) {
    StateAF s = sample(grid, layout, [&](double x) { return evaluate(profile, x); });
    s.validate();
    return s;
}

StateAF exact_advection(const ProfileDescriptor& profile, double speed, double t, const Grid1D& grid) {
    const double shift = speed * t;
    return sample(grid, Layout::Periodic, [&](double x) {
        return evaluate(profile, wrap(x - shift, grid.x_left(), grid.length()));
    });
}

ErrorNorms error_norms(const StateAF& state, const StateAF& exact, double dx) {
    if (state.layout != exact.layout || state.averages.size() != exact.averages.size() ||
        state.points.size() != exact.points.size())
        throw ConfigError("error_norms: states have different layouts");
    ErrorNorms e;
    for (std::size_t i = 0; i < state.averages.size(); ++i)
        e.l1_avg += std::abs(state.averages[i] - exact.averages[i]);
    e.l1_avg *= dx;
    for (std::size_t j = 0; j < state.points.size(); ++j) {
        const double d = std::abs(state.points[j] - exact.points[j]);
        e.l1_pts += d;
        e.linf_pts = std::max(e.linf_pts, d);
    }
    e.l1_pts /= static_cast<double>(state.averages.size());
    return e;
}

double total_mass(const StateAF& state, double dx) {
    double m = 0.0;
    for (double a : state.averages) m += a;
    return m * dx;
}

double total_variation(const StateAF& state) {
    const auto& a = state.averages;
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) tv += std::abs(a[i + 1] - a[i]);
    if (state.layout == Layout::Periodic && a.size() > 1) tv += std::abs(a.front() - a.back());
    return tv;
}

}  // namespace iaf
