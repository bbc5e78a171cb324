#include "pifem/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pifem/errors.hpp"

namespace pifem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBetaMinus = 1.0;
constexpr double kBetaPlus = 10.0;

double beta_of(Side s) { return s == Side::Minus ? kBetaMinus : kBetaPlus; }

BenchmarkProblem make_line() {
    BenchmarkProblem p;
    p.name = "line";
    p.beta_minus = kBetaMinus;
    p.beta_plus = kBetaPlus;
    auto shift = [](double t) { return kPi / 5.0 + t; };
    p.levelset.phi = [shift](Vec2 x, double t) { return x.x - shift(t); };
    p.levelset.grad_phi = [](Vec2, double) { return Vec2{1.0, 0.0}; };
    p.levelset.velocity_normal_bound = 1.0;

    p.exact_u = [shift](Vec2 x, Side s, double t) { return std::sin(x.x - shift(t)) / beta_of(s); };
    p.exact_grad_u = [shift](Vec2 x, Side s, double t) {
        return Vec2{std::cos(x.x - shift(t)) / beta_of(s), 0.0};
    };
    p.exact_dt_u = [shift](Vec2 x, Side s, double t) {
        return -std::cos(x.x - shift(t)) / beta_of(s);
    };
    // f = dt u - beta lap u = -cos(.)/beta + sin(.)
    p.source_f = [shift](Vec2 x, Side s, double t) {
        const double arg = x.x - shift(t);
        return -std::cos(arg) / beta_of(s) + std::sin(arg);
    };
    return p;
}

BenchmarkProblem make_circle() {
    BenchmarkProblem p;
    p.name = "circle";
    p.beta_minus = kBetaMinus;
    p.beta_plus = kBetaPlus;
    const double r0 = kPi / 6.0;
    auto center = [](double t) { return Vec2{0.3 * std::cos(kPi * t), 0.3 * std::sin(kPi * t)}; };
    auto center_dot = [](double t) {
        return Vec2{-0.3 * kPi * std::sin(kPi * t), 0.3 * kPi * std::cos(kPi * t)};
    };

    p.levelset.phi = [center, r0](Vec2 x, double t) {
        const Vec2 d = x - center(t);
        return d.dot(d) - r0 * r0;
    };
    p.levelset.grad_phi = [center](Vec2 x, double t) { return (x - center(t)) * 2.0; };
    p.levelset.velocity_normal_bound = 0.3 * kPi;

    const double scale = 6.0 / kPi;                          // (pi/6)^{-1}
    const double lift = std::pow(r0, 4) * (1.0 / kBetaMinus - 1.0 / kBetaPlus);

    p.exact_u = [center, scale, lift](Vec2 x, Side s, double t) {
        const Vec2 d = x - center(t);
        const double r5 = std::pow(d.dot(d), 2.5);
        return r5 * scale / beta_of(s) + (s == Side::Plus ? lift : 0.0);
    };
    p.exact_grad_u = [center, scale](Vec2 x, Side s, double t) {
        const Vec2 d = x - center(t);
        const double r3 = std::pow(d.dot(d), 1.5);
        return d * (5.0 * r3 * scale / beta_of(s));
    };
    p.exact_dt_u = [center, center_dot, scale](Vec2 x, Side s, double t) {
        const Vec2 d = x - center(t);
        const double r3 = std::pow(d.dot(d), 1.5);
        return -5.0 * r3 * scale / beta_of(s) * d.dot(center_dot(t));
    };
    // lap u = 25 r^3 * scale / beta per side
    p.source_f = [center, center_dot, scale](Vec2 x, Side s, double t) {
        const Vec2 d = x - center(t);
        const double r3 = std::pow(d.dot(d), 1.5);
        return -5.0 * r3 * scale / beta_of(s) * d.dot(center_dot(t)) - 25.0 * r3 * scale;
    };
    return p;
}

BenchmarkProblem make_ellipse() {
    BenchmarkProblem p;
    p.name = "ellipse";
    p.beta_minus = kBetaMinus;
    p.beta_plus = kBetaPlus;
    const double a = kPi / 4.0;
    const double b = kPi / 7.0;
    const double a2 = a * a, b2 = b * b;
    const double pref = a2 * b2;

    // rotating frame: X = c x + s y, Y = -s x + c y with angle pi*t
    struct Frame {
        double c, s;
    };
    auto frame = [](double t) { return Frame{std::cos(kPi * t), std::sin(kPi * t)}; };
    auto to_frame = [frame](Vec2 x, double t) {
        const auto [c, s] = frame(t);
        return Vec2{c * x.x + s * x.y, -s * x.x + c * x.y};
    };

    p.levelset.phi = [to_frame](Vec2 x, double t) {
        const Vec2 r = to_frame(x, t);
        return 16.0 * r.x * r.x + 49.0 * r.y * r.y - kPi * kPi;
    };
    p.levelset.grad_phi = [frame, to_frame](Vec2 x, double t) {
        const Vec2 r = to_frame(x, t);
        const auto [c, s] = frame(t);
        return Vec2{32.0 * r.x * c - 98.0 * r.y * s, 32.0 * r.x * s + 98.0 * r.y * c};
    };
    p.levelset.velocity_normal_bound = kPi * kPi / 4.0;   // rotation rate pi, max radius pi/4

    auto q_of = [to_frame, a2, b2](Vec2 x, double t) {
        const Vec2 r = to_frame(x, t);
        return r.x * r.x / a2 + r.y * r.y / b2;
    };
    const double lift = 1.0 / kBetaMinus - 1.0 / kBetaPlus;

    p.exact_u = [q_of, pref, lift](Vec2 x, Side s, double t) {
        const double q = q_of(x, t);
        return pref * (std::pow(q, 2.5) / beta_of(s) + (s == Side::Plus ? lift : 0.0));
    };
    p.exact_grad_u = [frame, to_frame, a2, b2, pref](Vec2 x, Side s, double t) {
        const Vec2 r = to_frame(x, t);
        const auto [c, s_t] = frame(t);
        const double q = r.x * r.x / a2 + r.y * r.y / b2;
        const Vec2 gq{2.0 * r.x * c / a2 - 2.0 * r.y * s_t / b2,
                      2.0 * r.x * s_t / a2 + 2.0 * r.y * c / b2};
        return gq * (pref * 2.5 * std::pow(q, 1.5) / beta_of(s));
    };
    p.exact_dt_u = [to_frame, a2, b2, pref](Vec2 x, Side s, double t) {
        const Vec2 r = to_frame(x, t);
        const double q = r.x * r.x / a2 + r.y * r.y / b2;
        const double dq_dt = 2.0 * kPi * r.x * r.y * (1.0 / a2 - 1.0 / b2);
        return pref * 2.5 * std::pow(q, 1.5) * dq_dt / beta_of(s);
    };
    p.source_f = [to_frame, a2, b2, pref](Vec2 x, Side s, double t) {
        const Vec2 r = to_frame(x, t);
        const double q = r.x * r.x / a2 + r.y * r.y / b2;
        const double dq_dt = 2.0 * kPi * r.x * r.y * (1.0 / a2 - 1.0 / b2);
        const double grad_q_sq = 4.0 * r.x * r.x / (a2 * a2) + 4.0 * r.y * r.y / (b2 * b2);
        const double lap_q = 2.0 / a2 + 2.0 / b2;
        const double lap_u_times_beta =
            pref * 2.5 * (1.5 * std::sqrt(q) * grad_q_sq + std::pow(q, 1.5) * lap_q);
        return pref * 2.5 * std::pow(q, 1.5) * dq_dt / beta_of(s) - lap_u_times_beta;
    };
    return p;
}

}  // namespace

std::vector<Vec2> BenchmarkProblem::interface_samples(double t, int count) const {
    std::vector<Vec2> out;
    if (name == "line") {
        const double x = kPi / 5.0 + t;
        if (x <= -1.0 || x >= 1.0) return out;
        for (int k = 0; k < count; ++k)
            out.push_back({x, -1.0 + 2.0 * (k + 0.5) / count});
    } else if (name == "circle") {
        const Vec2 c{0.3 * std::cos(kPi * t), 0.3 * std::sin(kPi * t)};
        const double r0 = kPi / 6.0;
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * kPi * k / count;
            out.push_back(c + Vec2{r0 * std::cos(th), r0 * std::sin(th)});
        }
    } else if (name == "ellipse") {
        const double c = std::cos(kPi * t), s = std::sin(kPi * t);
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * kPi * k / count;
            const double X = (kPi / 4.0) * std::cos(th);
            const double Y = (kPi / 7.0) * std::sin(th);
            out.push_back({c * X - s * Y, s * X + c * Y});
        }
    }
    return out;
}

BenchmarkProblem make_problem(const std::string& name) {
    if (name == "line") return make_line();
    if (name == "circle") return make_circle();
    if (name == "ellipse") return make_ellipse();
    throw InvalidArgument("make_problem: unknown problem '" + name + "'");
}

JumpResiduals verify_jump_conditions(const BenchmarkProblem& p, double t, int samples) {
    JumpResiduals res;
    for (const Vec2& x : p.interface_samples(t, samples)) {
        Vec2 n = p.levelset.grad_phi(x, t);
        const double len = n.norm();
        if (len > 0.0) n = n / len;
        const double um = p.exact_u(x, Side::Minus, t);
        const double up = p.exact_u(x, Side::Plus, t);
        const double fm = p.beta_minus * p.exact_grad_u(x, Side::Minus, t).dot(n);
        const double fp = p.beta_plus * p.exact_grad_u(x, Side::Plus, t).dot(n);
        res.max_value_jump = std::max(res.max_value_jump, std::abs(um - up));
        res.max_flux_jump = std::max(res.max_flux_jump, std::abs(fm - fp));
    }
    return res;
}

double verify_source_fd(const BenchmarkProblem& p, int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-0.95, 0.95);
    std::uniform_real_distribution<double> time(0.0, 1.0);
    // Second differences hit a rounding floor of ~4*eps*|u|/h^2, so the step
    // balances that against the O(h^2) truncation for these solution scales.
    const double h = 2e-4;

    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Vec2 x{coord(rng), coord(rng)};
        const double t = time(rng);
        // verify each branch where it is in effect
        const Side s = p.side_at(x, t);
        auto u = [&](Vec2 y, double tau) { return p.exact_u(y, s, tau); };
        const double dt = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        const double uxx = (u({x.x + h, x.y}, t) - 2.0 * u(x, t) + u({x.x - h, x.y}, t)) / (h * h);
        const double uyy = (u({x.x, x.y + h}, t) - 2.0 * u(x, t) + u({x.x, x.y - h}, t)) / (h * h);
        const double beta = s == Side::Minus ? p.beta_minus : p.beta_plus;
        const double fd = dt - beta * (uxx + uyy);
        const double f = p.source_f(x, s, t);
        worst = std::max(worst, std::abs(fd - f) / std::max(1.0, std::abs(f)));
    }
    return worst;
}

LevelSet frozen(const LevelSet& ls, double t0) {
    LevelSet out;
    out.phi = [phi = ls.phi, t0](Vec2 x, double) { return phi(x, t0); };
    out.grad_phi = [grad = ls.grad_phi, t0](Vec2 x, double) { return grad(x, t0); };
    out.velocity_normal_bound = 0.0;
    return out;
}

std::vector<double> boundary_trace(const Mesh& mesh, const BenchmarkProblem& problem, double t) {
    std::vector<double> out(mesh.node_count(), 0.0);
    for (int n = 0; n < mesh.node_count(); ++n)
        if (mesh.boundary_node[n]) out[n] = problem.u_at(mesh.nodes[n], t);
    return out;
}

}  // namespace pifem
