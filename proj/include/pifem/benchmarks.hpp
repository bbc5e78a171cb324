#pragma once

#include <string>
#include <vector>

#include "pifem/level_set.hpp"
#include "pifem/mesh.hpp"

namespace pifem {

/// A moving-interface problem with a manufactured exact solution: level set,
/// diffusion coefficients, per-side solution/gradient/time-derivative, and
/// the analytically derived source f = dt u - div(beta grad u).
struct BenchmarkProblem {
    std::string name;
    LevelSet levelset;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    SideScalarFn exact_u;
    SideVectorFn exact_grad_u;
    SideScalarFn exact_dt_u;
    SideScalarFn source_f;

    /// Parametric samples on the interface at time t (empty if the interface
    /// leaves the domain).
    std::vector<Vec2> interface_samples(double t, int count) const;

    Side side_at(const Vec2& x, double t) const {
        return levelset.phi(x, t) > 0.0 ? Side::Plus : Side::Minus;
    }
    double u_at(const Vec2& x, double t) const { return exact_u(x, side_at(x, t), t); }
    Vec2 grad_at(const Vec2& x, double t) const { return exact_grad_u(x, side_at(x, t), t); }
};

/// The three benchmark problems: "line" (translating line), "circle" (moving
/// circle), "ellipse" (rotating ellipse), all with beta = (1, 10).
BenchmarkProblem make_problem(const std::string& name);

struct JumpResiduals {
    double max_value_jump = 0.0;
    double max_flux_jump = 0.0;
};

/// Max |[u]| and |[beta grad u . n]| over sampled interface points at time t.
JumpResiduals verify_jump_conditions(const BenchmarkProblem& problem, double t, int samples);

/// Max residual |f - (dt u - beta lap u)| / max(1, |f|) over random space-time
/// samples, centered finite differences applied to the exact solution branch
/// active at each sample point.
double verify_source_fd(const BenchmarkProblem& problem, int samples, unsigned seed = 7u);

/// Level set frozen at time t0 (for stationary-interface experiments).
LevelSet frozen(const LevelSet& ls, double t0);

/// Exact boundary trace at time t as an all-node vector (interior nodes too,
/// which the Dirichlet lift ignores).
std::vector<double> boundary_trace(const Mesh& mesh, const BenchmarkProblem& problem, double t);

}  // namespace pifem
