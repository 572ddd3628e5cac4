// Mean-field Bloch dynamics of the one-axis model, closed-form steady
// states, the critical coupling, and phase-diagram sweeps.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmg {

// Scaled collective spin, X = <Jx>/j etc. with j = N/2.
struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm_sq() const { return x * x + y * y + z * z; }
};

struct SemiclassicalParams {
    double h = 0.0;
    double lambda = 0.0;
    double gamma_b = 0.0;
    double gamma_dep = 0.0;
};

inline BlochVector bloch_rhs(const BlochVector& s, const SemiclassicalParams& p) {
    BlochVector d;
    d.x = 2.0 * p.h * s.y - p.gamma_b * s.z * s.x - 0.5 * p.gamma_dep * s.x;
    d.y = -2.0 * p.h * s.x + 2.0 * p.lambda * s.z * s.x - p.gamma_b * s.z * s.y
        - 0.5 * p.gamma_dep * s.y;
    d.z = -2.0 * p.lambda * s.x * s.y + p.gamma_b * (s.x * s.x + s.y * s.y);
    return d;
}

struct BlochSample {
    double t = 0.0;
    BlochVector s;
};

struct BlochTrajectory {
    std::vector<BlochSample> samples;
    bool diverged = false;
    double divergence_time = 0.0;

    const BlochVector& last() const { return samples.back().s; }
};

// Fixed-step RK4. For gamma_dep = 0 the squared norm is conserved exactly
// by the continuous flow; a per-step growth beyond 1e-9 marks the step as
// too coarse and aborts.
inline BlochTrajectory integrate_bloch(const BlochVector& s0, const SemiclassicalParams& p,
                                       double t_end, double dt_max,
                                       std::size_t record_stride = 1) {
    if (!(t_end > 0.0))
        throw std::invalid_argument("t_end must be > 0");
    if (!(dt_max > 0.0))
        throw std::invalid_argument("dt_max must be > 0");
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt_max));
    const double dt = t_end / static_cast<double>(n_steps);

    auto step = [&](const BlochVector& s) {
        const BlochVector k1 = bloch_rhs(s, p);
        auto advance = [&](const BlochVector& k, double f) {
            return BlochVector{s.x + f * k.x, s.y + f * k.y, s.z + f * k.z};
        };
        const BlochVector k2 = bloch_rhs(advance(k1, 0.5 * dt), p);
        const BlochVector k3 = bloch_rhs(advance(k2, 0.5 * dt), p);
        const BlochVector k4 = bloch_rhs(advance(k3, dt), p);
        const double w = dt / 6.0;
        return BlochVector{s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                           s.y + w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
                           s.z + w * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
    };

    BlochTrajectory traj;
    traj.samples.push_back({0.0, s0});
    BlochVector s = s0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double r2_before = s.norm_sq();
        const BlochVector next = step(s);
        const double t = static_cast<double>(i) * dt;
        if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.z)) {
            traj.diverged = true;
            traj.divergence_time = t;
            break;
        }
        if (p.gamma_dep == 0.0 && next.norm_sq() > r2_before + 1e-9) {
            traj.diverged = true;
            traj.divergence_time = t;
            break;
        }
        s = next;
        if (i % record_stride == 0 || i == n_steps)
            traj.samples.push_back({t, s});
    }
    return traj;
}

// lambda_c = h + Gamma_b^2 / (4h); independent of gamma_dep.
inline double critical_coupling(double h, double gamma_b) {
    if (!(h > 0.0))
        throw std::invalid_argument("critical_coupling requires h > 0");
    return h + gamma_b * gamma_b / (4.0 * h);
}

enum class SteadyBranch { Normal, BrokenPlus, BrokenMinus };
enum class SteadyMode { Paper, Oracle };

struct SteadyStateResult {
    SteadyBranch branch = SteadyBranch::Normal;
    BlochVector bloch;
    double z0 = 1.0;
    double r0 = 0.0;
    std::array<double, 4> residual{}; // the three flow equations + norm constraint
    SteadyMode mode = SteadyMode::Paper;
    bool inconsistent = false; // gamma_dep > 0 broken branch: no exact root exists
};

inline std::array<double, 4> steady_residuals(const BlochVector& s, const SemiclassicalParams& p) {
    const BlochVector d = bloch_rhs(s, p);
    return {d.x, d.y, d.z, s.norm_sq() - 1.0};
}

inline const char* branch_name(SteadyBranch b) {
    switch (b) {
        case SteadyBranch::Normal: return "normal";
        case SteadyBranch::BrokenPlus: return "broken-plus";
        default: return "broken-minus";
    }
}

// Closed-form steady states transcribed literally from the published
// expressions, including the broken-phase X denominator exactly as
// printed (1 + Gamma_b Z0^2 / 2h). Returns the normal branch below the
// critical coupling, otherwise both broken sign branches.
inline std::vector<SteadyStateResult> steady_state_paper(const SemiclassicalParams& p) {
    if (!(p.h > 0.0))
        throw std::invalid_argument("steady_state_paper requires h > 0");
    std::vector<SteadyStateResult> out;
    const double lc = critical_coupling(p.h, p.gamma_b);
    if (p.lambda <= lc) {
        SteadyStateResult r;
        r.branch = SteadyBranch::Normal;
        r.bloch = {0.0, 0.0, 1.0};
        r.residual = steady_residuals(r.bloch, p);
        out.push_back(r);
        return out;
    }
    if (!(p.gamma_b > 0.0))
        throw std::invalid_argument("broken branch requires Gamma_b > 0 (r0 undefined)");
    const double r0 = p.gamma_dep / (2.0 * p.gamma_b);
    const double disc = p.lambda * p.lambda
                      - p.gamma_b * p.gamma_b * (1.0 + r0 * p.lambda / p.h);
    if (disc < 0.0)
        return out; // no broken solution at these parameters
    const double z0 = (2.0 * p.h / (p.gamma_b * p.gamma_b)) * (p.lambda - std::sqrt(disc));
    const double z = z0 - r0;
    const double x_sq_num = 1.0 - z * z;
    const double x_den = 1.0 + p.gamma_b * z0 * z0 / (2.0 * p.h);
    if (x_sq_num < 0.0)
        return out;
    const double x_mag = std::sqrt(x_sq_num / x_den);
    for (int sign : {+1, -1}) {
        SteadyStateResult r;
        r.branch = sign > 0 ? SteadyBranch::BrokenPlus : SteadyBranch::BrokenMinus;
        r.z0 = z0;
        r.r0 = r0;
        r.bloch.x = sign * x_mag;
        r.bloch.y = sign * (p.gamma_b / (2.0 * p.h)) * z0 * x_mag;
        r.bloch.z = z;
        r.residual = steady_residuals(r.bloch, p);
        r.inconsistent = p.gamma_dep > 0.0;
        out.push_back(r);
    }
    return out;
}

namespace detail {

// Damped Gauss-Newton least squares on the 4 steady-state residuals with
// a forward-difference Jacobian.
inline std::optional<BlochVector> gauss_newton(BlochVector s, const SemiclassicalParams& p,
                                               double tol, int max_iter) {
    auto cost = [&](const BlochVector& v) {
        const auto r = steady_residuals(v, p);
        return r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3];
    };
    for (int it = 0; it < max_iter; ++it) {
        const auto r = steady_residuals(s, p);
        double jac[4][3];
        const double eps = 1e-8;
        for (int c = 0; c < 3; ++c) {
            BlochVector sp = s;
            (c == 0 ? sp.x : c == 1 ? sp.y : sp.z) += eps;
            const auto rp = steady_residuals(sp, p);
            for (int rr = 0; rr < 4; ++rr) jac[rr][c] = (rp[rr] - r[rr]) / eps;
        }
        // Normal equations (3x3), with a small Levenberg shift for rank
        // deficiencies near the poles.
        double jtj[3][3] = {}, jtr[3] = {};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 4; ++k) jtj[i][j] += jac[k][i] * jac[k][j];
            for (int k = 0; k < 4; ++k) jtr[i] += jac[k][i] * r[k];
        }
        double mu = 1e-12;
        for (int i = 0; i < 3; ++i) mu = std::max(mu, 1e-10 * jtj[i][i]);
        for (int i = 0; i < 3; ++i) jtj[i][i] += mu;
        // Solve jtj * d = jtr by Gaussian elimination with partial pivoting.
        double a[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) a[i][j] = jtj[i][j];
            a[i][3] = jtr[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int rr = col + 1; rr < 3; ++rr)
                if (std::abs(a[rr][col]) > std::abs(a[piv][col])) piv = rr;
            std::swap(a[col], a[piv]);
            if (std::abs(a[col][col]) < 1e-300) return std::nullopt;
            for (int rr = 0; rr < 3; ++rr) {
                if (rr == col) continue;
                const double f = a[rr][col] / a[col][col];
                for (int cc = col; cc < 4; ++cc) a[rr][cc] -= f * a[col][cc];
            }
        }
        const double dx = a[0][3] / a[0][0];
        const double dy = a[1][3] / a[1][1];
        const double dz = a[2][3] / a[2][2];

        // Backtracking line search on the squared residual.
        const double c0 = cost(s);
        double alpha = 1.0;
        BlochVector next = s;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            next = {s.x - alpha * dx, s.y - alpha * dy, s.z - alpha * dz};
            if (cost(next) < c0) { improved = true; break; }
            alpha *= 0.5;
        }
        if (!improved) return s.norm_sq() < 1e12 ? std::optional<BlochVector>(s) : std::nullopt;
        const double move = std::abs(alpha * dx) + std::abs(alpha * dy) + std::abs(alpha * dz);
        s = next;
        if (move < tol) break;
    }
    return s;
}

} // namespace detail

// Steady states from multi-start damped least squares on the full
// four-equation system. For gamma_dep = 0 the exact roots are recovered
// (residual ~ 0); for gamma_dep > 0 the system is overdetermined off the
// poles and the minimizers are returned flagged inconsistent, with the
// achieved residuals reported.
inline std::vector<SteadyStateResult> steady_state_oracle(const SemiclassicalParams& p,
                                                          double residual_tol = 1e-10,
                                                          int max_iter = 200) {
    std::vector<BlochVector> seeds = {
        {0.0, 0.0, 1.0},  {0.0, 0.0, -1.0},
        {1.0, 0.0, 0.0},  {-1.0, 0.0, 0.0},
        {0.0, 1.0, 0.0},  {0.6, 0.3, 0.74},
    };
    // Paper-mode solutions as extra seeds when available.
    if (p.h > 0.0) {
        for (const auto& r : steady_state_paper(p)) seeds.push_back(r.bloch);
    }

    std::vector<SteadyStateResult> out;
    auto norm4 = [](const std::array<double, 4>& r) {
        return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
    };
    for (const auto& seed : seeds) {
        const auto sol = detail::gauss_newton(seed, p, 1e-12, max_iter);
        if (!sol) continue;
        const auto res = steady_residuals(*sol, p);
        const double rn = norm4(res);
        const bool exact = rn < residual_tol;
        if (!exact && p.gamma_dep == 0.0)
            continue; // non-converged start; exact roots exist in this regime
        // Deduplicate.
        bool dup = false;
        for (const auto& prev : out) {
            const double d = std::abs(prev.bloch.x - sol->x) + std::abs(prev.bloch.y - sol->y)
                           + std::abs(prev.bloch.z - sol->z);
            if (d < 1e-6) { dup = true; break; }
        }
        if (dup) continue;
        SteadyStateResult r;
        r.mode = SteadyMode::Oracle;
        r.bloch = *sol;
        r.residual = res;
        r.inconsistent = !exact;
        r.r0 = p.gamma_b > 0.0 ? p.gamma_dep / (2.0 * p.gamma_b) : 0.0;
        r.z0 = sol->z + r.r0;
        const double transverse = std::abs(sol->x) + std::abs(sol->y);
        if (transverse < 1e-6)
            r.branch = SteadyBranch::Normal;
        else
            r.branch = sol->x >= 0.0 ? SteadyBranch::BrokenPlus : SteadyBranch::BrokenMinus;
        out.push_back(r);
    }
    return out;
}

// One grid point of a phase-diagram sweep; quadratic moments factorize
// as exact squares in mean field.
struct PhaseSweepPoint {
    double lambda_over_gamma = 0.0;
    double gamma_b_over_gamma = 0.0;
    double gamma_dep_over_gamma = 0.0;
    double h_over_gamma = 0.0;
    BlochVector first_moments;
    std::array<double, 3> quadratic_moments{};
    std::string branch;
    SteadyMode mode = SteadyMode::Paper;
    double residual_norm = 0.0;
    bool gap = false; // no solution at this grid point
};

enum class SweepAxis { GammaB, GammaDep };

struct SweepGrid {
    std::vector<double> lambda_values;
    SweepAxis second_axis = SweepAxis::GammaB;
    std::vector<double> second_values;
    double h = 1.0;
    double fixed_gamma_b = 0.0;   // used when sweeping gamma_dep
    double fixed_gamma_dep = 0.0; // used when sweeping gamma_b
};

inline PhaseSweepPoint evaluate_sweep_point(double lambda, double second, const SweepGrid& g,
                                            SteadyMode mode) {
    SemiclassicalParams p;
    p.h = g.h;
    p.lambda = lambda;
    p.gamma_b = g.second_axis == SweepAxis::GammaB ? second : g.fixed_gamma_b;
    p.gamma_dep = g.second_axis == SweepAxis::GammaDep ? second : g.fixed_gamma_dep;

    PhaseSweepPoint pt;
    pt.lambda_over_gamma = lambda;
    pt.gamma_b_over_gamma = p.gamma_b;
    pt.gamma_dep_over_gamma = p.gamma_dep;
    pt.h_over_gamma = p.h;
    pt.mode = mode;

    std::vector<SteadyStateResult> sols;
    try {
        sols = mode == SteadyMode::Paper ? steady_state_paper(p) : steady_state_oracle(p);
    } catch (const std::exception&) {
        pt.gap = true;
        pt.branch = "gap";
        return pt;
    }
    // Plot the broken-plus branch when present, else the normal branch.
    const SteadyStateResult* chosen = nullptr;
    for (const auto& s : sols)
        if (s.branch == SteadyBranch::BrokenPlus) chosen = &s;
    if (!chosen)
        for (const auto& s : sols)
            if (s.branch == SteadyBranch::Normal) chosen = &s;
    if (!chosen) {
        pt.gap = true;
        pt.branch = "gap";
        return pt;
    }
    pt.first_moments = chosen->bloch;
    pt.quadratic_moments = {chosen->bloch.x * chosen->bloch.x,
                            chosen->bloch.y * chosen->bloch.y,
                            chosen->bloch.z * chosen->bloch.z};
    pt.branch = branch_name(chosen->branch);
    const auto& r = chosen->residual;
    pt.residual_norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
    return pt;
}

// Evaluates the grid row-major (lambda fastest). Per-point failures become
// gap records; the sweep itself never aborts.
std::vector<PhaseSweepPoint> sweep_phase_diagram(const SweepGrid& g, SteadyMode mode,
                                                 unsigned threads = 1);

inline std::vector<PhaseSweepPoint> sweep_phase_diagram_serial(const SweepGrid& g,
                                                               SteadyMode mode) {
    if (g.lambda_values.empty() || g.second_values.empty())
        throw std::invalid_argument("sweep grid must be non-empty");
    std::vector<PhaseSweepPoint> out;
    out.reserve(g.lambda_values.size() * g.second_values.size());
    for (double second : g.second_values)
        for (double lambda : g.lambda_values)
            out.push_back(evaluate_sweep_point(lambda, second, g, mode));
    return out;
}

} // namespace lmg

#include "lmg/detail/sweep_parallel.hpp"
