// Weak-excitation bosonic reduction of the two-axis model: the closed
// (n, m) second-moment system, a truncated-Fock oracle, and the bosonic
// squeezing parameter.
//
// Master equation (factor-2 dissipators, D[O]rho = 2 O rho O+ - ...):
//   drho/dt = -i[H_T, rho] + Gamma_a D[d] + Gamma_b D[d+] + (gamma_dep/2) D[d+d],
//   H_T = -2h d+d - lambda d^2 - lambda d+^2.
// The dephasing channel enters at half the nominal rate for consistency
// with the finite-N Dicke dissipators and the mean-field damping
// -gamma_dep X / 2 (see build_dissipators in dicke.hpp).
//
// The moment equations below are exact operator identities (quadratic
// Hamiltonian, linear jumps, number dephasing); no Gaussian assumption is
// made. They were re-derived from the adjoint equation and are pinned
// against the Fock solver in the tests.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lmg/squeezing.hpp"

namespace lmg {

struct SecondMoments {
    double n = 0.0;                    // <d+d>
    std::complex<double> m{};          // <d^2>
    std::complex<double> first{};      // <d>; identically 0 for vacuum starts

    // |m|^2 <= n(n+1) for any physical state.
    double physicality_margin() const { return n * (n + 1.0) - std::norm(m); }
};

struct HpParams {
    double h = 0.0;
    double lambda = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gamma_dep = 0.0;
};

struct MomentDerivatives {
    double dn = 0.0;
    std::complex<double> dm{};
    std::complex<double> dfirst{};
};

inline MomentDerivatives moment_rhs(const SecondMoments& s, const HpParams& p) {
    const std::complex<double> i_unit(0.0, 1.0);
    MomentDerivatives d;
    d.dn = 4.0 * p.lambda * s.m.imag() - 2.0 * p.gamma_a * s.n + 2.0 * p.gamma_b * (s.n + 1.0);
    d.dm = 4.0 * i_unit * p.h * s.m + i_unit * p.lambda * (4.0 * s.n + 2.0)
         + (-2.0 * p.gamma_a + 2.0 * p.gamma_b - 2.0 * p.gamma_dep) * s.m;
    d.dfirst = i_unit * (2.0 * p.h * s.first + 2.0 * p.lambda * std::conj(s.first))
             - (p.gamma_a - p.gamma_b + 0.5 * p.gamma_dep) * s.first;
    return d;
}

struct MomentSample {
    double t = 0.0;
    SecondMoments s;
};

struct MomentTrajectory {
    std::vector<MomentSample> samples;
    bool aborted = false;
    double abort_time = 0.0;
};

// RK4 on the closed moment system; the physicality invariant
// |m|^2 <= n(n+1) is monitored each step and a violation beyond 1e-6
// aborts (signals the step is too large).
inline MomentTrajectory evolve_moments(const SecondMoments& s0, const HpParams& p,
                                       double t_end, double dt,
                                       std::size_t record_stride = 1) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("t_end and dt must be > 0");
    if (s0.n < 0.0 || s0.physicality_margin() < -1e-9)
        throw std::invalid_argument("initial moments unphysical");
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    const double step = t_end / static_cast<double>(n_steps);

    auto advance = [&](const SecondMoments& s, const MomentDerivatives& k, double f) {
        SecondMoments r = s;
        r.n += f * k.dn;
        r.m += f * k.dm;
        r.first += f * k.dfirst;
        return r;
    };

    MomentTrajectory traj;
    traj.samples.push_back({0.0, s0});
    SecondMoments s = s0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const auto k1 = moment_rhs(s, p);
        const auto k2 = moment_rhs(advance(s, k1, 0.5 * step), p);
        const auto k3 = moment_rhs(advance(s, k2, 0.5 * step), p);
        const auto k4 = moment_rhs(advance(s, k3, step), p);
        s.n += (step / 6.0) * (k1.dn + 2.0 * k2.dn + 2.0 * k3.dn + k4.dn);
        s.m += (step / 6.0) * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm);
        s.first += (step / 6.0) * (k1.dfirst + 2.0 * k2.dfirst + 2.0 * k3.dfirst + k4.dfirst);
        const double t = static_cast<double>(i) * step;
        // Tolerance scales with the moment magnitude; n grows ~ sinh^2 here.
        if (s.physicality_margin() < -1e-6 * std::max(1.0, s.n * (s.n + 1.0))) {
            traj.aborted = true;
            traj.abort_time = t;
            break;
        }
        if (i % record_stride == 0 || i == n_steps)
            traj.samples.push_back({t, s});
    }
    return traj;
}

struct FockSample {
    double t = 0.0;
    SecondMoments s;
    double top_occupation = 0.0;
};

struct FockTrajectory {
    std::vector<FockSample> samples;
    bool aborted = false;
    double abort_time = 0.0;
};

inline MatrixXc fock_annihilator(int n_max) {
    MatrixXc d = MatrixXc::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n)
        d(n - 1, n) = std::sqrt(static_cast<double>(n));
    return d;
}

inline MatrixXc fock_vacuum(int n_max) {
    MatrixXc rho = MatrixXc::Zero(n_max + 1, n_max + 1);
    rho(0, 0) = 1.0;
    return rho;
}

// Dense Lindblad RK4 in the truncated Fock space; serves as the
// independent oracle for the moment solver. Truncation health demands
// the top-level occupation stay below `top_tol`.
inline FockTrajectory evolve_fock(const MatrixXc& rho0, const HpParams& p, double t_end,
                                  double dt, std::size_t record_stride = 1,
                                  double top_tol = 1e-6) {
    const int dim = static_cast<int>(rho0.rows());
    const int n_max = dim - 1;
    if (n_max < 1)
        throw std::invalid_argument("n_max must be >= 1");
    const MatrixXc d = fock_annihilator(n_max);
    const MatrixXc dd = d.adjoint();
    const MatrixXc num = dd * d;
    const MatrixXc h = -2.0 * p.h * num - p.lambda * (d * d) - p.lambda * (dd * dd);

    std::vector<LindbladChannel> channels;
    if (p.gamma_a > 0.0) channels.push_back({d, p.gamma_a});
    if (p.gamma_b > 0.0) channels.push_back({dd, p.gamma_b});
    if (p.gamma_dep > 0.0) channels.push_back({num, 0.5 * p.gamma_dep});

    // Banded operators: the sparse superoperator makes each RK4 stage
    // O(dim^2) instead of O(dim^3).
    const auto liouville = detail::build_liouvillian(h, channels);
    auto rhs = [&](const MatrixXc& r) {
        MatrixXc out(r.rows(), r.cols());
        Eigen::Map<Eigen::VectorXcd>(out.data(), out.size()) =
            liouville * Eigen::Map<const Eigen::VectorXcd>(r.data(), r.size());
        return out;
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    const double step = t_end / static_cast<double>(n_steps);

    FockTrajectory traj;
    MatrixXc rho = rho0;
    auto record = [&](double t) {
        FockSample s;
        s.t = t;
        s.s.n = (num * rho).trace().real();
        s.s.m = (d * d * rho).trace();
        s.s.first = (d * rho).trace();
        s.top_occupation = rho(n_max, n_max).real();
        traj.samples.push_back(s);
        return s;
    };
    if (record(0.0).top_occupation >= top_tol) {
        traj.aborted = true;
        return traj;
    }
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const MatrixXc k1 = rhs(rho);
        const MatrixXc k2 = rhs(rho + 0.5 * step * k1);
        const MatrixXc k3 = rhs(rho + 0.5 * step * k2);
        const MatrixXc k4 = rhs(rho + step * k3);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval());
        rho /= rho.trace().real();
        const double t = static_cast<double>(i) * step;
        if (i % record_stride == 0 || i == n_steps) {
            if (record(t).top_occupation >= top_tol) {
                traj.aborted = true;
                traj.abort_time = t;
                break;
            }
        }
    }
    return traj;
}

// Bosonic squeezing parameter for <d> = 0:  xi^2 = 1 + 2n - 2|m|.
// Warns (flag, not fatal) when the weak-excitation bound n/N is exceeded.
struct HpSqueezing {
    SqueezingResult result;
    bool weak_excitation_ok = true;
};

inline HpSqueezing hp_squeezing(const SecondMoments& s, double n_spins) {
    if (std::abs(s.first) > 1e-9)
        throw std::domain_error("hp_squeezing assumes <d> = 0");
    HpSqueezing out;
    out.result.xi2 = 1.0 + 2.0 * s.n - 2.0 * std::abs(s.m);
    out.result.xi2_db = to_db(out.result.xi2);
    out.result.beta_opt = 0.5 * std::arg(s.m) + 0.5 * M_PI;
    out.weak_excitation_ok = !(n_spins > 0.0) || (s.n / n_spins <= 0.01);
    return out;
}

} // namespace lmg
