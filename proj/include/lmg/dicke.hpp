// Exact finite-N quantum mechanics in the symmetric Dicke sector:
// collective operators, LMG Hamiltonians, Lindblad dissipators, and a
// dense fixed-step master-equation integrator.
//
// Dissipator convention throughout: D[O]rho = 2 O rho O+ - O+O rho - rho O+O,
// a factor 2 relative to the common normalization. All rates in this
// library are quoted in this convention.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lmg/lmgmap.hpp"

namespace lmg {

using MatrixXc = Eigen::MatrixXcd;

// Collective spin matrices in the maximal-j sector |j, m>, j = N/2,
// basis ordered m = j, j-1, ..., -j. The full 2^N space is never needed:
// every operator in scope preserves this (N+1)-dimensional sector.
struct CollectiveOperators {
    int n_spins = 0;
    int dimension = 0;
    MatrixXc jx, jy, jz, jp, jm;

    double j() const { return 0.5 * n_spins; }
};

inline CollectiveOperators build_operators(int n_spins, int dimension_cap = 400) {
    if (n_spins < 1)
        throw std::invalid_argument("n_spins must be >= 1");
    if (n_spins + 1 > dimension_cap)
        throw std::invalid_argument("Dicke dimension exceeds cap");
    CollectiveOperators ops;
    ops.n_spins = n_spins;
    const int dim = n_spins + 1;
    ops.dimension = dim;
    const double j = 0.5 * n_spins;

    ops.jz = MatrixXc::Zero(dim, dim);
    ops.jp = MatrixXc::Zero(dim, dim);
    ops.jm = MatrixXc::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = j - k; // row k holds |j, m>
        ops.jz(k, k) = m;
        // <j, m+1| J+ |j, m> = sqrt(j(j+1) - m(m+1))
        if (k > 0)
            ops.jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        if (k < dim - 1)
            ops.jm(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m - 1.0));
    }
    ops.jx = 0.5 * (ops.jp + ops.jm);
    ops.jy = std::complex<double>(0.0, -0.5) * (ops.jp - ops.jm);
    return ops;
}

// H = -2h Jz - (2 lambda / N)(Jx^2 + chi Jy^2)
inline MatrixXc build_lmg_hamiltonian(const CollectiveOperators& ops, const LmgParams& p) {
    if (static_cast<int>(std::llround(p.n_spins)) != ops.n_spins)
        throw std::invalid_argument("operator N does not match parameter N");
    const double coeff = 2.0 * p.lambda / p.n_spins;
    return -2.0 * p.h * ops.jz
         - coeff * (ops.jx * ops.jx + p.chi * ops.jy * ops.jy);
}

// H = mu0 Jz - sum_i (zeta_i / (N K_i)) A_i A_i+ with
// A_i = L_alpha^i J+ + L_beta^i J-  (gauge-free channel form).
inline MatrixXc build_generic_hamiltonian(const CollectiveOperators& ops,
                                          const ChannelParams& a, const ChannelParams& b,
                                          double mu0) {
    const double n = ops.n_spins;
    MatrixXc h = mu0 * ops.jz;
    for (const ChannelParams* c : {&a, &b}) {
        const MatrixXc op = c->l_alpha * ops.jp + c->l_beta * ops.jm;
        h -= (c->zeta / (n * c->k_denominator)) * (op * op.adjoint());
    }
    return h;
}

struct LindbladChannel {
    MatrixXc jump;
    double rate = 0.0;
};

// Channel i contributes jump A_i+ = conj(L_alpha) J- + conj(L_beta) J+
// with rate kappa_i / (N K_i); dephasing contributes Jz with rate gamma_dep/2.
inline std::vector<LindbladChannel> build_dissipators(const CollectiveOperators& ops,
                                                      const std::vector<ChannelParams>& channels,
                                                      double gamma_dep) {
    std::vector<LindbladChannel> out;
    const double n = ops.n_spins;
    for (const auto& c : channels) {
        const double rate = c.kappa / (n * c.k_denominator);
        if (rate * c.sigma_sq() == 0.0)
            continue;
        out.push_back({std::conj(c.l_alpha) * ops.jm + std::conj(c.l_beta) * ops.jp, rate});
    }
    // The dephasing channel enters at half the nominal rate: the source
    // model's own mean-field equations damp X, Y at gamma_dep/2 and its
    // squeezing curves require m-damping 2*gamma_dep, both of which
    // correspond to (gamma_dep/2) D[Jz] in the factor-2 convention used
    // here. The printed "gamma_dep D[Jz]" is inconsistent with those
    // results and is not reproduced literally.
    if (gamma_dep > 0.0)
        out.push_back({ops.jz, 0.5 * gamma_dep});
    return out;
}

// Reduced per-variant dissipators in dimensionless mode, with Gamma_i in
// the same alpha^2 + beta^2 = 1 gauge the elimination step reports
// (Gamma = sigma^2 kappa / K, sigma^2 = |L_alpha|^2 + |L_beta|^2):
//   two-axis / isotropic:  (Ga/N) D[J-] + (Gb/N) D[J+]
//   one-axis:              (Ga/2N) D[2Jx] + (Gb/N) D[J+]
// plus (gamma_dep/2) D[Jz] in every case. The one-axis half undoes the
// alpha_a = beta_a = 1 bookkeeping of the printed D[2Jx] form; both match
// the exact channel superoperator.
inline std::vector<LindbladChannel> variant_dissipators(const CollectiveOperators& ops,
                                                        LmgVariant variant, double gamma_a,
                                                        double gamma_b, double gamma_dep) {
    std::vector<LindbladChannel> out;
    const double n = ops.n_spins;
    if (gamma_a > 0.0) {
        if (variant == LmgVariant::OneAxis)
            out.push_back({2.0 * ops.jx, 0.5 * gamma_a / n});
        else
            out.push_back({ops.jm, gamma_a / n});
    }
    if (gamma_b > 0.0)
        out.push_back({ops.jp, gamma_b / n});
    if (gamma_dep > 0.0)
        out.push_back({ops.jz, 0.5 * gamma_dep}); // same halving as build_dissipators
    return out;
}

inline MatrixXc lindblad_rhs(const MatrixXc& rho, const MatrixXc& h,
                             const std::vector<LindbladChannel>& channels) {
    const std::complex<double> minus_i(0.0, -1.0);
    MatrixXc d = minus_i * (h * rho - rho * h);
    for (const auto& ch : channels) {
        if (ch.rate < 0.0)
            throw std::invalid_argument("Lindblad rate must be >= 0");
        const MatrixXc odag = ch.jump.adjoint();
        const MatrixXc odo = odag * ch.jump;
        d += ch.rate * (2.0 * ch.jump * rho * odag - odo * rho - rho * odo);
    }
    return d;
}

// Coherent spin state with mean direction (sin t cos p, sin t sin p, cos t),
// i.e. <Jx>/j = sin(theta)cos(phi) etc. The rotation axis is
// (-sin(phi), cos(phi), 0), perpendicular to the target azimuth.
inline MatrixXc coherent_spin_state(const CollectiveOperators& ops, double theta, double phi) {
    const MatrixXc gen = theta * (std::cos(phi) * ops.jy - std::sin(phi) * ops.jx);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(gen);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().array().cast<std::complex<double>>() * std::complex<double>(0.0, -1.0))
            .exp();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ops.dimension);
    psi(0) = 1.0; // |j, j>
    psi = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
    return psi * psi.adjoint();
}

struct ExpectationSample {
    double t = 0.0;
    double jx = 0.0, jy = 0.0, jz = 0.0;
    double jx2 = 0.0, jy2 = 0.0, jz2 = 0.0;
    double cov_12 = 0.0; // <JxJy + JyJx>/2
    double trace_err = 0.0;
    double min_eig = 0.0;
};

struct MasterTrajectory {
    std::vector<ExpectationSample> samples;
    MatrixXc final_rho;
    bool aborted = false;
    std::string abort_reason;
};

struct EvolveOptions {
    double dt = 1e-3;
    // Fixed-step cap dt <= step_safety / ||H||_inf-estimate. The default
    // 0.01 is far inside the RK4 stability region; large-N runs may raise
    // it (stability holds up to |lambda| dt ~ 2.8).
    double step_safety = 0.01;
    std::size_t record_stride = 1;
    double positivity_floor = -1e-6;
    bool check_positivity = true;
};

namespace detail {

// Sparse Liouvillian acting on the column-stacked density matrix:
//   vec(A X B) = (B^T kron A) vec(X).
// Every operator in scope is banded, so one matvec costs O(dim^2) and the
// fixed-step loop avoids dense matrix products entirely.
inline Eigen::SparseMatrix<std::complex<double>>
build_liouvillian(const MatrixXc& h, const std::vector<LindbladChannel>& channels) {
    using SpMat = Eigen::SparseMatrix<std::complex<double>>;
    const auto dim = h.rows();
    SpMat eye(dim, dim);
    eye.setIdentity();
    const std::complex<double> minus_i(0.0, -1.0);
    const SpMat hs = h.sparseView();
    const SpMat ht = SpMat(h.transpose().sparseView());
    SpMat l = minus_i * (Eigen::kroneckerProduct(eye, hs).eval()
                         - Eigen::kroneckerProduct(ht, eye).eval());
    for (const auto& ch : channels) {
        const SpMat j = ch.jump.sparseView();
        const SpMat jc = SpMat(ch.jump.conjugate().sparseView());
        const MatrixXc odo_dense = ch.jump.adjoint() * ch.jump;
        const SpMat odo = odo_dense.sparseView();
        const SpMat odot = SpMat(odo_dense.transpose().sparseView());
        l += ch.rate
           * SpMat(2.0 * Eigen::kroneckerProduct(jc, j).eval()
                   - Eigen::kroneckerProduct(eye, odo).eval()
                   - Eigen::kroneckerProduct(odot, eye).eval());
    }
    return l;
}

} // namespace detail

// Fixed-step RK4 with per-step trace renormalization (drift <= 1e-10 per
// step by construction at these step sizes). No adaptive control, so CSV
// outputs are bit-reproducible across runs.
inline MasterTrajectory evolve_master(const MatrixXc& rho0, const MatrixXc& h,
                                      const std::vector<LindbladChannel>& channels,
                                      const CollectiveOperators& ops, double t_end,
                                      const EvolveOptions& opt = {}) {
    if (rho0.rows() != h.rows() || rho0.cols() != h.cols())
        throw std::invalid_argument("dimension mismatch");
    const double h_norm = h.cwiseAbs().rowwise().sum().maxCoeff();
    double dt = opt.dt;
    if (h_norm > 0.0)
        dt = std::min(dt, opt.step_safety / h_norm);
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    dt = t_end / static_cast<double>(n_steps);

    for (const auto& ch : channels)
        if (ch.rate < 0.0)
            throw std::invalid_argument("Lindblad rate must be >= 0");
    const auto liouville = detail::build_liouvillian(h, channels);
    auto rhs = [&](const MatrixXc& r) {
        MatrixXc d(r.rows(), r.cols());
        Eigen::Map<Eigen::VectorXcd>(d.data(), d.size()) =
            liouville * Eigen::Map<const Eigen::VectorXcd>(r.data(), r.size());
        return d;
    };

    MasterTrajectory traj;
    MatrixXc rho = rho0;

    auto record = [&](double t) {
        ExpectationSample s;
        s.t = t;
        auto ev = [&](const MatrixXc& op) { return (op * rho).trace().real(); };
        s.jx = ev(ops.jx);
        s.jy = ev(ops.jy);
        s.jz = ev(ops.jz);
        s.jx2 = ev(ops.jx * ops.jx);
        s.jy2 = ev(ops.jy * ops.jy);
        s.jz2 = ev(ops.jz * ops.jz);
        s.cov_12 = 0.5 * ev(ops.jx * ops.jy + ops.jy * ops.jx);
        s.trace_err = std::abs(rho.trace().real() - 1.0);
        if (opt.check_positivity) {
            Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
            s.min_eig = es.eigenvalues().minCoeff();
        }
        traj.samples.push_back(s);
        return s;
    };

    auto first = record(0.0);
    if (opt.check_positivity && first.min_eig < opt.positivity_floor) {
        traj.aborted = true;
        traj.abort_reason = "initial state not positive";
        traj.final_rho = rho;
        return traj;
    }

    for (std::size_t i = 1; i <= n_steps; ++i) {
        const MatrixXc k1 = rhs(rho);
        const MatrixXc k2 = rhs(rho + 0.5 * dt * k1);
        const MatrixXc k3 = rhs(rho + 0.5 * dt * k2);
        const MatrixXc k4 = rhs(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval()); // re-hermitize roundoff
        rho /= rho.trace().real();

        if (i % opt.record_stride == 0 || i == n_steps) {
            const auto s = record(static_cast<double>(i) * dt);
            if (opt.check_positivity && s.min_eig < opt.positivity_floor) {
                traj.aborted = true;
                traj.abort_reason = "positivity violated at t = " + std::to_string(s.t)
                                  + " (min eig " + std::to_string(s.min_eig) + ")";
                break;
            }
        }
    }
    traj.final_rho = rho;
    return traj;
}

} // namespace lmg
