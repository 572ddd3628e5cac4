// Spin-squeezing parameter from first and second collective-spin moments:
// mean-spin frame, optimal perpendicular quadrature, and dB reporting.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "lmg/dicke.hpp"

namespace lmg {

// First moments <J_a> and the symmetrized second-moment matrix
// <(J_a J_b + J_b J_a)/2>.
struct SpinMoments {
    std::array<double, 3> first{};
    std::array<std::array<double, 3>, 3> second{};
    double n_spins = 0.0;
};

inline SpinMoments spin_moments(const MatrixXc& rho, const CollectiveOperators& ops) {
    SpinMoments m;
    m.n_spins = ops.n_spins;
    const MatrixXc* js[3] = {&ops.jx, &ops.jy, &ops.jz};
    for (int a = 0; a < 3; ++a)
        m.first[a] = ((*js[a]) * rho).trace().real();
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            const double v =
                0.5 * (((*js[a]) * (*js[b]) + (*js[b]) * (*js[a])) * rho).trace().real();
            m.second[a][b] = v;
            m.second[b][a] = v;
        }
    return m;
}

struct SqueezingResult {
    double xi2 = 1.0;
    double xi2_db = 0.0;
    double theta = 0.0, phi = 0.0; // mean-spin direction
    double beta_opt = 0.0;         // optimal quadrature angle in the (n1, n2) plane
};

inline double to_db(double xi2) {
    if (!(xi2 > 0.0))
        throw std::domain_error("dB conversion requires xi2 > 0");
    return 10.0 * std::log10(xi2);
}

// Spherical angles of the normalized mean spin; phi in [0, 2pi), theta in
// [0, pi]. A vanishing mean spin leaves the perpendicular frame undefined.
inline std::array<double, 2> mean_spin_direction(const std::array<double, 3>& first,
                                                 double j, double tol = 1e-9) {
    const double r = std::sqrt(first[0] * first[0] + first[1] * first[1] + first[2] * first[2]);
    if (!(r > tol * j))
        throw std::domain_error("mean spin direction degenerate: |<J>| ~ 0");
    const double theta = std::acos(std::clamp(first[2] / r, -1.0, 1.0));
    double phi = std::atan2(first[1], first[0]);
    if (phi < 0.0) phi += 2.0 * M_PI;
    return {theta, phi};
}

// Orthonormal pair perpendicular to n0 = (sin t cos p, sin t sin p, cos t):
// n1 = (-sin p, cos p, 0), n2 = (cos t cos p, cos t sin p, -sin t).
inline std::array<std::array<double, 3>, 2> perpendicular_frame(double theta, double phi) {
    return {{{-std::sin(phi), std::cos(phi), 0.0},
             {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
              -std::sin(theta)}}};
}

// Optimal squeezing parameter over the perpendicular plane:
//   xi^2 = (2/N) [ <Jn1^2 + Jn2^2> - sqrt((<Jn1^2 - Jn2^2>)^2 + 4 Cov^2) ].
// Cov enters squared under the root; this is the diagonalization of the
// 2x2 perpendicular covariance block and matches a brute-force scan over
// quadrature angles. (A published variant with Cov unsquared is
// dimensionally inhomogeneous and is not used.)
inline SqueezingResult squeezing_parameter(const SpinMoments& m) {
    SqueezingResult r;
    const auto dir = mean_spin_direction(m.first, 0.5 * m.n_spins);
    r.theta = dir[0];
    r.phi = dir[1];
    const auto frame = perpendicular_frame(r.theta, r.phi);

    auto quad = [&](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) s += u[a] * v[b] * m.second[a][b];
        return s;
    };
    const double v11 = quad(frame[0], frame[0]);
    const double v22 = quad(frame[1], frame[1]);
    const double cov = quad(frame[0], frame[1]); // symmetrized by construction

    const double root = std::sqrt((v11 - v22) * (v11 - v22) + 4.0 * cov * cov);
    r.xi2 = (2.0 / m.n_spins) * (v11 + v22 - root);
    r.beta_opt = 0.5 * std::atan2(2.0 * cov, v11 - v22) + 0.5 * M_PI;
    r.xi2_db = to_db(r.xi2);
    return r;
}

} // namespace lmg
