// Physical hybrid-system parameters and the effective Raman couplings
// produced by the four driven transitions.
//
// Unit convention used throughout this library: every frequency and rate
// is stored as its value divided by 2*pi, in MHz. Time is correspondingly
// measured in units of 1/(2*pi MHz). All table presets transcribe verbatim
// under this convention.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmg {

using complexd = std::complex<double>;

// Raw experimental knobs for the two-cavity / spin-ensemble device.
// Exactly one of {g, g_collective} is the given form; fill the other
// via finalize() before use.
struct PhysicalDeviceParams {
    double n_spins = 0.0;                 // N, may be ~1e12
    std::array<double, 4> g{};            // single-spin couplings g1..g4, >= 0
    std::array<double, 4> g_collective{}; // sqrt(N)*g_k
    std::array<complexd, 4> omega_rabi{}; // Omega_1..Omega_4, magnitude+phase
    std::array<double, 4> delta{};        // signed Delta_a1, Delta_a2, Delta_b1, Delta_b2
    std::array<double, 2> kappa{};        // kappa_a, kappa_b
    double gamma_dep = 0.0;               // collective dephasing rate
    std::optional<double> delta_b;        // Zeeman splitting, regime checks only

    // Derives g from g_collective (from_collective=true) or vice versa.
    void finalize(bool from_collective) {
        if (!(n_spins > 0.0))
            throw std::invalid_argument("n_spins must be > 0");
        const double root_n = std::sqrt(n_spins);
        for (int k = 0; k < 4; ++k) {
            if (from_collective)
                g[k] = g_collective[k] / root_n;
            else
                g_collective[k] = g[k] * root_n;
        }
        validate();
    }

    void validate() const {
        if (!(n_spins > 0.0))
            throw std::invalid_argument("n_spins must be > 0");
        for (int k = 0; k < 4; ++k)
            if (g[k] < 0.0)
                throw std::invalid_argument("g must be >= 0 (phases belong to omega_rabi)");
        static const char* names[4] = {"Delta_a1", "Delta_a2", "Delta_b1", "Delta_b2"};
        for (int k = 0; k < 4; ++k)
            if (delta[k] == 0.0)
                throw std::invalid_argument(std::string("zero detuning ") + names[k]);
        if (!(kappa[0] > 0.0) || !(kappa[1] > 0.0))
            throw std::invalid_argument("kappa must be > 0");
    }
};

// The effective parameter set of the driven four-photon Raman scheme.
// The per-channel interaction is represented only through the gauge-free
// products L_alpha = sigma*alpha and L_beta = sigma*beta; the separate
// factors sigma, alpha, beta are never split out.
struct EffectiveRamanParams {
    double mu0 = 0.0;                 // collective Stark shift
    double zeta_a = 0.0, zeta_b = 0.0; // supermode frequency pulls
    double eta_a_minus = 0.0;          // nonlinear coefficients; reported only,
    double eta_b_minus = 0.0;          // never used downstream
    complexd l_alpha_a{}, l_beta_a{};  // sigma_a*alpha_a, sigma_a*beta_a
    complexd l_alpha_b{}, l_beta_b{};  // sigma_b*alpha_b, sigma_b*beta_b
};

struct NormalModes {
    double nu_a = 0.0, nu_b = 0.0;
    std::array<double, 4> g{};
};

// Symmetric/antisymmetric supermode transformation of the two coupled
// cavities: nu_{a,b} = (w_c1+w_c2)/2 +- epsilon, g1=g3=eta1/sqrt(2),
// g2=g4=eta2/sqrt(2).
inline NormalModes normal_mode_transform(double omega_c1, double omega_c2,
                                         double epsilon, double eta1, double eta2) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be > 0");
    NormalModes nm;
    const double mid = 0.5 * (omega_c1 + omega_c2);
    nm.nu_a = mid + epsilon;
    nm.nu_b = mid - epsilon;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    nm.g = {eta1 * inv_sqrt2, eta2 * inv_sqrt2, eta1 * inv_sqrt2, eta2 * inv_sqrt2};
    return nm;
}

// Second-order effective parameters of the four Raman channels.
inline EffectiveRamanParams effective_raman_params(const PhysicalDeviceParams& p) {
    p.validate();
    EffectiveRamanParams e;
    const double da1 = p.delta[0], da2 = p.delta[1];
    const double db1 = p.delta[2], db2 = p.delta[3];
    const auto& g = p.g;
    const auto& gc = p.g_collective;
    const auto& om = p.omega_rabi;

    e.mu0 = g[0] * g[0] / da1 - g[1] * g[1] / da2 + g[2] * g[2] / db1 - g[3] * g[3] / db2
          + 0.25 * (std::norm(om[0]) / da2 + std::norm(om[1]) / da1
                  - std::norm(om[2]) / db2 - std::norm(om[3]) / db1);

    e.l_alpha_a = gc[0] * std::conj(om[1]) / (2.0 * da1);
    e.l_beta_a  = -gc[1] * std::conj(om[0]) / (2.0 * da2);
    e.l_alpha_b = gc[2] * std::conj(om[3]) / (2.0 * db1);
    e.l_beta_b  = -gc[3] * std::conj(om[2]) / (2.0 * db2);

    // N g_k^2 = (sqrt(N) g_k)^2, so the pulls stay finite at N ~ 1e12.
    e.zeta_a = 0.5 * (gc[0] * gc[0] / da1 - gc[1] * gc[1] / da2);
    e.zeta_b = 0.5 * (gc[2] * gc[2] / db1 - gc[3] * gc[3] / db2);
    e.eta_a_minus = 2.0 * e.zeta_a / p.n_spins;
    e.eta_b_minus = 2.0 * e.zeta_b / p.n_spins;
    return e;
}

// One violated validity condition of the dispersive / bad-cavity regime.
struct RegimeWarning {
    std::string condition; // symbolic inequality
    double lhs = 0.0;
    double rhs = 0.0;
    // Violation severity required/achieved = (R*rhs)/lhs; infinite for a
    // degenerate (zero) left-hand side.
    double ratio = 0.0;
};

// Checks the large-detuning and bad-cavity inequalities with safety
// factor `ratio_min` (default 10). Warnings only, never fatal.
inline std::vector<RegimeWarning> validate_regime(const PhysicalDeviceParams& p,
                                                  const EffectiveRamanParams& e,
                                                  double ratio_min = 10.0) {
    std::vector<RegimeWarning> out;
    double weak = 0.0; // max over g_k, |Omega_k|
    for (int k = 0; k < 4; ++k) {
        weak = std::max(weak, p.g[k]);
        weak = std::max(weak, std::abs(p.omega_rabi[k]));
    }
    auto check = [&](const std::string& cond, double lhs, double rhs) {
        if (lhs < ratio_min * rhs) {
            const double ratio = lhs > 0.0 ? ratio_min * rhs / lhs
                                           : std::numeric_limits<double>::infinity();
            out.push_back({cond, lhs, rhs, ratio});
        }
    };
    const double db = p.delta_b.value_or(0.0);
    check("delta_B >> max(g, |Omega|)", db, weak);
    check("|Delta_a1 + Delta_b1| >> max(g, |Omega|)", std::abs(p.delta[0] + p.delta[2]), weak);
    check("|Delta_a1 - Delta_b1| >> max(g, |Omega|)", std::abs(p.delta[0] - p.delta[2]), weak);
    check("|Delta_a2 + Delta_b2| >> max(g, |Omega|)", std::abs(p.delta[1] + p.delta[3]), weak);
    check("|Delta_a2 - Delta_b2| >> max(g, |Omega|)", std::abs(p.delta[1] - p.delta[3]), weak);

    // sigma_i = sqrt(|L_alpha|^2 + |L_beta|^2) as a conservative proxy.
    const double sigma_a = std::sqrt(std::norm(e.l_alpha_a) + std::norm(e.l_beta_a));
    const double sigma_b = std::sqrt(std::norm(e.l_alpha_b) + std::norm(e.l_beta_b));
    const double bad_a = std::sqrt(p.kappa[0] * p.kappa[0] + e.zeta_a * e.zeta_a);
    const double bad_b = std::sqrt(p.kappa[1] * p.kappa[1] + e.zeta_b * e.zeta_b);
    check("sqrt(kappa_a^2 + zeta_a^2) >> max(sigma_a, |mu0|)", bad_a,
          std::max(sigma_a, std::abs(e.mu0)));
    check("sqrt(kappa_b^2 + zeta_b^2) >> max(sigma_b, |mu0|)", bad_b,
          std::max(sigma_b, std::abs(e.mu0)));
    return out;
}

enum class LmgVariant { TwoAxis, Isotropic, OneAxis, Generic };

inline LmgVariant parse_variant(const std::string& name) {
    if (name == "two-axis") return LmgVariant::TwoAxis;
    if (name == "isotropic") return LmgVariant::Isotropic;
    if (name == "one-axis") return LmgVariant::OneAxis;
    throw std::invalid_argument("unknown variant '" + name + "' (expected two-axis|isotropic|one-axis)");
}

inline const char* variant_name(LmgVariant v) {
    switch (v) {
        case LmgVariant::TwoAxis: return "two-axis";
        case LmgVariant::Isotropic: return "isotropic";
        case LmgVariant::OneAxis: return "one-axis";
        default: return "generic";
    }
}

// Preset parameter columns for the three model variants, anchored at
// N ~ 1e12 where the collective coupling is sqrt(N) g_k = 12. Single-spin
// g is held fixed, so sqrt(N) g scales as sqrt(n_spins / 1e12) * 12.
//
// The columns list magnitudes only. Signs are fixed as follows:
//  - detunings: two-axis and one-axis all positive; isotropic has the
//    b-channel detunings negated, which is the unique choice giving
//    zeta_b = +zeta_a (and hence Lambda_a = Lambda_b for that variant);
//  - Rabi phases: pi is assigned to Omega_1 (two-axis), and to Omega_1 and
//    Omega_3 (one-axis), so that the computed signed L products reproduce
//    the tabulated sigma*alpha / sigma*beta values in every column.
inline PhysicalDeviceParams table1_preset(LmgVariant variant, double n_spins,
                                          double kappa, double gamma_dep = 0.0,
                                          std::optional<double> delta_b = std::nullopt) {
    if (!(n_spins > 0.0))
        throw std::invalid_argument("n_spins must be > 0");
    PhysicalDeviceParams p;
    p.n_spins = n_spins;
    p.kappa = {kappa, kappa};
    p.gamma_dep = gamma_dep;
    p.delta_b = delta_b;

    const double gc = 12.0 * std::sqrt(n_spins / 1e12);
    p.g_collective = {gc, gc, gc, gc};

    auto pol = [](double mag, bool flip) {
        return flip ? complexd(-mag, 0.0) : complexd(mag, 0.0);
    };
    switch (variant) {
        case LmgVariant::TwoAxis:
            p.omega_rabi = {pol(4.0, true), pol(1.0, false), pol(1.0, false), pol(4.0, false)};
            p.delta = {20.0, 80.0, 80.0, 20.0};
            break;
        case LmgVariant::Isotropic:
            p.omega_rabi = {pol(0.0, false), pol(1.0, false), pol(1.0, false), pol(0.0, false)};
            p.delta = {20.0, 80.0, -80.0, -20.0};
            break;
        case LmgVariant::OneAxis:
            p.omega_rabi = {pol(7.0, true), pol(3.0, false), pol(0.77, true), pol(0.0, false)};
            p.delta = {30.0, 70.0, 50.0, 50.0};
            break;
        default:
            throw std::invalid_argument("no preset for generic variant");
    }
    p.finalize(/*from_collective=*/true);
    return p;
}

} // namespace lmg
