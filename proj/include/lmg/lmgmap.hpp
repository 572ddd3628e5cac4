// Bad-cavity adiabatic elimination of the two supermodes and the resulting
// generalized LMG model parameters.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lmg/device.hpp"

namespace lmg {

// One eliminated cavity channel (a or b), described gauge-free by the
// products l_alpha = sigma*alpha, l_beta = sigma*beta.
struct ChannelParams {
    complexd l_alpha{};
    complexd l_beta{};
    double zeta = 0.0;
    double kappa = 0.0;
    double k_denominator = 0.0; // kappa^2 + zeta^2, cached

    static ChannelParams make(complexd l_alpha, complexd l_beta, double zeta, double kappa) {
        if (!(kappa > 0.0))
            throw std::invalid_argument("channel kappa must be > 0");
        return {l_alpha, l_beta, zeta, kappa, kappa * kappa + zeta * zeta};
    }

    double sigma_sq() const { return std::norm(l_alpha) + std::norm(l_beta); }
};

inline ChannelParams channel_a(const EffectiveRamanParams& e, double kappa_a) {
    return ChannelParams::make(e.l_alpha_a, e.l_beta_a, e.zeta_a, kappa_a);
}
inline ChannelParams channel_b(const EffectiveRamanParams& e, double kappa_b) {
    return ChannelParams::make(e.l_alpha_b, e.l_beta_b, e.zeta_b, kappa_b);
}

// Result of eliminating one channel. Lambda and Gamma use the
// alpha^2+beta^2 = 1 gauge, sigma^2 = |l_alpha|^2 + |l_beta|^2; the jump
// coefficients (l_alpha, l_beta, rate kappa/K) are gauge-free and feed the
// exact-dynamics dissipators directly.
struct EliminatedChannel {
    double lambda_like = 0.0; // sigma^2 zeta / (kappa^2 + zeta^2)
    double gamma_like = 0.0;  // sigma^2 kappa / (kappa^2 + zeta^2)
    complexd jump_l_alpha{};
    complexd jump_l_beta{};
    double jump_rate_prefactor = 0.0; // kappa / K, to be divided by N downstream
};

inline EliminatedChannel eliminate_channel(const ChannelParams& c) {
    EliminatedChannel r;
    const double s2 = c.sigma_sq();
    r.lambda_like = s2 * c.zeta / c.k_denominator;
    r.gamma_like = s2 * c.kappa / c.k_denominator;
    r.jump_l_alpha = c.l_alpha;
    r.jump_l_beta = c.l_beta;
    r.jump_rate_prefactor = c.kappa / c.k_denominator;
    return r;
}

// Parameters of H = -2h Jz - (2 lambda / N)(Jx^2 + chi Jy^2) plus the
// collective dissipation rates.
struct LmgParams {
    double h = 0.0;
    double lambda = 0.0;
    double chi = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gamma_dep = 0.0;
    double n_spins = 0.0;
    bool chi_degenerate = false; // chi was 0/0, resolved to the isotropic value

    double r0() const {
        if (!(gamma_b > 0.0))
            throw std::domain_error("r0 = gamma_dep / (2 Gamma_b) requires Gamma_b > 0");
        return gamma_dep / (2.0 * gamma_b);
    }
};

// Maps two eliminated channels onto (h, lambda, chi). The printed closed
// forms are quadratic in the L products; complex phases cancel for every
// preset, so the real parts are taken.
inline LmgParams lmg_params(const ChannelParams& a, const ChannelParams& b,
                            double mu0, double gamma_dep, double n_spins) {
    if (!(n_spins > 0.0))
        throw std::invalid_argument("n_spins must be > 0");
    LmgParams p;
    p.gamma_dep = gamma_dep;
    p.n_spins = n_spins;
    p.gamma_a = eliminate_channel(a).gamma_like;
    p.gamma_b = eliminate_channel(b).gamma_like;

    auto sq = [](complexd z) { return (z * z).real(); };
    const double wa = a.zeta / a.k_denominator;
    const double wb = b.zeta / b.k_denominator;

    p.h = -0.5 * (mu0 - wa * (sq(a.l_alpha) - sq(a.l_beta)) / n_spins
                      - wb * (sq(b.l_alpha) - sq(b.l_beta)) / n_spins);
    p.lambda = 0.5 * (wa * sq(a.l_alpha + a.l_beta) + wb * sq(b.l_alpha + b.l_beta));

    const double chi_num = wa * sq(a.l_alpha - a.l_beta) + wb * sq(b.l_alpha - b.l_beta);
    const double chi_den = 2.0 * p.lambda;
    const double scale = std::abs(wa) * a.sigma_sq() + std::abs(wb) * b.sigma_sq();
    const double tiny = 1e-14 * std::max(scale, 1e-300);
    if (std::abs(chi_den) < tiny && std::abs(chi_num) < tiny) {
        p.chi = 1.0;
        p.chi_degenerate = true;
    } else {
        p.chi = chi_num / chi_den;
    }
    return p;
}

inline LmgVariant classify_variant(const LmgParams& p, double tol = 1e-6) {
    if (!(tol > 0.0))
        throw std::invalid_argument("tol must be > 0");
    if (std::abs(p.chi + 1.0) <= tol) return LmgVariant::TwoAxis;
    if (std::abs(p.chi - 1.0) <= tol) return LmgVariant::Isotropic;
    if (std::abs(p.chi) <= tol) return LmgVariant::OneAxis;
    return LmgVariant::Generic;
}

// Full device -> LMG pipeline.
struct LmgPipelineResult {
    EffectiveRamanParams raman;
    ChannelParams chan_a, chan_b;
    EliminatedChannel elim_a, elim_b;
    LmgParams lmg;
    std::vector<RegimeWarning> warnings;
};

inline LmgPipelineResult device_to_lmg(const PhysicalDeviceParams& p) {
    LmgPipelineResult r;
    r.raman = effective_raman_params(p);
    r.chan_a = channel_a(r.raman, p.kappa[0]);
    r.chan_b = channel_b(r.raman, p.kappa[1]);
    r.elim_a = eliminate_channel(r.chan_a);
    r.elim_b = eliminate_channel(r.chan_b);
    r.lmg = lmg_params(r.chan_a, r.chan_b, r.raman.mu0, p.gamma_dep, p.n_spins);
    r.warnings = validate_regime(p, r.raman);
    return r;
}

} // namespace lmg
