// CSV and JSON emission. Data files are deterministic (no clocks inside);
// provenance sidecars carry the wall time. Writes are atomic: temp file
// in the target directory, then rename.
#pragma once

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmg/hpboson.hpp"
#include "lmg/semiclassical.hpp"

namespace lmg {

using json = nlohmann::json;

// Full double precision scientific notation, '.' decimal point.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

inline json to_json(const EffectiveRamanParams& e) {
    return json{{"mu0", e.mu0},
                {"zeta_a", e.zeta_a},
                {"zeta_b", e.zeta_b},
                {"eta_a_minus", e.eta_a_minus},
                {"eta_b_minus", e.eta_b_minus},
                {"l_alpha_a_re", e.l_alpha_a.real()},
                {"l_alpha_a_im", e.l_alpha_a.imag()},
                {"l_beta_a_re", e.l_beta_a.real()},
                {"l_beta_a_im", e.l_beta_a.imag()},
                {"l_alpha_b_re", e.l_alpha_b.real()},
                {"l_alpha_b_im", e.l_alpha_b.imag()},
                {"l_beta_b_re", e.l_beta_b.real()},
                {"l_beta_b_im", e.l_beta_b.imag()}};
}

inline json to_json(const LmgParams& p) {
    json j{{"h", p.h},
           {"lambda", p.lambda},
           {"chi", p.chi},
           {"gamma_a", p.gamma_a},
           {"gamma_b", p.gamma_b},
           {"gamma_dep", p.gamma_dep},
           {"n_spins", p.n_spins},
           {"chi_degenerate", p.chi_degenerate}};
    if (p.gamma_b > 0.0)
        j["r0"] = p.r0();
    return j;
}

inline json to_json(const RegimeWarning& w) {
    return json{{"condition", w.condition}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"ratio", w.ratio}};
}

inline std::string phase_sweep_csv(const std::vector<PhaseSweepPoint>& points) {
    std::ostringstream out;
    out << "lambda_over_gamma,gamma_b_over_gamma,gamma_dep_over_gamma,"
           "X,Y,Z,X2,Y2,Z2,branch,mode,residual_norm\n";
    for (const auto& p : points) {
        out << format_number(p.lambda_over_gamma) << ',' << format_number(p.gamma_b_over_gamma)
            << ',' << format_number(p.gamma_dep_over_gamma) << ','
            << format_number(p.first_moments.x) << ',' << format_number(p.first_moments.y) << ','
            << format_number(p.first_moments.z) << ',' << format_number(p.quadratic_moments[0])
            << ',' << format_number(p.quadratic_moments[1]) << ','
            << format_number(p.quadratic_moments[2]) << ',' << p.branch << ','
            << (p.mode == SteadyMode::Paper ? "paper" : "oracle") << ','
            << format_number(p.residual_norm) << '\n';
    }
    return out.str();
}

inline std::string expectation_csv(const std::vector<ExpectationSample>& samples) {
    std::ostringstream out;
    out << "t,jx,jy,jz,jx2,jy2,jz2,cov_12,trace_err,min_eig\n";
    for (const auto& s : samples) {
        out << format_number(s.t) << ',' << format_number(s.jx) << ',' << format_number(s.jy)
            << ',' << format_number(s.jz) << ',' << format_number(s.jx2) << ','
            << format_number(s.jy2) << ',' << format_number(s.jz2) << ','
            << format_number(s.cov_12) << ',' << format_number(s.trace_err) << ','
            << format_number(s.min_eig) << '\n';
    }
    return out.str();
}

// Squeezing time series from either solver, one row per sample.
struct SqueezeRow {
    double t = 0.0;
    SecondMoments s;
    double xi2 = 1.0;
    double xi2_db = 0.0;
    std::string solver;
};

inline std::string squeeze_csv(const std::vector<SqueezeRow>& rows) {
    std::ostringstream out;
    out << "t,n,re_m,im_m,xi2,xi2_db,solver\n";
    for (const auto& r : rows) {
        out << format_number(r.t) << ',' << format_number(r.s.n) << ','
            << format_number(r.s.m.real()) << ',' << format_number(r.s.m.imag()) << ','
            << format_number(r.xi2) << ',' << format_number(r.xi2_db) << ',' << r.solver << '\n';
    }
    return out.str();
}

} // namespace lmg
