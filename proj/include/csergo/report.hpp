#pragma once

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "csergo/ergodic.hpp"
#include "csergo/kernel.hpp"
#include "csergo/model_io.hpp"
#include "csergo/oracle.hpp"
#include "csergo/spectral.hpp"

namespace csergo {

inline constexpr const char* kVersion = "1.0.0";

// Full analysis pipeline for an irreducible system: spectrum, normalized
// valuation, chain of state-and-cliques, stable structure, ergodic constants.
struct Analysis {
    ConcurrentSystem sys;
    IrreducibilityReport irr;
    PolyMatrix<Rational> mobius;
    Spectrum spec;
    SystemMobius h;  // transform of the normalized valuation
    GFunction g;
    ProbabilisticCheck prob_check;
    DscGraph dsc;
    Eigen::MatrixXd F;
    Condensation cond;
    TransitionKernel kernel;
    SpeedupReport speedup;
    std::vector<double> letter_density;
    std::vector<double> gaps;  // characteristic root per one-letter restriction
    Tolerances tol;
};

inline void require_irreducible(const IrreducibilityReport& irr) {
    if (irr.irreducible()) return;
    std::string why;
    if (!irr.non_trivial) why = "system is trivial";
    else if (!irr.monoid_irreducible) why = "dependence graph is disconnected";
    else if (!irr.transitive) why = "action is not transitive";
    else why = "some letter is not live";
    throw IrreducibilityError(why);
}

inline Analysis analyze(ConcurrentSystem system, const Tolerances& tol = {},
                        bool with_gaps = true) {
    Analysis a;
    a.sys = std::move(system);
    a.tol = tol;
    a.irr = a.sys.irreducibility_report();
    require_irreducible(a.irr);
    a.mobius = mobius_matrix(a.sys);
    a.spec = compute_spectrum(a.sys, tol);
    a.h = system_mobius_transform(a.sys, a.spec.prob_valuation);
    a.prob_check = check_probabilistic(a.sys, a.spec.prob_valuation);
    a.g = g_function(a.sys, a.h);
    a.dsc = build_dsc(a.sys);
    classify_stable(a.dsc, a.h, tol.zero);
    a.F = f_matrix(a.sys, a.dsc, a.spec.rho);
    a.cond = condense(a.dsc, a.F);
    a.kernel = transition_kernel(a.sys, a.dsc, a.spec.prob_valuation, a.h, a.g, tol.zero);
    a.speedup = speedup_analytic(a.sys, a.dsc, a.cond, a.kernel);
    for (int l = 0; l < a.sys.n_letters(); ++l)
        a.letter_density.push_back(
            additive_limit(a.sys, a.dsc, a.cond, a.kernel, TestFunction::letter_count(l)).k_phi);
    if (with_gaps) a.gaps = spectral_gaps(a.sys, a.spec.rho, tol);
    return a;
}

inline std::string vertex_label(const Analysis& a, int v) {
    const auto [st, ci] = a.dsc.vertices[v];
    return a.sys.state_name(st) + "," + a.sys.alphabet().clique_name(a.sys.alphabet().cliques()[ci]);
}

inline Json report_json(const Analysis& a) {
    Json j;
    j["version"] = kVersion;
    j["tolerances"] = {{"zero", a.tol.zero}, {"root", a.tol.root}, {"rank", a.tol.rank}};
    j["irreducibility"] = {{"transitive", a.irr.transitive},
                           {"non_trivial", a.irr.non_trivial},
                           {"monoid_irreducible", a.irr.monoid_irreducible},
                           {"live", a.irr.live},
                           {"irreducible", a.irr.irreducible()}};
    {
        Json theta = Json::array();
        for (const Rational& c : a.spec.theta.coeffs()) theta.push_back(to_string(c));
        j["theta"] = std::move(theta);
    }
    j["rho"] = a.spec.rho;
    j["smaller_modulus_root"] = a.spec.smaller_modulus_root;
    {
        Json u = Json::array();
        for (int i = 0; i < a.spec.U.size(); ++i) u.push_back(a.spec.U(i));
        j["kernel_vector"] = std::move(u);
    }
    {
        Json delta = Json::object();
        for (int x = 0; x < a.sys.n_states(); ++x) {
            Json row = Json::object();
            for (int y = 0; y < a.sys.n_states(); ++y)
                row[a.sys.state_name(y)] = a.spec.delta(x, y);
            delta[a.sys.state_name(x)] = std::move(row);
        }
        j["delta"] = std::move(delta);
    }
    {
        Json val = Json::object();
        const int nl = a.sys.n_letters();
        for (int st = 0; st < a.sys.n_states(); ++st) {
            Json row = Json::object();
            for (int l = 0; l < nl; ++l)
                if (a.sys.defined(st, l))
                    row[a.sys.alphabet().letter_name(l)] = a.spec.prob_valuation[st * nl + l];
            val[a.sys.state_name(st)] = std::move(row);
        }
        j["valuation"] = std::move(val);
    }
    j["probabilistic_check"] = {{"max_abs_h_eps", a.prob_check.max_abs_h_eps},
                                {"min_h_nonempty", a.prob_check.min_h_nonempty},
                                {"pass", a.prob_check.pass(a.tol.zero)}};
    {
        Json stable = Json::array(), unstable = Json::array();
        for (int v = 0; v < a.dsc.size(); ++v)
            (a.dsc.stable[v] ? stable : unstable).push_back(vertex_label(a, v));
        j["dsc"] = {{"vertices", a.dsc.size()},
                    {"stable", std::move(stable)},
                    {"unstable", std::move(unstable)}};
    }
    {
        Json comps = Json::array();
        for (const auto& c : a.cond.components) {
            Json members = Json::array();
            for (int v : c.vertices) members.push_back(vertex_label(a, v));
            comps.push_back({{"vertices", std::move(members)},
                             {"spectral_radius", c.radius},
                             {"basic", c.basic},
                             {"final", c.final}});
        }
        j["components"] = std::move(comps);
        j["umbrella"] = a.cond.umbrella;
        j["f0_spectral_radius"] = a.cond.f0_radius;
    }
    j["speedup"] = a.speedup.speedup;
    {
        Json per = Json::array();
        for (double s : a.speedup.per_component) per.push_back(s);
        j["speedup_per_component"] = std::move(per);
    }
    {
        Json dens = Json::object();
        for (int l = 0; l < a.sys.n_letters(); ++l)
            dens[a.sys.alphabet().letter_name(l)] = a.letter_density[l];
        j["letter_density"] = std::move(dens);
    }
    if (!a.gaps.empty()) {
        Json gaps = Json::object();
        for (int l = 0; l < a.sys.n_letters(); ++l) {
            if (std::isinf(a.gaps[l]))
                gaps[a.sys.alphabet().letter_name(l)] = "inf";
            else
                gaps[a.sys.alphabet().letter_name(l)] = a.gaps[l];
        }
        j["restricted_roots"] = std::move(gaps);
    }
    return j;
}

inline std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string report_text(const Analysis& a) {
    std::string out;
    out += "irreducible: yes\n";
    out += "rho: " + format_double(a.spec.rho) + "\n";
    out += "theta:";
    for (const Rational& c : a.spec.theta.coeffs()) out += " " + to_string(c);
    out += "\nkernel U:";
    for (int i = 0; i < a.spec.U.size(); ++i) out += " " + format_double(a.spec.U(i));
    out += "\nvaluation:\n";
    const int nl = a.sys.n_letters();
    for (int st = 0; st < a.sys.n_states(); ++st) {
        out += "  " + a.sys.state_name(st) + ":";
        for (int l = 0; l < nl; ++l)
            if (a.sys.defined(st, l))
                out += " " + a.sys.alphabet().letter_name(l) + "=" +
                       format_double(a.spec.prob_valuation[st * nl + l]);
        out += "\n";
    }
    out += "dsc vertices: " + std::to_string(a.dsc.size()) + "\n";
    out += "unstable:";
    bool any = false;
    for (int v = 0; v < a.dsc.size(); ++v)
        if (!a.dsc.stable[v]) {
            out += " (" + vertex_label(a, v) + ")";
            any = true;
        }
    if (!any) out += " none";
    out += "\ncomponents:";
    for (const auto& c : a.cond.components)
        if (c.basic) out += " basic[" + std::to_string(c.vertices.size()) + "]";
    out += "\nspeedup: " + format_double(a.speedup.speedup) + "\n";
    out += "letter densities:";
    for (int l = 0; l < nl; ++l)
        out += " " + a.sys.alphabet().letter_name(l) + "=" + format_double(a.letter_density[l]);
    out += "\n";
    return out;
}

// Minimal RFC-4180 quoting; state and clique names may carry commas.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

// CSV trace of a simulation; byte-reproducible given the seed.
inline std::string simulation_csv(const Analysis& a, const Trajectory& t) {
    const auto& cliques = a.sys.alphabet().cliques();
    std::string out = "step,state,clique,len_cum,height_cum,mean_height_ratio";
    for (const auto& l : a.sys.alphabet().letters()) out += "," + csv_field(l);
    out += "\n";
    long long len = 0;
    std::vector<long long> letter_counts(a.sys.n_letters(), 0);
    for (int i = 0; i < t.steps(); ++i) {
        const auto [st, ci] = a.dsc.vertices[t.vertices[i]];
        len += cliques[ci].size();
        for (int l : cliques[ci].members()) ++letter_counts[l];
        out += std::to_string(i + 1) + "," + csv_field(a.sys.state_name(st)) + "," +
               csv_field(a.sys.alphabet().clique_name(cliques[ci])) + "," + std::to_string(len) +
               "," + std::to_string(i + 1) + "," +
               format_double(static_cast<double>(len) / static_cast<double>(i + 1));
        for (long long c : letter_counts) out += "," + std::to_string(c);
        out += "\n";
    }
    return out;
}

}  // namespace csergo
