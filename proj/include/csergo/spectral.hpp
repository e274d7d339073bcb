#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "csergo/markov.hpp"
#include "csergo/mobius_matrix.hpp"
#include "csergo/system.hpp"

namespace csergo {

struct Tolerances {
    double zero = 1e-9;  // zero classification for quantities that vanish exactly
    double root = 1e-12; // bisection width for root isolation
    double rank = 1e-8;  // rank decision in kernel extraction
};

// Spectral data of a system with a valuation: characteristic polynomial
// theta(t) = det M(t), its smallest positive root rho, the kernel generator U
// of M(rho) (scaled so the first entry is 1), and the normalized probabilistic
// valuation on letters. The cocycle is delta(a,b) = U_b / U_a.
struct Spectrum {
    RationalPoly theta;         // exact when the stored weights are rational
    double rho = 0.0;
    Eigen::VectorXd U;
    Valuation prob_valuation;
    bool smaller_modulus_root = false;  // diagnostic; expected false

    double delta(int a, int b) const { return U(b) / U(a); }
};

inline RationalPoly char_poly(const PolyMatrix<Rational>& m) { return determinant(m); }

// Smallest positive root of theta on (0, scan_max], bisected to `tol`.
template <class T>
double characteristic_root(const Polynomial<T>& theta, double scan_max = 2.0,
                           double tol = 1e-12) {
    auto r = smallest_positive_root(theta, scan_max, tol);
    if (!r) throw NoPositiveRoot();
    return *r;
}

// One-dimensional kernel of M evaluated at rho. The numerical rank must be
// n - 1; the generator is sign-flipped to be positive and scaled so the first
// entry equals 1.
inline Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& m_at_rho, double rank_tol = 1e-8) {
    const int n = static_cast<int>(m_at_rho.rows());
    if (n == 1) return Eigen::VectorXd::Ones(1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m_at_rho);
    lu.setThreshold(rank_tol);
    if (lu.rank() != n - 1) throw KernelDimensionNot1(static_cast<int>(lu.rank()));
    Eigen::VectorXd u = lu.kernel().col(0);
    int imax;
    u.cwiseAbs().maxCoeff(&imax);
    if (u(imax) < 0) u = -u;
    double big = u.maxCoeff();
    if (u.minCoeff() <= rank_tol * big) throw NonPositiveKernel();
    return u / u(0);
}

// f~_a(x) = rho^{|x|} delta(a, a.x) f_a(x), given here by its letter table.
inline Valuation normalize_valuation(const ConcurrentSystem& sys, const Spectrum& spec) {
    const int ns = sys.n_states(), nl = sys.n_letters();
    Valuation base = sys.stored_valuation();
    Valuation out(ns * nl, 0.0);
    for (int st = 0; st < ns; ++st)
        for (int a = 0; a < nl; ++a) {
            int to = sys.act_letter(st, a);
            if (to == kBot) continue;
            out[st * nl + a] = spec.rho * spec.delta(st, to) * base[st * nl + a];
        }
    return out;
}

// Normalized-valuation probabilistic check: h_a(eps) must vanish and h_a(c)
// must be non-negative on enabled non-empty cliques.
struct ProbabilisticCheck {
    double max_abs_h_eps = 0.0;
    double min_h_nonempty = 0.0;
    bool pass(double tol = 1e-9) const { return max_abs_h_eps <= tol && min_h_nonempty >= -tol; }
};

inline ProbabilisticCheck check_probabilistic(const ConcurrentSystem& sys, const Valuation& f) {
    SystemMobius h = system_mobius_transform(sys, f);
    ProbabilisticCheck r;
    const auto& cliques = sys.alphabet().cliques();
    bool any_nonempty = false;
    for (int st = 0; st < sys.n_states(); ++st)
        for (int ci = 0; ci < sys.n_cliques(); ++ci) {
            if (cliques[ci].empty()) {
                r.max_abs_h_eps = std::max(r.max_abs_h_eps, std::abs(h.at(st, ci)));
            } else if (sys.act_clique(st, ci) != kBot) {
                double v = h.at(st, ci);
                if (!any_nonempty || v < r.min_h_nonempty) r.min_h_nonempty = v;
                any_nonempty = true;
            }
        }
    return r;
}

// Full exact-path spectrum for the system's stored (rational) weights.
inline Spectrum compute_spectrum(const ConcurrentSystem& sys, const Tolerances& tol = {}) {
    Spectrum spec;
    PolyMatrix<Rational> m = mobius_matrix(sys);
    spec.theta = char_poly(m);
    spec.rho = characteristic_root(spec.theta, 2.0, tol.root);
    spec.smaller_modulus_root = has_smaller_modulus_root(spec.theta, spec.rho);
    spec.U = kernel_vector(m.eval(spec.rho), tol.rank);
    spec.prob_valuation = normalize_valuation(sys, spec);
    return spec;
}

// Numeric-path spectrum for an arbitrary floating valuation (the weights after
// renormalization are no longer rational, so theta is evaluated through the
// numeric determinant instead of exact elimination).
struct NumericSpectrum {
    double rho = 0.0;
    Eigen::VectorXd U;
    double delta(int a, int b) const { return U(b) / U(a); }
};

inline NumericSpectrum compute_spectrum_numeric(const ConcurrentSystem& sys, const Valuation& f,
                                                double scan_max = 2.0, const Tolerances& tol = {}) {
    PolyMatrix<double> m = mobius_matrix_numeric(sys, f);
    auto det_at = [&](double t) { return m.eval(t).determinant(); };
    auto r = smallest_positive_root(det_at, scan_max, tol.root);
    if (!r) throw NoPositiveRoot();
    NumericSpectrum spec;
    spec.rho = *r;
    spec.U = kernel_vector(m.eval(spec.rho), tol.rank);
    return spec;
}

// Characteristic roots of all one-letter restrictions. Every rho^a must exceed
// rho strictly for an irreducible system; +infinity stands for "no root in the
// scan range".
inline std::vector<double> spectral_gaps(const ConcurrentSystem& sys, double rho,
                                         const Tolerances& tol = {}) {
    std::vector<double> out;
    const double scan_max = std::max(2.0, 8.0 * rho);
    for (int a = 0; a < sys.n_letters(); ++a) {
        ConcurrentSystem restricted = sys.restrict_letter(a);
        RationalPoly theta_a = char_poly(mobius_matrix(restricted));
        auto r = smallest_positive_root(theta_a, scan_max, tol.root);
        double rho_a = r ? *r : std::numeric_limits<double>::infinity();
        if (!(rho_a > rho + 1e-9)) throw GapViolation(sys.alphabet().letter_name(a));
        out.push_back(rho_a);
    }
    return out;
}

}  // namespace csergo
