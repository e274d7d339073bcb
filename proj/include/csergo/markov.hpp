#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "csergo/mobius.hpp"
#include "csergo/system.hpp"

namespace csergo {

// Multiplicative extension of a letter valuation to one clique, along the
// ascending-letter linearization; zero when the action is undefined.
inline double clique_valuation(const ConcurrentSystem& sys, const Valuation& f, int state,
                               int ci) {
    if (sys.act_clique(state, ci) == kBot) return 0.0;
    double w = 1.0;
    int cur = state;
    const int nl = sys.n_letters();
    for (int a : sys.alphabet().cliques()[ci].members()) {
        w *= f[cur * nl + a];
        cur = sys.act_letter(cur, a);
    }
    return w;
}

inline double trace_valuation(const ConcurrentSystem& sys, const Valuation& f, int state,
                              const Trace& x) {
    double w = 1.0;
    for (Clique c : x.cliques()) {
        int ci = sys.alphabet().clique_index(c);
        int to = sys.act_clique(state, ci);
        if (to == kBot) return 0.0;
        w *= clique_valuation(sys, f, state, ci);
        state = to;
    }
    return w;
}

// Per-state Mobius transform of a valuation restricted to cliques:
// h_a(c) = sum over cliques c' >= c of (-1)^{|c'|-|c|} f_a(c').
struct SystemMobius {
    int n_states = 0;
    int n_cliques = 0;
    std::vector<double> h;  // [state * n_cliques + clique]

    double at(int state, int ci) const { return h[state * n_cliques + ci]; }
};

inline SystemMobius system_mobius_transform(const ConcurrentSystem& sys, const Valuation& f) {
    SystemMobius out;
    out.n_states = sys.n_states();
    out.n_cliques = sys.n_cliques();
    out.h.assign(out.n_states * out.n_cliques, 0.0);
    for (int st = 0; st < out.n_states; ++st) {
        std::vector<double> fv(out.n_cliques);
        for (int ci = 0; ci < out.n_cliques; ++ci) fv[ci] = clique_valuation(sys, f, st, ci);
        std::vector<double> hv = mobius_transform(sys.alphabet(), fv);
        for (int ci = 0; ci < out.n_cliques; ++ci) out.h[st * out.n_cliques + ci] = hv[ci];
    }
    return out;
}

// g_b(c) = sum of h_b(d) over non-empty cliques d with c -> d. This is the row
// normalizer of the chain of state-and-cliques.
struct GFunction {
    int n_states = 0;
    int n_cliques = 0;
    std::vector<double> g;

    double at(int state, int ci) const { return g[state * n_cliques + ci]; }
};

inline GFunction g_function(const ConcurrentSystem& sys, const SystemMobius& h) {
    GFunction out;
    out.n_states = sys.n_states();
    out.n_cliques = sys.n_cliques();
    out.g.assign(out.n_states * out.n_cliques, 0.0);
    const auto& cliques = sys.alphabet().cliques();
    for (int st = 0; st < out.n_states; ++st)
        for (int ci = 0; ci < out.n_cliques; ++ci) {
            double acc = 0.0;
            for (int dj = 0; dj < out.n_cliques; ++dj) {
                if (cliques[dj].empty()) continue;
                if (!sys.alphabet().normal_pair(cliques[ci], cliques[dj])) continue;
                acc += h.at(st, dj);
            }
            out.g[st * out.n_cliques + ci] = acc;
        }
    return out;
}

// -- stationary distributions -------------------------------------------------

namespace detail {
inline void require_stochastic(const Eigen::MatrixXd& p, double tol) {
    for (int i = 0; i < p.rows(); ++i) {
        if (std::abs(p.row(i).sum() - 1.0) > tol) throw NotStochastic();
        for (int j = 0; j < p.cols(); ++j)
            if (p(i, j) < -tol) throw NotStochastic();
    }
}

inline void require_strongly_connected(const Eigen::MatrixXd& p) {
    const int n = static_cast<int>(p.rows());
    auto reach = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w) {
                double e = forward ? p(v, w) : p(w, v);
                if (e > 0 && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        return seen;
    };
    auto fwd = reach(true), bwd = reach(false);
    for (int i = 0; i < n; ++i)
        if (!fwd[i] || !bwd[i]) throw NotStronglyConnected();
}
}  // namespace detail

// Linear-system route: solve pi (P - I) = 0 with a normalization row.
inline Eigen::VectorXd stationary_linear(const Eigen::MatrixXd& p, double tol = 1e-9) {
    detail::require_stochastic(p, tol);
    detail::require_strongly_connected(p);
    const int n = static_cast<int>(p.rows());
    Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    return pi;
}

// Power-iteration route, damped so that periodic chains still converge:
// pi <- (pi + pi P) / 2 shares its fixed points with pi <- pi P.
inline Eigen::VectorXd stationary_power(const Eigen::MatrixXd& p, double tol = 1e-12,
                                        int max_iter = 200000) {
    detail::require_stochastic(p, 1e-9);
    detail::require_strongly_connected(p);
    const int n = static_cast<int>(p.rows());
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = 0.5 * (pi + p.transpose() * pi);
        next /= next.sum();
        double delta = (next - pi).cwiseAbs().maxCoeff();
        pi = next;
        if (delta < tol / 4) break;
    }
    return pi;
}

// Unique invariant distribution of a strongly connected stochastic block;
// linear solve first, power iteration as the fallback on ill-conditioning.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p, double tol = 1e-12) {
    Eigen::VectorXd pi = stationary_linear(p);
    double residual = (p.transpose() * pi - pi).cwiseAbs().maxCoeff();
    if (!(residual <= tol) || !(std::abs(pi.sum() - 1.0) <= 1e-9) || pi.minCoeff() <= 0)
        pi = stationary_power(p, tol);
    return pi;
}

}  // namespace csergo
