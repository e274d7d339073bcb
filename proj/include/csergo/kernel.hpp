#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

#include "csergo/dsc.hpp"
#include "csergo/markov.hpp"

namespace csergo {

// Transition matrix and initial law of the Markov chain of state-and-cliques,
// indexed by DSC vertices. Rows whose normalizer g vanishes are kept but
// marked unreachable: they carry zero initial mass and zero incoming mass.
struct TransitionKernel {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;     // (target vertex, probability)
    std::vector<char> reachable;                               // g_{a.c}(c) > tol
    std::vector<std::vector<std::pair<int, double>>> initial;  // per start state: (vertex, h_a(c))
    double form_discrepancy = 0.0;  // max gap between the two closed forms of P

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (auto [j, v] : rows[i]) p(i, j) = v;
        return p;
    }

    // Row-stochastic restriction to a vertex subset (e.g. one final component).
    Eigen::MatrixXd dense_restricted(const std::vector<int>& vertices) const {
        const int k = static_cast<int>(vertices.size());
        std::vector<int> pos(n, -1);
        for (int i = 0; i < k; ++i) pos[vertices[i]] = i;
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i)
            for (auto [j, v] : rows[vertices[i]])
                if (pos[j] >= 0) p(i, pos[j]) = v;
        return p;
    }
};

// P_{(a,c),(b,d)} = 1{b=a.c} 1{c->d} h_b(d) / g_b(c); the equivalent product
// form f_a(c) h_b(d) / h_a(c) is evaluated as a cross-check wherever defined.
inline TransitionKernel transition_kernel(const ConcurrentSystem& sys, const DscGraph& dsc,
                                          const Valuation& f, const SystemMobius& h,
                                          const GFunction& g, double tol = 1e-9) {
    TransitionKernel k;
    k.n = dsc.size();
    k.rows.resize(k.n);
    k.reachable.assign(k.n, 0);
    for (int i = 0; i < k.n; ++i) {
        const auto [st, ci] = dsc.vertices[i];
        k.reachable[i] = g.at(sys.act_clique(st, ci), ci) > tol;
    }
    for (int i = 0; i < k.n; ++i) {
        if (!k.reachable[i]) continue;  // paired with h_a(c) = 0
        const auto [st, ci] = dsc.vertices[i];
        const double gi = g.at(sys.act_clique(st, ci), ci);
        const double h_row = h.at(st, ci);
        const double f_c = clique_valuation(sys, f, st, ci);
        for (int j : dsc.succ[i]) {
            // mass into an unreachable row is rounding dust: h vanishes there
            // exactly by the h = f g identity
            if (!k.reachable[j]) continue;
            const auto [st2, dj] = dsc.vertices[j];
            const double p = h.at(st2, dj) / gi;
            if (h_row > tol) {
                const double p_alt = f_c * h.at(st2, dj) / h_row;
                k.form_discrepancy = std::max(k.form_discrepancy, std::abs(p - p_alt));
            }
            if (p > 0.0) k.rows[i].emplace_back(j, p);
        }
    }
    k.initial.resize(sys.n_states());
    for (int st = 0; st < sys.n_states(); ++st)
        for (int ci = 0; ci < sys.n_cliques(); ++ci) {
            if (sys.alphabet().cliques()[ci].empty()) continue;
            int v = dsc.find(st, ci);
            if (v < 0 || !k.reachable[v]) continue;
            double mass = h.at(st, ci);
            if (mass > 0.0) k.initial[st].emplace_back(v, mass);
        }
    return k;
}

}  // namespace csergo
