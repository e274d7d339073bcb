#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csergo/markov.hpp"
#include "csergo/system.hpp"

namespace csergo {

// Directed graph of state-and-cliques: vertices (a, c) with c a non-empty
// clique and a.c defined; edge (a,c) -> (b,d) iff b = a.c and c -> d.
struct DscGraph {
    struct Vertex {
        int state;
        int clique;  // clique ordinal in the alphabet's canonical order
    };

    std::vector<Vertex> vertices;          // sorted by (state, clique ordinal)
    std::vector<std::vector<int>> succ;    // adjacency, ascending target ids
    std::vector<std::vector<int>> pred;
    std::vector<char> stable;              // empty until classify_stable ran
    int n_cliques = 0;

    int find(int state, int ci) const {
        int lo = 0, hi = static_cast<int>(vertices.size());
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            const Vertex& v = vertices[mid];
            if (v.state < state || (v.state == state && v.clique < ci))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < static_cast<int>(vertices.size()) && vertices[lo].state == state &&
            vertices[lo].clique == ci)
            return lo;
        return -1;
    }

    int size() const { return static_cast<int>(vertices.size()); }
};

inline DscGraph build_dsc(const ConcurrentSystem& sys) {
    DscGraph g;
    g.n_cliques = sys.n_cliques();
    const auto& cliques = sys.alphabet().cliques();
    for (int st = 0; st < sys.n_states(); ++st)
        for (int ci = 0; ci < sys.n_cliques(); ++ci) {
            if (cliques[ci].empty()) continue;
            if (sys.act_clique(st, ci) != kBot) g.vertices.push_back({st, ci});
        }
    g.succ.resize(g.vertices.size());
    g.pred.resize(g.vertices.size());
    for (int i = 0; i < g.size(); ++i) {
        const auto [st, ci] = g.vertices[i];
        int to = sys.act_clique(st, ci);
        for (int j = 0; j < g.size(); ++j) {
            const auto [st2, dj] = g.vertices[j];
            if (st2 != to) continue;
            if (!sys.alphabet().normal_pair(cliques[ci], cliques[dj])) continue;
            g.succ[i].push_back(j);
            g.pred[j].push_back(i);
        }
    }
    return g;
}

// Stability from the probabilistic Mobius transform: (a,c) is stable iff
// h_a(c) > tol. Structural sanity: the stable set is closed under
// predecessors and every stable vertex keeps a stable successor.
inline void classify_stable(DscGraph& g, const SystemMobius& h, double tol = 1e-9) {
    g.stable.assign(g.vertices.size(), 0);
    for (int i = 0; i < g.size(); ++i)
        g.stable[i] = h.at(g.vertices[i].state, g.vertices[i].clique) > tol;
    for (int i = 0; i < g.size(); ++i) {
        if (!g.stable[i]) continue;
        for (int p : g.pred[i])
            if (!g.stable[p])
                throw StructuralInconsistency("stable set not predecessor-closed");
        bool has_stable_succ = false;
        for (int s : g.succ[i])
            if (g.stable[s]) has_stable_succ = true;
        if (!has_stable_succ)
            throw StructuralInconsistency("stable vertex without stable successor");
    }
}

// F_{(a,c),(b,d)} = 1{b=a.c} 1{c->d} r^{|c|} w_a(c), with w the system's own
// valuation and r its characteristic root.
inline Eigen::MatrixXd f_matrix(const ConcurrentSystem& sys, const DscGraph& g, double r) {
    const auto& cliques = sys.alphabet().cliques();
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(g.size(), g.size());
    for (int i = 0; i < g.size(); ++i) {
        const auto [st, ci] = g.vertices[i];
        double w = to_double(sys.clique_weight(st, ci)) * std::pow(r, cliques[ci].size());
        for (int j : g.succ[i]) f(i, j) = w;
    }
    return f;
}

// Spectral radius of a non-negative matrix by power iteration on F + I (the
// shift makes periodic supports converge); radius(F) = radius(F + I) - 1.
inline double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-12, int cap = 10000) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 0.0;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    double lambda = 0.0;
    for (int it = 0; it < cap; ++it) {
        Eigen::VectorXd w = m * v + v;
        double norm = w.maxCoeff();
        if (norm <= 0) return 0.0;  // nilpotent and the iterate died out
        w /= norm;
        double rq = (w.dot(m * w + w)) / w.dot(w);
        if (std::abs(rq - lambda) < tol && it > 1) {
            lambda = rq;
            break;
        }
        lambda = rq;
        v = w;
    }
    return lambda - 1.0;
}

struct Component {
    std::vector<int> vertices;  // DSC vertex ids, ascending
    double radius = 0.0;        // spectral radius of the F restriction
    bool basic = false;
    bool final = false;
};

struct Condensation {
    std::vector<Component> components;  // components of the stable subgraph
    std::vector<int> comp_of;           // per DSC vertex, -1 when unstable
    double max_radius = 0.0;            // expected 1 at r = rho
    double f0_radius = 0.0;             // spectral radius of the unstable block
    bool umbrella = false;              // basic components == final components
};

// Tarjan condensation of the stable subgraph plus the umbrella verdict.
inline Condensation condense(const DscGraph& g, const Eigen::MatrixXd& f, double radius_tol = 1e-6) {
    Condensation out;
    out.comp_of.assign(g.size(), -1);

    // iterative Tarjan over stable vertices only
    std::vector<int> index(g.size(), -1), low(g.size(), 0), stack;
    std::vector<char> on_stack(g.size(), 0);
    int next_index = 0;
    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < g.size(); ++root) {
        if (!g.stable[root] || index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& fr = frames.back();
            if (fr.child < g.succ[fr.v].size()) {
                int w = g.succ[fr.v][fr.child++];
                if (!g.stable[w]) continue;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], index[w]);
                }
            } else {
                int v = fr.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    Component comp;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.vertices.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp.vertices.begin(), comp.vertices.end());
                    out.components.push_back(std::move(comp));
                }
            }
        }
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const Component& a, const Component& b) { return a.vertices < b.vertices; });
    for (int ci = 0; ci < static_cast<int>(out.components.size()); ++ci)
        for (int v : out.components[ci].vertices) out.comp_of[v] = ci;

    for (auto& comp : out.components) {
        const int k = static_cast<int>(comp.vertices.size());
        Eigen::MatrixXd sub(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub(i, j) = f(comp.vertices[i], comp.vertices[j]);
        comp.radius = spectral_radius(sub);
        comp.final = true;
        for (int v : comp.vertices)
            for (int w : g.succ[v])
                if (g.stable[w] && out.comp_of[w] != out.comp_of[v]) comp.final = false;
        out.max_radius = std::max(out.max_radius, comp.radius);
    }
    for (auto& comp : out.components) comp.basic = comp.radius >= out.max_radius - radius_tol;

    std::vector<int> unstable;
    for (int v = 0; v < g.size(); ++v)
        if (!g.stable[v]) unstable.push_back(v);
    Eigen::MatrixXd f0(unstable.size(), unstable.size());
    for (std::size_t i = 0; i < unstable.size(); ++i)
        for (std::size_t j = 0; j < unstable.size(); ++j) f0(i, j) = f(unstable[i], unstable[j]);
    out.f0_radius = spectral_radius(f0);

    out.umbrella = true;
    for (const auto& comp : out.components)
        if (comp.basic != comp.final) out.umbrella = false;
    if (!out.umbrella) throw UmbrellaViolation("basic components differ from final components");
    if (out.f0_radius >= 1.0 - radius_tol)
        throw UmbrellaViolation("unstable block has spectral radius too close to 1");
    return out;
}

// -- protections ---------------------------------------------------------------

enum class ProtectionStatus { Found, NoneExists, Inconclusive };

struct ProtectionResult {
    ProtectionStatus status = ProtectionStatus::Inconclusive;
    std::optional<Trace> certificate;
};

// Bounded breadth-first search for a protection of (state, c): a trace x with
// first clique c such that no enabled one-letter extension x.b changes the
// first clique. Passing the one-letter test certifies the protection, because
// a letter reaching the front of a longer extension already reaches it past x
// alone. The search is sound but bounded: an emptied frontier proves there is
// no protection, hitting the depth budget is inconclusive.
inline ProtectionResult protection_search(const ConcurrentSystem& sys, int state, Clique c,
                                          int depth_budget) {
    if (depth_budget > 12) throw BudgetExceeded("protection_search depth budget > 12");
    const Alphabet& alph = sys.alphabet();
    if (sys.act_clique(state, alph.clique_index(c)) == kBot || c.empty())
        return {ProtectionStatus::NoneExists, std::nullopt};

    std::set<Trace> frontier{Trace::from_clique(c)};
    std::set<Trace> seen = frontier;
    int depth = c.size();
    while (!frontier.empty()) {
        std::set<Trace> next;
        for (const Trace& x : frontier) {
            int at = sys.act(state, x);
            bool protects = true;
            for (int b = 0; b < alph.size(); ++b) {
                if (sys.act_letter(at, b) == kBot) continue;
                Trace xb = x;
                xb.push_letter(alph, b);
                // a grown first clique can never shrink back, prune
                if (!(xb.first_clique() == c)) {
                    protects = false;
                    continue;
                }
                if (!seen.count(xb)) {
                    seen.insert(xb);
                    next.insert(std::move(xb));
                }
            }
            if (protects) return {ProtectionStatus::Found, x};
        }
        if (next.empty()) return {ProtectionStatus::NoneExists, std::nullopt};
        if (depth + 1 > depth_budget) return {ProtectionStatus::Inconclusive, std::nullopt};
        frontier = std::move(next);
        ++depth;
    }
    return {ProtectionStatus::NoneExists, std::nullopt};
}

// -- invariant-vector check -----------------------------------------------------

struct InvariantVectorReport {
    double residual = 0.0;        // max |F u - u|
    double max_u_unstable = 0.0;  // should vanish
    double min_u_stable = 0.0;    // should be positive
    bool pass(double tol = 1e-9) const {
        return residual <= tol && max_u_unstable <= tol && min_u_stable > tol;
    }
};

// u_{(a,c)} = delta(a0, a) h_a(c) is an invariant vector of F, zero exactly on
// the unstable vertices and positive on the stable ones.
inline InvariantVectorReport f_invariant_vector_check(const DscGraph& g, const Eigen::MatrixXd& f,
                                                      const Eigen::VectorXd& kernel_u,
                                                      const SystemMobius& h, int base_state = 0) {
    Eigen::VectorXd u(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const auto [st, ci] = g.vertices[i];
        u(i) = kernel_u(st) / kernel_u(base_state) * h.at(st, ci);
    }
    InvariantVectorReport r;
    r.residual = (f * u - u).cwiseAbs().maxCoeff();
    bool any_stable = false;
    for (int i = 0; i < g.size(); ++i) {
        if (g.stable.empty() || !g.stable[i])
            r.max_u_unstable = std::max(r.max_u_unstable, std::abs(u(i)));
        else {
            if (!any_stable || u(i) < r.min_u_stable) r.min_u_stable = u(i);
            any_stable = true;
        }
    }
    return r;
}

// -- DOT export -----------------------------------------------------------------

// Deterministic DOT rendering: stable vertices solid, unstable dashed, basic
// components boxed as clusters.
inline std::string to_dot(const ConcurrentSystem& sys, const DscGraph& g,
                          const Condensation* cond = nullptr) {
    const auto& cliques = sys.alphabet().cliques();
    auto name = [&](int v) {
        const auto [st, ci] = g.vertices[v];
        std::string raw = sys.state_name(st) + "," + sys.alphabet().clique_name(cliques[ci]);
        std::string out;
        for (char ch : raw) {
            if (ch == '"' || ch == '\\') out += '\\';
            out += ch;
        }
        return out;
    };
    std::ostringstream os;
    os << "digraph dsc {\n";
    os << "  node [shape=box];\n";
    std::vector<char> clustered(g.size(), 0);
    if (cond) {
        for (std::size_t c = 0; c < cond->components.size(); ++c) {
            if (!cond->components[c].basic) continue;
            os << "  subgraph cluster_" << c << " {\n";
            for (int v : cond->components[c].vertices) {
                os << "    \"" << name(v) << "\";\n";
                clustered[v] = 1;
            }
            os << "  }\n";
        }
    }
    for (int v = 0; v < g.size(); ++v) {
        os << "  \"" << name(v) << "\"";
        if (!g.stable.empty() && !g.stable[v]) os << " [style=dashed]";
        os << ";\n";
    }
    for (int v = 0; v < g.size(); ++v)
        for (int w : g.succ[v]) os << "  \"" << name(v) << "\" -> \"" << name(w) << "\";\n";
    os << "}\n";
    return os.str();
}

}  // namespace csergo
