#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csergo/dsc.hpp"
#include "csergo/kernel.hpp"
#include "csergo/mobius_matrix.hpp"
#include "csergo/rng.hpp"
#include "csergo/spectral.hpp"

namespace csergo {

// Test functions along trajectories: additive families given by per-(state,
// letter) values, plus the built-in length, per-letter count and height.
// Height is sub-additive only, so it gets empirical limits; the analytic
// formula below applies to the additive kinds.
class TestFunction {
public:
    enum class Kind { Additive, Height, Length, LetterCount };

    static TestFunction length() { return TestFunction(Kind::Length); }
    static TestFunction height() { return TestFunction(Kind::Height); }
    static TestFunction letter_count(int letter) {
        TestFunction f(Kind::LetterCount);
        f.letter_ = letter;
        return f;
    }

    // Validates the commuting-square compatibility
    // phi_a(x) + phi_{a.x}(y) = phi_a(y) + phi_{a.y}(x) on independent squares.
    static TestFunction additive(const ConcurrentSystem& sys, std::vector<double> values,
                                 double tol = 1e-9) {
        TestFunction f(Kind::Additive);
        f.values_ = std::move(values);
        const int nl = sys.n_letters();
        for (int st = 0; st < sys.n_states(); ++st)
            for (int a = 0; a < nl; ++a)
                for (int b = a + 1; b < nl; ++b) {
                    if (!sys.alphabet().independent(a, b)) continue;
                    int sa = sys.act_letter(st, a), sb = sys.act_letter(st, b);
                    if (sa == kBot || sb == kBot || sys.act_letter(sa, b) == kBot) continue;
                    double lhs = f.values_[st * nl + a] + f.values_[sa * nl + b];
                    double rhs = f.values_[st * nl + b] + f.values_[sb * nl + a];
                    if (std::abs(lhs - rhs) > tol)
                        throw IncompatibleAdditive("state " + sys.state_name(st) + ", letters (" +
                                                   sys.alphabet().letter_name(a) + "," +
                                                   sys.alphabet().letter_name(b) + ")");
                }
        return f;
    }

    Kind kind() const { return kind_; }
    bool additive_kind() const { return kind_ != Kind::Height; }

    double on_letter(const ConcurrentSystem& sys, int state, int a) const {
        switch (kind_) {
            case Kind::Length: return 1.0;
            case Kind::LetterCount: return a == letter_ ? 1.0 : 0.0;
            case Kind::Additive: return values_[state * sys.n_letters() + a];
            case Kind::Height: break;
        }
        throw Error("height is not letter-additive");
    }

    double on_clique(const ConcurrentSystem& sys, int state, int ci) const {
        double acc = 0.0;
        for (int a : sys.alphabet().cliques()[ci].members()) {
            acc += on_letter(sys, state, a);
            state = sys.act_letter(state, a);
        }
        return acc;
    }

private:
    explicit TestFunction(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<double> values_;
    int letter_ = -1;
};

// -- analytic ergodic constants -------------------------------------------------

struct SpeedupReport {
    std::vector<int> final_components;      // indices into the condensation
    std::vector<Eigen::VectorXd> pis;       // stationary law per final component
    std::vector<double> per_component;      // s_J
    double speedup = 0.0;
    double max_discrepancy = 0.0;           // across final components
};

// s = sum over (a,d) in J of |d| pi_J(a,d), identical for every final
// component J of the stable subgraph.
inline SpeedupReport speedup_analytic(const ConcurrentSystem& sys, const DscGraph& dsc,
                                      const Condensation& cond, const TransitionKernel& kernel) {
    SpeedupReport r;
    const auto& cliques = sys.alphabet().cliques();
    for (int c = 0; c < static_cast<int>(cond.components.size()); ++c) {
        if (!cond.components[c].final) continue;
        const auto& verts = cond.components[c].vertices;
        Eigen::VectorXd pi = stationary_distribution(kernel.dense_restricted(verts));
        double s = 0.0;
        for (int i = 0; i < static_cast<int>(verts.size()); ++i)
            s += pi(i) * cliques[dsc.vertices[verts[i]].clique].size();
        r.final_components.push_back(c);
        r.pis.push_back(std::move(pi));
        r.per_component.push_back(s);
    }
    r.speedup = r.per_component.empty() ? 0.0 : r.per_component.front();
    for (double s1 : r.per_component)
        for (double s2 : r.per_component)
            r.max_discrepancy = std::max(r.max_discrepancy, std::abs(s1 - s2));
    return r;
}

struct AdditiveLimit {
    double k_phi = 0.0;
    double max_discrepancy = 0.0;
};

// k_phi = (sum pi |c|)^{-1} sum pi phi_a(c) over any final component; the
// value must not depend on the chosen component.
inline AdditiveLimit additive_limit(const ConcurrentSystem& sys, const DscGraph& dsc,
                                    const Condensation& cond, const TransitionKernel& kernel,
                                    const TestFunction& phi) {
    if (!phi.additive_kind()) throw IncompatibleAdditive("analytic limit needs an additive kind");
    const auto& cliques = sys.alphabet().cliques();
    AdditiveLimit out;
    std::vector<double> vals;
    for (int c = 0; c < static_cast<int>(cond.components.size()); ++c) {
        if (!cond.components[c].final) continue;
        const auto& verts = cond.components[c].vertices;
        Eigen::VectorXd pi = stationary_distribution(kernel.dense_restricted(verts));
        double num = 0.0, den = 0.0;
        for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
            const auto [st, ci] = dsc.vertices[verts[i]];
            num += pi(i) * phi.on_clique(sys, st, ci);
            den += pi(i) * cliques[ci].size();
        }
        vals.push_back(num / den);
    }
    out.k_phi = vals.empty() ? 0.0 : vals.front();
    for (double a : vals)
        for (double b : vals) out.max_discrepancy = std::max(out.max_discrepancy, std::abs(a - b));
    return out;
}

// -- simulation -------------------------------------------------------------------

struct Trajectory {
    int start_state = 0;
    std::uint64_t seed = 0;
    std::vector<int> vertices;  // DSC vertex per step

    int steps() const { return static_cast<int>(vertices.size()); }
};

// First clique from the initial law h_a, then transitions from P; fully
// deterministic given the seed. Batches of independent trajectories share a
// base seed and differ by index, so they can be drawn in parallel and merged
// by index.
inline Trajectory sample_trajectory(const ConcurrentSystem& sys, const DscGraph& dsc,
                                    const TransitionKernel& kernel, int start, int steps,
                                    std::uint64_t seed, std::uint64_t trajectory_index = 0) {
    Trajectory t;
    t.start_state = start;
    t.seed = seed;
    if (steps <= 0) return t;
    t.vertices.reserve(steps);
    SplitMix64 rng = SplitMix64::derive(seed, trajectory_index);
    if (kernel.initial[start].empty()) throw DeadRow("initial law at " + sys.state_name(start));
    int v = sample_categorical(rng, kernel.initial[start]);
    t.vertices.push_back(v);
    for (int i = 1; i < steps; ++i) {
        if (!kernel.reachable[v]) {
            const auto [st, ci] = dsc.vertices[v];
            throw DeadRow(sys.state_name(st) + "," +
                          sys.alphabet().clique_name(sys.alphabet().cliques()[ci]));
        }
        v = sample_categorical(rng, kernel.rows[v]);
        t.vertices.push_back(v);
    }
    return t;
}

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int batches = 0;

    bool within_sigmas(double target, double k) const {
        return std::abs(value - target) <= k * stderr_;
    }
};

namespace detail {
// Batch-means over per-step (numerator, denominator) increments: the estimate
// is the overall ratio, the error bar the spread of per-batch ratios.
inline McEstimate batch_ratio(const std::vector<double>& num, const std::vector<double>& den,
                              int batches = 20) {
    McEstimate e;
    const int n = static_cast<int>(num.size());
    if (n < batches) batches = std::max(1, n);
    e.batches = batches;
    double tot_num = 0.0, tot_den = 0.0;
    std::vector<double> ratios;
    int start = 0;
    for (int b = 0; b < batches; ++b) {
        int end = static_cast<int>(static_cast<long long>(n) * (b + 1) / batches);
        double bn = 0.0, bd = 0.0;
        for (int i = start; i < end; ++i) {
            bn += num[i];
            bd += den[i];
        }
        tot_num += bn;
        tot_den += bd;
        if (bd > 0) ratios.push_back(bn / bd);
        start = end;
    }
    e.value = tot_den > 0 ? tot_num / tot_den : 0.0;
    if (ratios.size() > 1) {
        double mean = 0.0;
        for (double r : ratios) mean += r;
        mean /= ratios.size();
        double var = 0.0;
        for (double r : ratios) var += (r - mean) * (r - mean);
        var /= (ratios.size() - 1);
        e.stderr_ = std::sqrt(var / ratios.size());
    }
    return e;
}
}  // namespace detail

// Running means phi(Y_n) / |Y_n| over the trajectory prefixes.
inline std::vector<double> ergodic_means(const ConcurrentSystem& sys, const DscGraph& dsc,
                                         const Trajectory& t, const TestFunction& phi) {
    std::vector<double> out;
    out.reserve(t.steps());
    double phi_acc = 0.0;
    double len_acc = 0.0;
    for (int i = 0; i < t.steps(); ++i) {
        const auto [st, ci] = dsc.vertices[t.vertices[i]];
        len_acc += sys.alphabet().cliques()[ci].size();
        phi_acc += phi.kind() == TestFunction::Kind::Height ? 1.0 : phi.on_clique(sys, st, ci);
        out.push_back(phi_acc / len_acc);
    }
    return out;
}

inline McEstimate ergodic_mean_estimate(const ConcurrentSystem& sys, const DscGraph& dsc,
                                        const Trajectory& t, const TestFunction& phi) {
    std::vector<double> num(t.steps()), den(t.steps());
    for (int i = 0; i < t.steps(); ++i) {
        const auto [st, ci] = dsc.vertices[t.vertices[i]];
        den[i] = sys.alphabet().cliques()[ci].size();
        num[i] = phi.kind() == TestFunction::Kind::Height ? 1.0 : phi.on_clique(sys, st, ci);
    }
    return detail::batch_ratio(num, den);
}

// Monte Carlo speedup |Y_n| / height(Y_n): the reciprocal ratio of the height
// test function, reported directly since the speedup is the headline number.
inline McEstimate mc_speedup(const ConcurrentSystem& sys, const DscGraph& dsc,
                             const Trajectory& t) {
    std::vector<double> num(t.steps()), den(t.steps(), 1.0);
    for (int i = 0; i < t.steps(); ++i)
        num[i] = sys.alphabet().cliques()[dsc.vertices[t.vertices[i]].clique].size();
    return detail::batch_ratio(num, den);
}

// -- hitting chain -----------------------------------------------------------------

struct HittingChain {
    std::vector<int> states;  // X_n = state after the n-th hitting prefix
    int hits = 0;
    bool single_closed_class = false;
};

// Decomposes the trajectory at the successive prefixes that first contain the
// letter, at clique granularity, and checks empirically that the visited
// states form a single closed class.
inline HittingChain hitting_chain(const ConcurrentSystem& sys, const DscGraph& dsc,
                                  const Trajectory& t, int letter) {
    HittingChain out;
    out.states.push_back(t.start_state);
    for (int i = 0; i < t.steps(); ++i) {
        const auto [st, ci] = dsc.vertices[t.vertices[i]];
        if (!sys.alphabet().cliques()[ci].contains(letter)) continue;
        out.states.push_back(sys.act_clique(st, ci));
        ++out.hits;
    }
    if (out.hits == 0) throw LetterNeverHit(sys.alphabet().letter_name(letter));

    // Closed classes of the observed transition digraph. Every visited state
    // except a state seen only as the very last X has an outgoing edge, so a
    // no-out-edge singleton holding just the last state is a truncation
    // artifact, not a closed class.
    const int ns = sys.n_states();
    std::vector<std::vector<char>> edge(ns, std::vector<char>(ns, 0));
    std::vector<char> visited(ns, 0);
    for (std::size_t i = 0; i + 1 < out.states.size(); ++i)
        edge[out.states[i]][out.states[i + 1]] = 1;
    for (int v : out.states) visited[v] = 1;

    // Kosaraju on <= |X| vertices
    std::vector<int> order;
    {
        std::vector<char> seen(ns, 0);
        for (int root = 0; root < ns; ++root) {
            if (!visited[root] || seen[root]) continue;
            std::vector<std::pair<int, int>> stack{{root, 0}};
            seen[root] = 1;
            while (!stack.empty()) {
                auto& [v, next] = stack.back();
                if (next < ns) {
                    int w = next++;
                    if (edge[v][w] && !seen[w]) {
                        seen[w] = 1;
                        stack.emplace_back(w, 0);
                    }
                } else {
                    order.push_back(v);
                    stack.pop_back();
                }
            }
        }
    }
    std::vector<int> comp(ns, -1);
    int ncomp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] != -1) continue;
        std::vector<int> stack{*it};
        comp[*it] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < ns; ++w)
                if (edge[w][v] && comp[w] == -1) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    int closed = 0;
    const int last = out.states.back();
    for (int c = 0; c < ncomp; ++c) {
        bool out_edge = false, has_any_edge = false;
        std::vector<int> members;
        for (int v = 0; v < ns; ++v) {
            if (comp[v] != c) continue;
            members.push_back(v);
            for (int w = 0; w < ns; ++w)
                if (edge[v][w]) {
                    has_any_edge = true;
                    if (comp[w] != c) out_edge = true;
                }
        }
        if (out_edge) continue;
        if (!has_any_edge && members.size() == 1 && members[0] == last) continue;  // dangling tail
        ++closed;
    }
    out.single_closed_class = closed == 1;
    return out;
}

// -- Boltzmann distributions ---------------------------------------------------------

// nu_{a,s} of the visual cylinder above x: s^{|x|} w_a(x) G_{a.x}(s) / G_a(s),
// where G_a(s) is the row sum of the growth matrix at s.
inline double boltzmann_cylinder(const ConcurrentSystem& sys, const PolyMatrix<Rational>& m,
                                 int state, const Trace& x, double s) {
    int to = sys.act(state, x);
    if (to == kBot) return 0.0;
    Eigen::MatrixXd g = growth_matrix_at(m, s);
    double ga = g.row(state).sum();
    double gb = g.row(to).sum();
    return std::pow(s, x.length()) * to_double(sys.trace_weight(state, x)) * gb / ga;
}

struct BoltzmannRow {
    int k = 0;
    double s = 0.0;
    double max_cylinder_error = 0.0;  // vs the normalized valuation
    double max_ratio_error = 0.0;     // H_{a,b}(s) vs delta(a,b)
};

// Convergence table on the grid s = rho (1 - 10^-k): cylinder probabilities
// approach the normalized valuation and the G-ratios approach the cocycle.
inline std::vector<BoltzmannRow> boltzmann_convergence(
    const ConcurrentSystem& sys, const Spectrum& spec,
    const std::vector<std::pair<int, Trace>>& samples, int k_max = 5) {
    PolyMatrix<Rational> m = mobius_matrix(sys);
    std::vector<BoltzmannRow> table;
    for (int k = 1; k <= k_max; ++k) {
        BoltzmannRow row;
        row.k = k;
        row.s = spec.rho * (1.0 - std::pow(10.0, -k));
        Eigen::MatrixXd g = growth_matrix_at(m, row.s);
        for (const auto& [state, x] : samples) {
            int to = sys.act(state, x);
            if (to == kBot) continue;
            double cyl = std::pow(row.s, x.length()) * to_double(sys.trace_weight(state, x)) *
                         g.row(to).sum() / g.row(state).sum();
            double limit = std::pow(spec.rho, x.length()) * spec.delta(state, to) *
                           to_double(sys.trace_weight(state, x));
            row.max_cylinder_error = std::max(row.max_cylinder_error, std::abs(cyl - limit));
        }
        for (int a = 0; a < sys.n_states(); ++a)
            for (int b = 0; b < sys.n_states(); ++b) {
                double ratio = g.row(b).sum() / g.row(a).sum();
                row.max_ratio_error = std::max(row.max_ratio_error, std::abs(ratio - spec.delta(a, b)));
            }
        table.push_back(row);
    }
    return table;
}

}  // namespace csergo
