#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "csergo/dsc.hpp"
#include "csergo/mobius_matrix.hpp"
#include "csergo/rng.hpp"
#include "csergo/system.hpp"

namespace csergo {

// Slow, independent enumeration oracles backing the tests. Deterministic and
// single-threaded so failures reproduce exactly.

// Exact per-(start, end, length) counts and weighted sums of trajectories.
struct TraceCensus {
    int n_states = 0;
    int max_len = 0;
    std::vector<std::vector<long long>> counts;    // [start * n_states + end][len]
    std::vector<std::vector<Rational>> weighted;   // same shape

    long long count(int a, int b, int len) const { return counts[a * n_states + b][len]; }
    const Rational& sum(int a, int b, int len) const { return weighted[a * n_states + b][len]; }
};

namespace detail {
inline constexpr long long kCensusGuard = 10'000'000;
}

// Word-route enumeration: extend traces letter by letter, deduplicating by
// normal form at each length.
inline TraceCensus census(const ConcurrentSystem& sys, int max_len) {
    if (max_len > 12) throw BudgetExceeded("census max_len > 12");
    TraceCensus out;
    out.n_states = sys.n_states();
    out.max_len = max_len;
    out.counts.assign(out.n_states * out.n_states, std::vector<long long>(max_len + 1, 0));
    out.weighted.assign(out.n_states * out.n_states,
                        std::vector<Rational>(max_len + 1, Rational(0)));
    long long total = 0;
    for (int start = 0; start < out.n_states; ++start) {
        std::set<Trace> level{Trace()};
        for (int len = 0; len <= max_len; ++len) {
            for (const Trace& x : level) {
                int to = sys.act(start, x);
                out.counts[start * out.n_states + to][len] += 1;
                out.weighted[start * out.n_states + to][len] += sys.trace_weight(start, x);
            }
            if (len == max_len) break;
            std::set<Trace> next;
            for (const Trace& x : level) {
                int mid = sys.act(start, x);
                for (int a = 0; a < sys.n_letters(); ++a) {
                    if (sys.act_letter(mid, a) == kBot) continue;
                    Trace y = x;
                    y.push_letter(sys.alphabet(), a);
                    next.insert(std::move(y));
                }
            }
            total += static_cast<long long>(next.size());
            if (total > detail::kCensusGuard) throw BudgetExceeded("census trace guard");
            level = std::move(next);
        }
    }
    return out;
}

// Clique-route enumeration: walk normal clique chains directly. Each trace is
// produced exactly once by uniqueness of the normal form, so the buckets must
// match the word route.
inline TraceCensus census_by_cliques(const ConcurrentSystem& sys, int max_len) {
    if (max_len > 12) throw BudgetExceeded("census max_len > 12");
    TraceCensus out;
    out.n_states = sys.n_states();
    out.max_len = max_len;
    out.counts.assign(out.n_states * out.n_states, std::vector<long long>(max_len + 1, 0));
    out.weighted.assign(out.n_states * out.n_states,
                        std::vector<Rational>(max_len + 1, Rational(0)));
    const auto& cliques = sys.alphabet().cliques();
    const int nc = sys.n_cliques();
    struct Node {
        int state;
        int last_clique;  // -1 at the root
        int len;
        Rational weight;
    };
    for (int start = 0; start < out.n_states; ++start) {
        std::vector<Node> stack{{start, -1, 0, Rational(1)}};
        while (!stack.empty()) {
            Node node = stack.back();
            stack.pop_back();
            out.counts[start * out.n_states + node.state][node.len] += 1;
            out.weighted[start * out.n_states + node.state][node.len] += node.weight;
            for (int ci = 0; ci < nc; ++ci) {
                if (cliques[ci].empty()) continue;
                if (node.len + cliques[ci].size() > max_len) continue;
                if (node.last_clique >= 0 &&
                    !sys.alphabet().normal_pair(cliques[node.last_clique], cliques[ci]))
                    continue;
                int to = sys.act_clique(node.state, ci);
                if (to == kBot) continue;
                stack.push_back({to, ci, node.len + cliques[ci].size(),
                                 node.weight * sys.clique_weight(node.state, ci)});
            }
        }
    }
    return out;
}

// The growth matrix is the formal inverse of the Mobius matrix: its Taylor
// coefficients must reproduce the census weighted sums exactly.
struct SeriesCheck {
    bool pass = true;
    int fail_degree = -1;
    int fail_from = -1, fail_to = -1;
    Rational expected, actual;
};

inline SeriesCheck series_check(const TraceCensus& c, const PolyMatrix<Rational>& m, int degree) {
    SeriesCheck out;
    auto g = growth_series(m, degree);
    for (int k = 0; k <= degree && out.pass; ++k)
        for (int a = 0; a < c.n_states && out.pass; ++a)
            for (int b = 0; b < c.n_states && out.pass; ++b)
                if (g[k][a][b] != c.sum(a, b, k)) {
                    out.pass = false;
                    out.fail_degree = k;
                    out.fail_from = a;
                    out.fail_to = b;
                    out.expected = c.sum(a, b, k);
                    out.actual = g[k][a][b];
                }
    return out;
}

// Transform followed by its explicit inverse must reproduce random clique
// functions exactly in rational arithmetic.
inline bool mobius_roundtrip_check(const Alphabet& alph, int trials, std::uint64_t seed = 7) {
    SplitMix64 rng(seed);
    const int nc = static_cast<int>(alph.cliques().size());
    for (int t = 0; t < trials; ++t) {
        std::vector<Rational> f(nc);
        for (int i = 0; i < nc; ++i) {
            long long num = static_cast<long long>(rng.next() % 21) - 10;
            long long den = 1 + static_cast<long long>(rng.next() % 6);
            f[i] = Rational(num, den);
        }
        auto h = mobius_transform(alph, f);
        auto f2 = mobius_transform_inverse(alph, h);
        if (f2 != f) return false;
        auto h2 = mobius_transform(alph, f2);
        if (h2 != h) return false;
    }
    return true;
}

// Every certificate found by the bounded protection search must land on a
// vertex that the probabilistic criterion classifies as stable.
struct StabilityCrossCheck {
    bool consistent = true;
    int certificates = 0;
    int inconclusive = 0;
    std::vector<int> unstable_vertices;  // per the h > tol criterion
};

inline StabilityCrossCheck stability_cross_check(const ConcurrentSystem& sys, const DscGraph& dsc,
                                                 int depth_budget) {
    StabilityCrossCheck out;
    const auto& cliques = sys.alphabet().cliques();
    for (int v = 0; v < dsc.size(); ++v) {
        const auto [st, ci] = dsc.vertices[v];
        auto res = protection_search(sys, st, cliques[ci], depth_budget);
        bool flagged_stable = !dsc.stable.empty() && dsc.stable[v];
        if (res.status == ProtectionStatus::Found) {
            ++out.certificates;
            if (!flagged_stable) out.consistent = false;
        } else if (res.status == ProtectionStatus::NoneExists) {
            if (flagged_stable) out.consistent = false;
        } else {
            ++out.inconclusive;
        }
        if (!flagged_stable) out.unstable_vertices.push_back(v);
    }
    return out;
}

}  // namespace csergo
