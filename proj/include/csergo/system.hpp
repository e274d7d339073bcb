#pragma once

#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csergo/alphabet.hpp"
#include "csergo/rational.hpp"
#include "csergo/trace.hpp"

namespace csergo {

inline constexpr int kBot = -1;  // the sink; absent action entries map here

// Raw model prior to validation: action and weights as dense tables indexed by
// state * n_letters + letter, with kBot / zero marking absent entries.
struct RawSystem {
    Alphabet alphabet;
    std::vector<std::string> states;
    std::vector<int> action;
    std::vector<Rational> weights;  // empty means counting valuation
};

struct IrreducibilityReport {
    bool transitive = false;
    bool non_trivial = false;
    bool monoid_irreducible = false;
    bool live = false;
    bool irreducible() const { return transitive && non_trivial && monoid_irreducible && live; }
};

// Letter-level weights in floating point, same (state, letter) indexing as the
// action table; zero exactly where the action is undefined.
using Valuation = std::vector<double>;

// A trace monoid acting partially on a finite state set, with per-(state,
// letter) weights. Immutable after validation.
class ConcurrentSystem {
public:
    // Checks commutation consistency of the action for every independent pair
    // and every state (with the sink absorbing), and that weights are positive
    // exactly on defined entries.
    static ConcurrentSystem validate(RawSystem raw) {
        ConcurrentSystem s;
        s.alphabet_ = std::move(raw.alphabet);
        s.states_ = std::move(raw.states);
        const int nl = s.alphabet_.size();
        const int ns = static_cast<int>(s.states_.size());
        {
            std::set<std::string> uniq(s.states_.begin(), s.states_.end());
            if (static_cast<int>(uniq.size()) != ns) throw ValidationError("duplicate state names");
        }
        s.action_ = std::move(raw.action);
        if (static_cast<int>(s.action_.size()) != ns * nl)
            throw ValidationError("action table has wrong shape");
        for (int v : s.action_)
            if (v != kBot && (v < 0 || v >= ns)) throw ValidationError("action target out of range");

        if (raw.weights.empty()) {
            s.weights_.assign(ns * nl, Rational(0));
            for (int i = 0; i < ns * nl; ++i)
                if (s.action_[i] != kBot) s.weights_[i] = 1;
        } else {
            s.weights_ = std::move(raw.weights);
            if (static_cast<int>(s.weights_.size()) != ns * nl)
                throw ValidationError("weight table has wrong shape");
        }

        for (int st = 0; st < ns; ++st)
            for (int a = 0; a < nl; ++a) {
                bool defined = s.action_[st * nl + a] != kBot;
                const Rational& w = s.weights_[st * nl + a];
                if (defined && w <= 0) throw WeightSupportMismatch(s.states_[st], s.alphabet_.letter_name(a));
                if (!defined && w != 0) throw WeightSupportMismatch(s.states_[st], s.alphabet_.letter_name(a));
            }

        for (int st = 0; st < ns; ++st)
            for (int a = 0; a < nl; ++a)
                for (int b = a + 1; b < nl; ++b) {
                    if (!s.alphabet_.independent(a, b)) continue;
                    int ab = s.act_letter(s.act_letter(st, a), b);
                    int ba = s.act_letter(s.act_letter(st, b), a);
                    if (ab != ba)
                        throw CommutationViolation(s.states_[st], s.alphabet_.letter_name(a),
                                                   s.alphabet_.letter_name(b));
                    if (ab != kBot) {
                        // the weights must agree on the commuting square, or
                        // they do not extend to a valuation on traces
                        Rational wab = s.weight(st, a) * s.weight(s.act_letter(st, a), b);
                        Rational wba = s.weight(st, b) * s.weight(s.act_letter(st, b), a);
                        if (wab != wba)
                            throw CommutationViolation(s.states_[st], s.alphabet_.letter_name(a),
                                                       s.alphabet_.letter_name(b));
                    }
                }

        s.finish();
        return s;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    int n_states() const { return static_cast<int>(states_.size()); }
    int n_letters() const { return alphabet_.size(); }
    const std::vector<std::string>& states() const { return states_; }
    const std::string& state_name(int s) const { return states_[s]; }

    int state_index(const std::string& name) const {
        for (int i = 0; i < n_states(); ++i)
            if (states_[i] == name) return i;
        throw UnknownState(name);
    }

    int act_letter(int state, int a) const {
        if (state == kBot) return kBot;
        return action_[state * n_letters() + a];
    }

    bool defined(int state, int a) const { return act_letter(state, a) != kBot; }

    const Rational& weight(int state, int a) const { return weights_[state * n_letters() + a]; }

    // Action of a whole clique; precomputed, kBot when undefined.
    int act_clique(int state, int ci) const {
        if (state == kBot) return kBot;
        return clique_action_[state * n_cliques() + ci];
    }
    int act_clique(int state, Clique c) const { return act_clique(state, alphabet_.clique_index(c)); }

    int act(int state, const Trace& x) const {
        for (Clique c : x.cliques()) {
            state = act_clique(state, c);
            if (state == kBot) return kBot;
        }
        return state;
    }

    // Weight of a clique from a state, along one fixed linearization (ascending
    // letter order); well-defined by commutation consistency.
    const Rational& clique_weight(int state, int ci) const {
        return clique_weights_[state * n_cliques() + ci];
    }

    Rational trace_weight(int state, const Trace& x) const {
        Rational w(1);
        for (Clique c : x.cliques()) {
            int ci = alphabet_.clique_index(c);
            if (act_clique(state, ci) == kBot) return Rational(0);
            w *= clique_weight(state, ci);
            state = act_clique(state, ci);
        }
        return w;
    }

    int n_cliques() const { return static_cast<int>(alphabet_.cliques().size()); }

    Valuation counting_valuation() const {
        Valuation v(states_.size() * alphabet_.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (action_[i] != kBot) v[i] = 1.0;
        return v;
    }

    Valuation stored_valuation() const {
        Valuation v(weights_.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = to_double(weights_[i]);
        return v;
    }

    bool counting_weights() const {
        for (std::size_t i = 0; i < weights_.size(); ++i)
            if (action_[i] != kBot && weights_[i] != 1) return false;
        return true;
    }

    IrreducibilityReport irreducibility_report() const {
        IrreducibilityReport r;
        r.monoid_irreducible = alphabet_.monoid_irreducible() && !alphabet_.trivial();
        const int ns = n_states(), nl = n_letters();
        for (int i = 0; i < ns * nl; ++i)
            if (action_[i] != kBot) r.non_trivial = true;

        // transitivity: every ordered state pair joined by a one-letter walk
        r.transitive = true;
        for (int s0 = 0; s0 < ns && r.transitive; ++s0) {
            std::vector<bool> seen(ns, false);
            std::vector<int> stack{s0};
            seen[s0] = true;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int a = 0; a < nl; ++a) {
                    int w = act_letter(v, a);
                    if (w != kBot && !seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
                }
            }
            for (int t = 0; t < ns; ++t)
                if (!seen[t]) r.transitive = false;
        }

        // liveness: each letter reachable-then-playable from every state
        // (backward reachability from the states where the letter is enabled);
        // vacuously true without letters
        r.live = true;
        for (int a = 0; a < nl && r.live; ++a) {
            std::vector<bool> good(ns, false);
            std::vector<int> stack;
            for (int st = 0; st < ns; ++st)
                if (defined(st, a)) {
                    good[st] = true;
                    stack.push_back(st);
                }
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int u = 0; u < ns; ++u) {
                    if (good[u]) continue;
                    for (int b = 0; b < nl; ++b)
                        if (act_letter(u, b) == v) {
                            good[u] = true;
                            stack.push_back(u);
                            break;
                        }
                }
            }
            for (int st = 0; st < ns; ++st)
                if (!good[st]) r.live = false;
        }
        return r;
    }

    // Restriction of the action to the submonoid avoiding letter `a`.
    ConcurrentSystem restrict_letter(int drop) const {
        const int nl = n_letters();
        if (drop < 0 || drop >= nl) throw UnknownLetter("letter index out of range");
        std::vector<std::string> letters;
        std::vector<std::pair<std::string, std::string>> pairs;
        std::vector<int> keep;
        for (int i = 0; i < nl; ++i)
            if (i != drop) {
                keep.push_back(i);
                letters.push_back(alphabet_.letter_name(i));
            }
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = i + 1; j < keep.size(); ++j)
                if (alphabet_.independent(keep[i], keep[j]))
                    pairs.emplace_back(alphabet_.letter_name(keep[i]), alphabet_.letter_name(keep[j]));
        RawSystem raw;
        raw.alphabet = Alphabet::validate(letters, pairs);
        raw.states = states_;
        const int ns = n_states();
        const int nk = static_cast<int>(keep.size());
        raw.action.assign(ns * nk, kBot);
        raw.weights.assign(ns * nk, Rational(0));
        for (int st = 0; st < ns; ++st)
            for (int i = 0; i < nk; ++i) {
                raw.action[st * nk + i] = act_letter(st, keep[i]);
                raw.weights[st * nk + i] = weight(st, keep[i]);
            }
        return validate(std::move(raw));
    }

    ConcurrentSystem restrict_letter(const std::string& name) const {
        return restrict_letter(alphabet_.letter_index(name));
    }

    // All traces x with the action defined from `start` and |x| <= max_len,
    // deduplicated by normal form, in deterministic (length, normal-form) order.
    std::vector<Trace> enumerate_trajectories(int start, int max_len) const {
        if (max_len > 14) throw BudgetExceeded("enumerate_trajectories max_len > 14");
        std::vector<Trace> out{Trace()};
        std::set<Trace> level{Trace()};
        for (int len = 1; len <= max_len; ++len) {
            std::set<Trace> next;
            for (const Trace& x : level) {
                int st = act(start, x);
                for (int a = 0; a < n_letters(); ++a) {
                    if (act_letter(st, a) == kBot) continue;
                    Trace y = x;
                    y.push_letter(alphabet_, a);
                    next.insert(std::move(y));
                }
            }
            for (const Trace& x : next) out.push_back(x);
            level = std::move(next);
            if (level.empty()) break;
        }
        return out;
    }

private:
    void finish() {
        const int ns = n_states();
        const int nc = n_cliques();
        clique_action_.assign(ns * nc, kBot);
        clique_weights_.assign(ns * nc, Rational(0));
        const auto& cs = alphabet_.cliques();
        for (int st = 0; st < ns; ++st)
            for (int ci = 0; ci < nc; ++ci) {
                int cur = st;
                Rational w(1);
                for (int a : cs[ci].members()) {
                    if (cur == kBot) break;
                    w *= weight(cur, a);
                    cur = act_letter(cur, a);
                }
                clique_action_[st * nc + ci] = cur;
                clique_weights_[st * nc + ci] = cur == kBot ? Rational(0) : w;
#ifndef NDEBUG
                // recompute along the reversed linearization; equality is a
                // consequence of the validated commutation squares
                if (cur != kBot) {
                    int cur2 = st;
                    Rational w2(1);
                    auto mem = cs[ci].members();
                    for (auto it = mem.rbegin(); it != mem.rend(); ++it) {
                        w2 *= weight(cur2, *it);
                        cur2 = act_letter(cur2, *it);
                    }
                    assert(cur2 == cur && w2 == w);
                }
#endif
            }
    }

    Alphabet alphabet_;
    std::vector<std::string> states_;
    std::vector<int> action_;
    std::vector<Rational> weights_;
    std::vector<int> clique_action_;
    std::vector<Rational> clique_weights_;
};

// Wraps a trace monoid as the singleton-state system; its analysis reproduces
// the plain trace-monoid theory.
inline ConcurrentSystem wrap_monoid(Alphabet alph, std::vector<Rational> letter_weights = {}) {
    RawSystem raw;
    const int nl = alph.size();
    raw.alphabet = std::move(alph);
    raw.states = {"*"};
    raw.action.assign(nl, 0);
    if (!letter_weights.empty()) {
        for (const Rational& w : letter_weights)
            if (w <= 0) throw NonPositiveWeight("wrap_monoid letter weight");
        raw.weights = std::move(letter_weights);
    }
    return ConcurrentSystem::validate(std::move(raw));
}

}  // namespace csergo
