#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csergo/errors.hpp"

namespace csergo {

// A clique is a set of pairwise-independent letters, stored as a bitmask over
// letter indices. The empty clique is the monoid unit.
class Clique {
public:
    constexpr Clique() = default;
    explicit constexpr Clique(std::uint32_t bits) : bits_(bits) {}

    std::uint32_t bits() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    int size() const { return std::popcount(bits_); }
    bool contains(int letter) const { return bits_ & (1u << letter); }
    bool subset_of(Clique o) const { return (bits_ & ~o.bits_) == 0; }
    bool disjoint(Clique o) const { return (bits_ & o.bits_) == 0; }
    Clique with(int letter) const { return Clique(bits_ | (1u << letter)); }
    Clique without(int letter) const { return Clique(bits_ & ~(1u << letter)); }
    Clique united(Clique o) const { return Clique(bits_ | o.bits_); }

    std::vector<int> members() const {
        std::vector<int> out;
        for (std::uint32_t m = bits_; m; m &= m - 1) out.push_back(std::countr_zero(m));
        return out;
    }

    friend bool operator==(Clique a, Clique b) { return a.bits_ == b.bits_; }

private:
    std::uint32_t bits_ = 0;
};

// Deterministic clique order: by size, then lexicographic on member indices.
inline bool clique_order_less(Clique a, Clique b) {
    if (a.size() != b.size()) return a.size() < b.size();
    auto ma = a.members(), mb = b.members();
    return ma < mb;
}

// The alphabet together with the irreflexive symmetric independence relation.
// Letter count is capped so that cliques fit a 32-bit mask and subset scans
// stay cheap.
class Alphabet {
public:
    static constexpr int kMaxLetters = 20;

    Alphabet() = default;  // trivial monoid (no letters)

    static Alphabet validate(std::vector<std::string> letters,
                             const std::vector<std::pair<std::string, std::string>>& pairs) {
        Alphabet a;
        a.letters_ = std::move(letters);
        const int n = static_cast<int>(a.letters_.size());
        if (n > kMaxLetters) throw ValidationError("alphabet too large (max 20 letters)");
        std::map<std::string, int> index;
        for (int i = 0; i < n; ++i) {
            if (!index.emplace(a.letters_[i], i).second)
                throw ValidationError("duplicate letter " + a.letters_[i]);
        }
        a.indep_.assign(n, 0u);
        for (const auto& [x, y] : pairs) {
            auto ix = index.find(x);
            if (ix == index.end()) throw UnknownLetter(x);
            auto iy = index.find(y);
            if (iy == index.end()) throw UnknownLetter(y);
            if (ix->second == iy->second) throw ReflexivePair(x);
            a.indep_[ix->second] |= 1u << iy->second;
            a.indep_[iy->second] |= 1u << ix->second;
        }
        a.finish();
        return a;
    }

    int size() const { return static_cast<int>(letters_.size()); }
    bool trivial() const { return letters_.empty(); }
    const std::vector<std::string>& letters() const { return letters_; }
    const std::string& letter_name(int i) const { return letters_[i]; }

    int letter_index(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (letters_[i] == name) return i;
        throw UnknownLetter(name);
    }

    bool independent(int a, int b) const { return indep_[a] & (1u << b); }

    // Mask of letters dependent on `a` (always includes `a` itself).
    std::uint32_t dependents_of(int a) const { return all_mask() & ~indep_[a]; }

    std::uint32_t all_mask() const { return size() == 32 ? ~0u : (1u << size()) - 1; }

    bool is_clique(Clique c) const {
        for (int i : c.members())
            if (c.bits() & ~indep_[i] & ~(1u << i)) return false;
        return true;
    }

    // Normal pair c -> d: every letter of d has a dependent letter in c.
    bool normal_pair(Clique c, Clique d) const {
        for (int b : d.members())
            if ((c.bits() & dependents_of(b)) == 0) return false;
        return true;
    }

    // c and d are parallel: disjoint with a clique union.
    bool parallel(Clique c, Clique d) const { return c.disjoint(d) && is_clique(c.united(d)); }

    // All cliques including the empty one, in deterministic order; the index in
    // this list is the canonical clique ordinal used throughout.
    const std::vector<Clique>& cliques() const { return cliques_; }

    int clique_index(Clique c) const { return clique_index_[c.bits()]; }

    // Connectivity of the dependence graph; trivially true for 0 or 1 letter.
    bool monoid_irreducible() const { return monoid_irreducible_; }

    std::string clique_name(Clique c) const {
        if (c.empty()) return "eps";
        bool all_single = true;
        for (const auto& l : letters_)
            if (l.size() != 1) all_single = false;
        std::string out;
        for (int i : c.members()) {
            if (!out.empty() && !all_single) out += ",";
            out += letters_[i];
        }
        return out;
    }

private:
    void finish() {
        const int n = size();
        // dependence-graph connectivity
        if (n <= 1) {
            monoid_irreducible_ = true;
        } else {
            std::vector<int> stack{0};
            std::uint32_t seen = 1u;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                std::uint32_t next = dependents_of(v) & ~seen;
                for (std::uint32_t m = next; m; m &= m - 1) {
                    int w = std::countr_zero(m);
                    seen |= 1u << w;
                    stack.push_back(w);
                }
            }
            monoid_irreducible_ = seen == all_mask();
        }
        // enumerate cliques
        cliques_.clear();
        for (std::uint32_t m = 0;; ++m) {
            Clique c(m);
            if (is_clique(c)) cliques_.push_back(c);
            if (m == all_mask()) break;
        }
        std::sort(cliques_.begin(), cliques_.end(), clique_order_less);
        clique_index_.assign(std::size_t(1) << n, -1);
        for (int i = 0; i < static_cast<int>(cliques_.size()); ++i)
            clique_index_[cliques_[i].bits()] = i;
    }

    std::vector<std::string> letters_;
    std::vector<std::uint32_t> indep_;
    std::vector<Clique> cliques_;
    std::vector<int> clique_index_;
    bool monoid_irreducible_ = true;
};

// Digraph on the non-empty cliques with the normal-pair edge relation.
struct CliqueDigraph {
    std::vector<Clique> vertices;                 // non-empty cliques, canonical order
    std::vector<std::vector<int>> successors;     // indices into `vertices`
};

inline CliqueDigraph clique_digraph(const Alphabet& a) {
    CliqueDigraph g;
    for (Clique c : a.cliques())
        if (!c.empty()) g.vertices.push_back(c);
    g.successors.resize(g.vertices.size());
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        for (std::size_t j = 0; j < g.vertices.size(); ++j)
            if (a.normal_pair(g.vertices[i], g.vertices[j]))
                g.successors[i].push_back(static_cast<int>(j));
    return g;
}

}  // namespace csergo
