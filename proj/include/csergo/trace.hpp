#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csergo/alphabet.hpp"
#include "csergo/errors.hpp"

namespace csergo {

// A trace stored in Cartier-Foata normal form: a sequence of non-empty cliques
// with every consecutive pair normal. The empty sequence is the unit.
class Trace {
public:
    Trace() = default;

    int height() const { return static_cast<int>(cliques_.size()); }
    int length() const {
        int n = 0;
        for (Clique c : cliques_) n += c.size();
        return n;
    }
    bool empty() const { return cliques_.empty(); }
    const std::vector<Clique>& cliques() const { return cliques_; }
    Clique first_clique() const { return cliques_.empty() ? Clique() : cliques_.front(); }

    // Letters in the front-to-back clique order, members ascending inside a
    // clique. This is one distinguished linearization of the trace.
    std::vector<int> linearize() const {
        std::vector<int> out;
        for (Clique c : cliques_)
            for (int a : c.members()) out.push_back(a);
        return out;
    }

    friend bool operator==(const Trace& x, const Trace& y) {
        if (x.cliques_.size() != y.cliques_.size()) return false;
        for (std::size_t i = 0; i < x.cliques_.size(); ++i)
            if (!(x.cliques_[i] == y.cliques_[i])) return false;
        return true;
    }

    // Total order on normal forms (height, then clique bit patterns); used only
    // to get deterministic containers of traces.
    friend std::strong_ordering operator<=>(const Trace& x, const Trace& y) {
        if (auto c = x.cliques_.size() <=> y.cliques_.size(); c != 0) return c;
        for (std::size_t i = 0; i < x.cliques_.size(); ++i)
            if (auto c = x.cliques_[i].bits() <=> y.cliques_[i].bits(); c != 0) return c;
        return std::strong_ordering::equal;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (Clique c : cliques_) {
            h ^= c.bits() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

    // Appends one letter, restoring the normal form. The letter falls to the
    // deepest clique having a letter dependent on it (heap-of-pieces style).
    void push_letter(const Alphabet& alph, int a) {
        const std::uint32_t dep = alph.dependents_of(a);
        int j = static_cast<int>(cliques_.size());  // will rest right after clique j
        while (j > 0 && (cliques_[j - 1].bits() & dep) == 0) --j;
        if (j == static_cast<int>(cliques_.size()))
            cliques_.push_back(Clique().with(a));
        else
            cliques_[j] = cliques_[j].with(a);
    }

    static Trace from_word(const Alphabet& alph, std::span<const int> word) {
        Trace t;
        for (int a : word) t.push_letter(alph, a);
        return t;
    }

    static Trace from_clique(Clique c) {
        Trace t;
        if (!c.empty()) t.cliques_.push_back(c);
        return t;
    }

private:
    std::vector<Clique> cliques_;
};

inline Trace normal_form(const Alphabet& alph, std::span<const int> word) {
    return Trace::from_word(alph, word);
}

inline Trace normal_form(const Alphabet& alph, const std::vector<std::string>& word) {
    Trace t;
    for (const auto& name : word) t.push_letter(alph, alph.letter_index(name));
    return t;
}

inline Trace concat(const Alphabet& alph, const Trace& x, const Trace& y) {
    Trace r = x;
    for (Clique c : y.cliques())
        for (int a : c.members()) r.push_letter(alph, a);
    return r;
}

// A letter left-divides y iff it appears in some clique with all earlier
// cliques independent of it; such an occurrence is unique when it exists.
inline int front_occurrence(const Alphabet& alph, const Trace& y, int a) {
    const std::uint32_t dep = alph.dependents_of(a) & ~(1u << a);
    for (std::size_t i = 0; i < y.cliques().size(); ++i) {
        Clique c = y.cliques()[i];
        if (c.contains(a)) return static_cast<int>(i);
        if (c.bits() & dep) return -1;  // blocked by a dependent letter
    }
    return -1;
}

// Removes a front-reachable occurrence of `a`; returns false if there is none.
inline bool pull_letter(const Alphabet& alph, Trace& y, int a) {
    int i = front_occurrence(alph, y, a);
    if (i < 0) return false;
    Trace r;
    const auto& cs = y.cliques();
    for (std::size_t j = 0; j < cs.size(); ++j) {
        Clique c = j == static_cast<std::size_t>(i) ? cs[j].without(a) : cs[j];
        for (int b : c.members()) r.push_letter(alph, b);
    }
    y = r;
    return true;
}

inline bool left_divides(const Alphabet& alph, const Trace& x, const Trace& y) {
    Trace rest = y;
    for (int a : x.linearize())
        if (!pull_letter(alph, rest, a)) return false;
    return true;
}

// The unique z with y = xz; throws NotADivisor when x does not divide y.
inline Trace left_quotient(const Alphabet& alph, const Trace& x, const Trace& y) {
    Trace rest = y;
    for (int a : x.linearize())
        if (!pull_letter(alph, rest, a)) throw NotADivisor();
    return rest;
}

inline std::string trace_name(const Alphabet& alph, const Trace& x) {
    if (x.empty()) return "eps";
    std::string out;
    for (std::size_t i = 0; i < x.cliques().size(); ++i) {
        if (i) out += ".";
        out += alph.clique_name(x.cliques()[i]);
    }
    return out;
}

}  // namespace csergo
