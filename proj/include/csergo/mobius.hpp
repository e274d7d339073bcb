#pragma once

#include <vector>

#include "csergo/alphabet.hpp"
#include "csergo/polynomial.hpp"
#include "csergo/rational.hpp"

namespace csergo {

// Multiplicative extension of letter weights to a clique.
template <class T>
T clique_weight(Clique c, const std::vector<T>& letter_weights) {
    T w(1);
    for (int a : c.members()) w *= letter_weights[a];
    return w;
}

// mu(z) = sum over cliques of w(c) (-1)^{|c|} z^{|c|}; constant term 1.
inline RationalPoly mobius_polynomial(const Alphabet& alph,
                                      const std::vector<Rational>& letter_weights) {
    for (int i = 0; i < alph.size(); ++i)
        if (letter_weights[i] <= 0) throw NonPositiveWeight("letter " + alph.letter_name(i));
    std::vector<Rational> coeffs;
    for (Clique c : alph.cliques()) {
        const int d = c.size();
        if (static_cast<int>(coeffs.size()) <= d) coeffs.resize(d + 1, Rational(0));
        Rational term = clique_weight(c, letter_weights);
        coeffs[d] += (d % 2 == 0) ? term : -term;
    }
    return RationalPoly(std::move(coeffs));
}

inline RationalPoly mobius_polynomial(const Alphabet& alph) {
    return mobius_polynomial(alph, std::vector<Rational>(alph.size(), Rational(1)));
}

// Alternating-sum transform of a clique function, indexed by clique ordinal:
// h(c) = sum over cliques c' >= c of (-1)^{|c'|-|c|} f(c').
template <class T>
std::vector<T> mobius_transform(const Alphabet& alph, const std::vector<T>& f) {
    const auto& cs = alph.cliques();
    std::vector<T> h(cs.size(), T(0));
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = 0; j < cs.size(); ++j) {
            if (!cs[i].subset_of(cs[j])) continue;
            int diff = cs[j].size() - cs[i].size();
            if (diff % 2 == 0)
                h[i] += f[j];
            else
                h[i] -= f[j];
        }
    }
    return h;
}

// Inverse of the transform: f(c) = sum over cliques c' >= c of h(c').
template <class T>
std::vector<T> mobius_transform_inverse(const Alphabet& alph, const std::vector<T>& h) {
    const auto& cs = alph.cliques();
    std::vector<T> f(cs.size(), T(0));
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j)
            if (cs[i].subset_of(cs[j])) f[i] += h[j];
    return f;
}

// Smallest positive root of the Mobius polynomial of a non-trivial monoid.
// For the counting valuation this root lies in (0, 1].
inline double smallest_root_monoid(const RationalPoly& mu, double scan_max = 1.0 + 1e-9) {
    auto r = smallest_positive_root(mu, scan_max);
    if (!r) throw NoRootInUnitInterval();
    return *r;
}

}  // namespace csergo
