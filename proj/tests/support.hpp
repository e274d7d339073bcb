#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csergo/model_io.hpp"
#include "csergo/rng.hpp"
#include "csergo/system.hpp"

namespace csergo::testing {

inline ConcurrentSystem toy() { return preset_toy().build(); }

// The running example carrying its probabilistic valuation as exact weights.
inline ConcurrentSystem toy_probabilistic() {
    ModelDocument doc = preset_toy();
    doc.weights["0"] = {{"a", Rational(1, 2)}, {"b", Rational(1)}};
    doc.weights["1"] = {{"a", Rational(1, 2)}, {"b", Rational(1)}};
    doc.weights["2"] = {{"a", Rational(1, 2)}, {"b", Rational(1, 2)}, {"c", Rational(1, 4)}};
    return doc.build();
}
inline ConcurrentSystem dimer() { return preset_dimer().build(); }
inline ConcurrentSystem cyc6() { return preset_cyc6().build(); }
inline ConcurrentSystem phil(int n) { return preset_philosophers(n).build(); }
inline ConcurrentSystem free_wrap(int n) { return preset_free(n).build(); }

inline std::vector<int> random_word(SplitMix64& rng, int n_letters, int len) {
    std::vector<int> w(len);
    for (int i = 0; i < len; ++i) w[i] = static_cast<int>(rng.next() % n_letters);
    return w;
}

// Random valid irreducible systems for property tests. Actions start from a
// family of commuting rotations (or arbitrary maps), get sparsified, and any
// broken commuting square is repaired by deleting entries until consistent.
// Rejection sampling keeps only systems passing the irreducibility report.
class SystemSampler {
public:
    explicit SystemSampler(std::uint64_t seed) : rng_(seed) {}

    ConcurrentSystem next_irreducible(int max_letters = 4, int max_states = 4) {
        while (true) {
            auto sys = try_sample(max_letters, max_states);
            if (!sys) continue;
            if (sys->irreducibility_report().irreducible()) return std::move(*sys);
        }
    }

private:
    std::optional<ConcurrentSystem> try_sample(int max_letters, int max_states) {
        const int nl = 2 + static_cast<int>(rng_.next() % (max_letters - 1));
        const int ns = 1 + static_cast<int>(rng_.next() % max_states);
        std::vector<std::string> letters;
        for (int i = 0; i < nl; ++i) letters.push_back(std::string(1, 'a' + i));
        std::vector<std::pair<std::string, std::string>> pairs;
        for (int i = 0; i < nl; ++i)
            for (int j = i + 1; j < nl; ++j)
                if (rng_.next() % 3 == 0) pairs.emplace_back(letters[i], letters[j]);
        Alphabet alph = Alphabet::validate(letters, pairs);
        if (!alph.monoid_irreducible()) return std::nullopt;

        std::vector<int> action(ns * nl, kBot);
        if (rng_.next() % 2 == 0) {
            for (int a = 0; a < nl; ++a) {
                int k = a == 0 ? 1 : static_cast<int>(rng_.next() % ns);
                for (int s = 0; s < ns; ++s) action[s * nl + a] = (s + k) % ns;
            }
        } else {
            for (int i = 0; i < ns * nl; ++i) action[i] = static_cast<int>(rng_.next() % ns);
        }
        for (int i = 0; i < ns * nl; ++i)
            if (rng_.next() % 5 == 0) action[i] = kBot;

        // delete entries until all independent squares commute
        auto act = [&](int s, int a) { return s == kBot ? kBot : action[s * nl + a]; };
        bool changed = true;
        while (changed) {
            changed = false;
            for (int s = 0; s < ns && !changed; ++s)
                for (int a = 0; a < nl && !changed; ++a)
                    for (int b = a + 1; b < nl && !changed; ++b) {
                        if (!alph.independent(a, b)) continue;
                        int lhs = act(act(s, a), b), rhs = act(act(s, b), a);
                        if (lhs == rhs) continue;
                        if (lhs != kBot)
                            action[act(s, a) * nl + b] = kBot;
                        else
                            action[act(s, b) * nl + a] = kBot;
                        changed = true;
                    }
        }
        RawSystem raw{std::move(alph), {}, std::move(action), {}};
        for (int i = 0; i < ns; ++i) raw.states.push_back("s" + std::to_string(i));
        return ConcurrentSystem::validate(std::move(raw));
    }

    SplitMix64 rng_;
};

}  // namespace csergo::testing
