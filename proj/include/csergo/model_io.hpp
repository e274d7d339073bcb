#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csergo/system.hpp"

namespace csergo {

using Json = nlohmann::json;

// On-disk model format: a single JSON object with letters, independence,
// states, action (missing entries are the sink) and optional weights. Weights
// parse to exact rationals when given as integers or decimal/fraction strings.
struct ModelDocument {
    std::vector<std::string> letters;
    std::vector<std::pair<std::string, std::string>> independence;
    std::vector<std::string> states;
    std::map<std::string, std::map<std::string, std::string>> action;
    std::map<std::string, std::map<std::string, Rational>> weights;

    static ModelDocument from_json(const Json& j) {
        ModelDocument d;
        if (!j.is_object()) throw ParseError("model document must be a JSON object");
        try {
            for (const auto& l : j.at("letters")) d.letters.push_back(l.get<std::string>());
            for (const auto& p : j.at("independence")) {
                if (!p.is_array() || p.size() != 2)
                    throw ParseError("independence entries must be 2-element arrays");
                d.independence.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
            }
            for (const auto& s : j.at("states")) d.states.push_back(s.get<std::string>());
            for (const auto& [state, row] : j.at("action").items())
                for (const auto& [letter, target] : row.items())
                    d.action[state][letter] = target.get<std::string>();
            if (j.contains("weights"))
                for (const auto& [state, row] : j.at("weights").items())
                    for (const auto& [letter, value] : row.items()) {
                        if (value.is_string())
                            d.weights[state][letter] = parse_rational(value.get<std::string>());
                        else if (value.is_number_integer())
                            d.weights[state][letter] = Rational(value.get<long long>());
                        else if (value.is_number_float())
                            d.weights[state][letter] = rational_from_double(value.get<double>());
                        else
                            throw ParseError("weight must be a number or string");
                    }
        } catch (const Json::exception& e) {
            throw ParseError(std::string("model document: ") + e.what());
        }
        return d;
    }

    Json to_json() const {
        Json j;
        j["letters"] = letters;
        j["independence"] = Json::array();
        for (const auto& [a, b] : independence) j["independence"].push_back({a, b});
        j["states"] = states;
        j["action"] = Json::object();
        for (const auto& [state, row] : action) {
            Json r = Json::object();
            for (const auto& [letter, target] : row) r[letter] = target;
            j["action"][state] = std::move(r);
        }
        if (!weights.empty()) {
            j["weights"] = Json::object();
            for (const auto& [state, row] : weights) {
                Json r = Json::object();
                for (const auto& [letter, value] : row) {
                    BigInt num = boost::multiprecision::numerator(value);
                    BigInt den = boost::multiprecision::denominator(value);
                    if (den == 1 && num >= -(1ll << 53) && num <= (1ll << 53))
                        r[letter] = num.convert_to<long long>();
                    else
                        r[letter] = to_string(value);
                }
                j["weights"][state] = std::move(r);
            }
        }
        return j;
    }

    ConcurrentSystem build() const {
        RawSystem raw;
        raw.alphabet = Alphabet::validate(letters, independence);
        raw.states = states;
        const int nl = raw.alphabet.size();
        const int ns = static_cast<int>(states.size());
        std::map<std::string, int> sidx;
        for (int i = 0; i < ns; ++i) sidx[states[i]] = i;
        raw.action.assign(ns * nl, kBot);
        for (const auto& [state, row] : action) {
            auto si = sidx.find(state);
            if (si == sidx.end()) throw UnknownState(state);
            for (const auto& [letter, target] : row) {
                auto ti = sidx.find(target);
                if (ti == sidx.end()) throw UnknownState(target);
                raw.action[si->second * nl + raw.alphabet.letter_index(letter)] = ti->second;
            }
        }
        if (!weights.empty()) {
            raw.weights.assign(ns * nl, Rational(0));
            for (int i = 0; i < ns * nl; ++i)
                if (raw.action[i] != kBot) raw.weights[i] = 1;
            for (const auto& [state, row] : weights) {
                auto si = sidx.find(state);
                if (si == sidx.end()) throw UnknownState(state);
                for (const auto& [letter, value] : row)
                    raw.weights[si->second * nl + raw.alphabet.letter_index(letter)] = value;
            }
        }
        return ConcurrentSystem::validate(std::move(raw));
    }
};

inline ModelDocument parse_model(const std::string& text) {
    Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ParseError("invalid JSON");
    return ModelDocument::from_json(j);
}

inline ModelDocument load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

// -- presets ---------------------------------------------------------------------

// Three letters with ab = ba acting on three states; the running example used
// throughout the tests.
inline ModelDocument preset_toy() {
    ModelDocument d;
    d.letters = {"a", "b", "c"};
    d.independence = {{"a", "b"}};
    d.states = {"0", "1", "2"};
    d.action["0"] = {{"a", "1"}, {"b", "2"}};
    d.action["1"] = {{"a", "0"}, {"b", "2"}};
    d.action["2"] = {{"a", "2"}, {"b", "2"}, {"c", "0"}};
    return d;
}

// The dimer monoid on four generators, wrapped over a singleton state set.
inline ModelDocument preset_dimer() {
    ModelDocument d;
    d.letters = {"a", "b", "c", "d"};
    d.independence = {{"a", "c"}, {"a", "d"}, {"b", "d"}};
    d.states = {"*"};
    d.action["*"] = {{"a", "*"}, {"b", "*"}, {"c", "*"}, {"d", "*"}};
    return d;
}

inline ModelDocument preset_free(int n) {
    if (n < 1 || n > 20) throw ValidationError("free preset needs 1..20 letters");
    ModelDocument d;
    for (int i = 0; i < n; ++i) d.letters.push_back(std::string(1, static_cast<char>('a' + i % 26)) +
                                                    (n > 26 ? std::to_string(i / 26) : ""));
    d.states = {"*"};
    for (const auto& l : d.letters) d.action["*"][l] = "*";
    return d;
}

// Doubled system of a trace monoid: states are the cliques, a letter toggles
// its membership when the result stays a clique.
inline ModelDocument preset_doubled(const Alphabet& alph) {
    ModelDocument d;
    d.letters = alph.letters();
    for (int a = 0; a < alph.size(); ++a)
        for (int b = a + 1; b < alph.size(); ++b)
            if (alph.independent(a, b)) d.independence.emplace_back(d.letters[a], d.letters[b]);
    for (Clique c : alph.cliques()) d.states.push_back(alph.clique_name(c));
    for (Clique c : alph.cliques()) {
        const std::string from = alph.clique_name(c);
        for (int a = 0; a < alph.size(); ++a) {
            Clique to;
            if (c.contains(a)) {
                to = c.without(a);
            } else if (alph.is_clique(c.with(a))) {
                to = c.with(a);
            } else {
                continue;
            }
            d.action[from][alph.letter_name(a)] = alph.clique_name(to);
        }
    }
    return d;
}

// N letters on a cycle: neighbours conflict, everything else commutes. N = 5
// is the dining-philosophers model.
inline Alphabet cycle_alphabet(int n) {
    if (n < 2 || n > 20) throw ValidationError("cycle alphabet needs 2..20 letters");
    std::vector<std::string> letters;
    for (int i = 0; i < n; ++i) letters.push_back("a" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int diff = (j - i) % n;
            if (diff != 1 && diff != n - 1) pairs.emplace_back(letters[i], letters[j]);
        }
    return Alphabet::validate(letters, pairs);
}

inline ModelDocument preset_philosophers(int n) { return preset_doubled(cycle_alphabet(n)); }

// Lexicographically smallest word representing a trace: repeatedly pull the
// smallest front-reachable letter.
inline std::string lex_min_word(const Alphabet& alph, const Trace& x) {
    if (x.empty()) return "eps";
    Trace rest = x;
    std::string out;
    while (!rest.empty()) {
        for (int a = 0; a < alph.size(); ++a) {
            Trace copy = rest;
            if (pull_letter(alph, copy, a)) {
                out += alph.letter_name(a);
                rest = copy;
                break;
            }
        }
    }
    return out;
}

// Cyclic-heap system: six letters on a cycle, pieces stacked by the word
// w = 031425. States are the left divisors of w^2 not divisible by w (one
// canonical representative per class), a letter appends when the result still
// divides a power of w.
inline ModelDocument preset_cyc6() {
    std::vector<std::string> letters = {"0", "1", "2", "3", "4", "5"};
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            int diff = (j - i) % 6;
            if (diff != 1 && diff != 5) pairs.emplace_back(letters[i], letters[j]);
        }
    Alphabet alph = Alphabet::validate(letters, pairs);
    const std::vector<int> word = {0, 3, 1, 4, 2, 5};
    Trace w = Trace::from_word(alph, word);
    Trace w2 = concat(alph, w, w);
    Trace w3 = concat(alph, w2, w);

    // left divisors of w^2, keeping those with w not a divisor
    std::vector<Trace> reps;
    {
        std::set<Trace> seen;
        std::vector<Trace> frontier{Trace()};
        seen.insert(Trace());
        while (!frontier.empty()) {
            std::vector<Trace> next;
            for (const Trace& x : frontier)
                for (int a = 0; a < alph.size(); ++a) {
                    Trace xa = x;
                    xa.push_letter(alph, a);
                    if (seen.count(xa) || !left_divides(alph, xa, w2)) continue;
                    seen.insert(xa);
                    next.push_back(xa);
                }
            frontier = std::move(next);
        }
        for (const Trace& x : seen)
            if (!left_divides(alph, w, x)) reps.push_back(x);
    }
    std::vector<std::string> names(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) names[i] = lex_min_word(alph, reps[i]);
    std::vector<int> order(reps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (reps[i].length() != reps[j].length()) return reps[i].length() < reps[j].length();
        return names[i] < names[j];
    });

    ModelDocument d;
    d.letters = letters;
    d.independence = pairs;
    for (int i : order) d.states.push_back(names[i]);
    auto canonical = [&](Trace x) {
        while (left_divides(alph, w, x)) x = left_quotient(alph, w, x);
        return lex_min_word(alph, x);
    };
    for (int i : order) {
        for (int a = 0; a < alph.size(); ++a) {
            Trace xa = reps[i];
            xa.push_letter(alph, a);
            // membership in the divisor set of all powers of w reduces to
            // divisibility of w^3 at these heights
            if (!left_divides(alph, xa, w3)) continue;
            d.action[names[i]][letters[a]] = canonical(xa);
        }
    }
    return d;
}

inline ModelDocument make_preset(const std::string& name, int n = 5,
                                 const Alphabet* doubled_alphabet = nullptr) {
    if (name == "toy") return preset_toy();
    if (name == "dimer") return preset_dimer();
    if (name == "cyc6") return preset_cyc6();
    if (name == "philosophers") return preset_philosophers(n);
    if (name == "free") return preset_free(n);
    if (name == "doubled") {
        if (!doubled_alphabet) throw ValidationError("doubled preset needs an alphabet file");
        return preset_doubled(*doubled_alphabet);
    }
    throw UnknownPreset(name);
}

// Alphabet-only document {letters, independence}, input of the doubled preset.
inline Alphabet load_alphabet(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON");
    try {
        std::vector<std::string> letters;
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& l : j.at("letters")) letters.push_back(l.get<std::string>());
        for (const auto& p : j.at("independence"))
            pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        return Alphabet::validate(letters, pairs);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("alphabet document: ") + e.what());
    }
}

}  // namespace csergo
