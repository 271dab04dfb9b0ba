#pragma once

// Brute-force reference implementations and seeded generators shared by the
// unit and acceptance tests. Nothing here calls the library's algorithms: the
// oracles walk transition lists directly so they can judge the library.

#include "seqsynth/transducer.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using seqsynth::Alphabet;
using seqsynth::Nfa;
using seqsynth::SequentialTransducer;
using seqsynth::StateId;
using seqsynth::Symbol;
using seqsynth::Transducer;
using seqsynth::TransducerSpec;
using seqsynth::Word;

inline std::vector<Word> all_words(const std::string& alphabet, std::size_t max_len)
{
    std::vector<Word> out{""};
    std::vector<Word> layer{""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (char c : alphabet) next.push_back(w + c);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

/// Every accepting run explored by depth-first search over the raw transition list.
inline std::set<Word> run_outputs(const Transducer& t, const Word& u)
{
    std::set<Word> out;
    const auto& a = t.input();
    const auto& tr = a.transitions();
    auto dfs = [&](auto&& self, StateId q, std::size_t pos, const Word& acc) -> void {
        if (pos == u.size()) {
            if (std::find(a.finals().begin(), a.finals().end(), q) != a.finals().end()) out.insert(acc + t.terminal(q));
            return;
        }
        for (std::size_t i = 0; i < tr.size(); ++i)
            if (tr[i].from == q && tr[i].symbol == u[pos]) self(self, tr[i].to, pos + 1, acc + t.output(i));
    };
    for (StateId q : a.initials()) dfs(dfs, q, 0, "");
    return out;
}

inline bool nfa_accepts(const Nfa& a, const Word& w)
{
    std::set<StateId> cur(a.initials().begin(), a.initials().end());
    for (char c : w) {
        std::set<StateId> next;
        for (const auto& t : a.transitions())
            if (cur.count(t.from) && t.symbol == c) next.insert(t.to);
        cur = std::move(next);
    }
    for (StateId q : cur)
        if (std::find(a.finals().begin(), a.finals().end(), q) != a.finals().end()) return true;
    return false;
}

inline Word lcp(const std::vector<Word>& ws)
{
    Word p = ws.front();
    for (const auto& w : ws) {
        std::size_t k = 0;
        while (k < p.size() && k < w.size() && p[k] == w[k]) ++k;
        p.resize(k);
    }
    return p;
}

/// Literal reading: positions k < k' holding j with only letters <= j in between.
inline bool bad_jpair(const std::vector<int>& u, int j)
{
    for (std::size_t k = 0; k < u.size(); ++k)
        for (std::size_t k2 = k + 1; k2 < u.size(); ++k2) {
            if (u[k] != j || u[k2] != j) continue;
            bool ok = true;
            for (std::size_t l = k + 1; l < k2; ++l) ok = ok && u[l] <= j;
            if (ok) return true;
        }
    return false;
}

/// The run of a deterministic transducer from `from` on u, accepting or not.
inline std::optional<std::pair<StateId, Word>> walk(const Transducer& t, StateId from, const Word& u)
{
    StateId q = from;
    Word out;
    for (char c : u) {
        bool moved = false;
        const auto& tr = t.input().transitions();
        for (std::size_t i = 0; i < tr.size() && !moved; ++i)
            if (tr[i].from == q && tr[i].symbol == c) {
                out += t.output(i);
                q = tr[i].to;
                moved = true;
            }
        if (!moved) return std::nullopt;
    }
    return std::make_pair(q, out);
}

inline std::pair<Word, Word> delay2(const Word& x, const Word& y)
{
    const auto l = lcp({x, y}).size();
    return {x.substr(l), y.substr(l)};
}

/// Loop conditions evaluated from scratch: every part of X runs on u to a
/// state looping on v with the recorded outputs, the other parts have no run
/// on u, and some pair changes delay across one and two iterations of v.
inline bool is_critical_loop(const seqsynth::MultiSequentialTransducer& t, const Word& u, const Word& v,
                             const std::vector<std::size_t>& parts, const std::vector<Word>& alpha,
                             const std::vector<Word>& beta)
{
    if (v.empty() || parts.size() != alpha.size() || parts.size() != beta.size()) return false;
    for (std::size_t i = 0; i < t.num_parts(); ++i) {
        const auto& d = t.part(i);
        auto r = walk(d, d.initial(), u);
        const auto pos = std::find(parts.begin(), parts.end(), i);
        if (pos == parts.end()) {
            if (r) return false;
            continue;
        }
        const auto k = static_cast<std::size_t>(pos - parts.begin());
        if (!r || r->second != alpha[k]) return false;
        auto l = walk(d, r->first, v);
        if (!l || l->first != r->first || l->second != beta[k]) return false;
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            const auto d0 = delay2(alpha[i], alpha[j]);
            const auto d1 = delay2(alpha[i] + beta[i], alpha[j] + beta[j]);
            const auto d2 = delay2(alpha[i] + beta[i] + beta[i], alpha[j] + beta[j] + beta[j]);
            if (d0 != d1 && d1 != d2) return true;
        }
    return false;
}

// The two rewriting transducers of the running example, written out by hand.
// D1 accepts b*ab*a(a+b)* and writes a's; D2 accepts a*b(a+b)* and writes b's.
inline SequentialTransducer d1(const std::string& extra = "")
{
    TransducerSpec s;
    s.input_alphabet = Alphabet("ab" + extra);
    s.output_alphabet = Alphabet("ab" + extra);
    s.states = {"1", "2", "3"};
    s.initials = {"1"};
    s.finals = {{"3", ""}};
    s.transitions = {{"1", 'a', "a", "2"}, {"1", 'b', "a", "1"}, {"2", 'a', "a", "3"},
                     {"2", 'b', "a", "2"}, {"3", 'a', "a", "3"}, {"3", 'b', "a", "3"}};
    for (char c : extra)
        for (const char* q : {"1", "2", "3"}) s.transitions.push_back({q, c, std::string(1, c), q});
    return SequentialTransducer(Transducer(s));
}

inline SequentialTransducer d2(const std::string& extra = "")
{
    TransducerSpec s;
    s.input_alphabet = Alphabet("ab" + extra);
    s.output_alphabet = Alphabet("ab" + extra);
    s.states = {"4", "5"};
    s.initials = {"4"};
    s.finals = {{"5", ""}};
    s.transitions = {{"4", 'a', "b", "4"}, {"4", 'b', "b", "5"}, {"5", 'a', "b", "5"}, {"5", 'b', "b", "5"}};
    for (char c : extra)
        for (const char* q : {"4", "5"}) s.transitions.push_back({q, c, std::string(1, c), q});
    return SequentialTransducer(Transducer(s));
}

inline SequentialTransducer renamed(const SequentialTransducer& d, const std::string& prefix)
{
    auto s = d.transducer().to_spec();
    for (auto& q : s.states) q = prefix + q;
    for (auto& q : s.initials) q = prefix + q;
    for (auto& f : s.finals) f.first = prefix + f.first;
    for (auto& tr : s.transitions) {
        tr.from = prefix + tr.from;
        tr.to = prefix + tr.to;
    }
    return SequentialTransducer(Transducer(s));
}

// Seeded generators. Every generator takes the engine explicitly so a failing
// case can be replayed from its seed.
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline Word random_word(Rng& rng, const std::string& alphabet, std::size_t max_len)
{
    Word w;
    const auto len = pick(rng, max_len + 1);
    for (std::size_t i = 0; i < len; ++i) w += alphabet[pick(rng, alphabet.size())];
    return w;
}

inline Nfa random_nfa(Rng& rng, const std::string& alphabet, std::size_t max_states, double density = 0.35)
{
    const auto n = 1 + pick(rng, max_states);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
    std::bernoulli_distribution coin(density), half(0.5);
    std::vector<seqsynth::Transition> tr;
    for (StateId p = 0; p < n; ++p)
        for (char c : alphabet)
            for (StateId q = 0; q < n; ++q)
                if (coin(rng)) tr.push_back({p, c, q});
    std::vector<StateId> init{0}, fin;
    for (StateId q = 0; q < n; ++q) {
        if (q > 0 && pick(rng, 4) == 0) init.push_back(q);
        if (half(rng)) fin.push_back(q);
    }
    return Nfa(Alphabet(alphabet), names, seqsynth::make_state_set(init), seqsynth::make_state_set(fin), tr);
}

/// Deterministic, with outputs of length up to max_out (exactly 1 when synchronous).
inline SequentialTransducer random_sequential(Rng& rng, const std::string& in, const std::string& out,
                                              std::size_t max_states, std::size_t max_out, bool synchronous,
                                              const std::string& prefix = "s")
{
    const auto n = 1 + pick(rng, max_states);
    TransducerSpec s;
    s.input_alphabet = Alphabet(in);
    s.output_alphabet = Alphabet(out);
    for (std::size_t i = 0; i < n; ++i) s.states.push_back(prefix + std::to_string(i));
    s.initials = {s.states[0]};
    for (std::size_t p = 0; p < n; ++p) {
        for (char c : in) {
            if (pick(rng, 4) == 0) continue;
            Word o = synchronous ? random_word(rng, out, 0) + out[pick(rng, out.size())] : random_word(rng, out, max_out);
            s.transitions.push_back({s.states[p], c, o, s.states[pick(rng, n)]});
        }
        if (pick(rng, 2) == 0) s.finals.push_back({s.states[p], synchronous ? "" : random_word(rng, out, max_out)});
    }
    if (s.finals.empty()) s.finals.push_back({s.states[n - 1], ""});
    return SequentialTransducer(Transducer(s));
}

/// A trimmed multi-sequential transducer with at most `parts` parts (parts
/// with an empty domain are dropped by trimming) and a non-empty domain.
inline seqsynth::MultiSequentialTransducer random_multi(Rng& rng, const std::string& in, const std::string& out,
                                                        std::size_t parts, std::size_t max_states,
                                                        std::size_t max_out, bool synchronous)
{
    for (;;) {
        std::vector<SequentialTransducer> ps;
        for (std::size_t i = 0; i < parts; ++i)
            ps.push_back(random_sequential(rng, in, out, max_states, max_out, synchronous, "p" + std::to_string(i) + "_"));
        auto t = seqsynth::trim(seqsynth::MultiSequentialTransducer(ps));
        if (seqsynth::is_trim(t)) return t;   // false only for the empty-domain placeholder
    }
}

} // namespace oracle
