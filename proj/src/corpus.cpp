#include "seqsynth/corpus.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>

namespace seqsynth::corpus {

namespace {

TransducerSpec rewrite_spec(const Alphabet& in, bool copy_c, char letter)
{
    // letter 'a': states 1 -a-> 2 -a-> 3 (final), b rewritten to a.
    // letter 'b': states 4 -b-> 5 (final), a rewritten to b.
    TransducerSpec s{in, in, {}, {}, {}, {}};
    if (letter == 'a') {
        s.states = {"1", "2", "3"};
        s.initials = {"1"};
        s.finals = {{"3", ""}};
        s.transitions = {{"1", 'a', "a", "2"}, {"1", 'b', "a", "1"}, {"2", 'a', "a", "3"},
                         {"2", 'b', "a", "2"}, {"3", 'a', "a", "3"}, {"3", 'b', "a", "3"}};
        if (copy_c)
            for (const char* q : {"1", "2", "3"}) s.transitions.push_back({q, 'c', "c", q});
    } else {
        s.states = {"4", "5"};
        s.initials = {"4"};
        s.finals = {{"5", ""}};
        s.transitions = {{"4", 'a', "b", "4"}, {"4", 'b', "b", "5"}, {"5", 'a', "b", "5"}, {"5", 'b', "b", "5"}};
        if (copy_c)
            for (const char* q : {"4", "5"}) s.transitions.push_back({q, 'c', "c", q});
    }
    return s;
}

} // namespace

SequentialTransducer rewrite_to_a()
{
    return SequentialTransducer(Transducer(rewrite_spec(Alphabet("ab"), false, 'a')));
}

SequentialTransducer rewrite_to_b()
{
    return SequentialTransducer(Transducer(rewrite_spec(Alphabet("ab"), false, 'b')));
}

MultiSequentialTransducer rewrite_pair()
{
    return MultiSequentialTransducer({rewrite_to_a(), rewrite_to_b()}, {"D1", "D2"});
}

MultiSequentialTransducer rewrite_pair_copying_c()
{
    Alphabet abc("abc");
    return MultiSequentialTransducer({SequentialTransducer(Transducer(rewrite_spec(abc, true, 'a'))),
                                      SequentialTransducer(Transducer(rewrite_spec(abc, true, 'b')))},
                                     {"D1'", "D2'"});
}

// ---------------------------------------------------------------- hardness

MultiSequentialTransducer gen_hardness(const std::vector<Nfa>& dfas)
{
    if (dfas.empty()) throw Error(ErrorKind::invalid_argument, "hardness family needs at least one DFA");
    const auto& sigma = dfas.front().alphabet();
    for (const auto& d : dfas) {
        if (d.alphabet() != sigma) throw Error(ErrorKind::alphabet_mismatch, "DFAs must share an alphabet");
        if (!d.is_deterministic()) throw Error(ErrorKind::invalid_argument, "hardness family expects DFAs");
    }
    for (char reserved : {'#', 'a', 'b'})
        if (sigma.contains(reserved))
            throw Error(ErrorKind::alphabet_clash, std::string("DFA alphabet uses reserved symbol '") + reserved + "'");

    auto symbols = sigma.symbols();
    symbols.insert(symbols.end(), {'#', 'a', 'b'});
    const Alphabet full(symbols);

    std::vector<SequentialTransducer> parts;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < dfas.size(); ++i) {
        const auto& d = dfas[i];
        const std::string idx = std::to_string(i + 1);
        // Complete the DFA with a sink so non-membership is observable.
        const std::string sink = "sink";
        bool needs_sink = false;
        for (StateId q = 0; q < d.num_states(); ++q)
            for (Symbol s : sigma.symbols())
                if (d.outgoing(q, s).empty()) needs_sink = true;

        auto add_copy = [&](TransducerSpec& spec, const std::string& prefix) {
            for (StateId q = 0; q < d.num_states(); ++q) spec.states.push_back(prefix + d.name(q));
            if (needs_sink) spec.states.push_back(prefix + sink);
            spec.initials = {prefix + d.name(d.initials().front())};
            for (StateId q = 0; q < d.num_states(); ++q)
                for (Symbol s : sigma.symbols()) {
                    auto out = d.outgoing(q, s);
                    std::string to = out.empty() ? prefix + sink : prefix + d.name(d.transitions()[out.front()].to);
                    spec.transitions.push_back({prefix + d.name(q), s, std::string(1, s), to});
                }
            if (needs_sink)
                for (Symbol s : sigma.symbols())
                    spec.transitions.push_back({prefix + sink, s, std::string(1, s), prefix + sink});
        };
        auto member_states = [&](bool accepted) {
            std::vector<std::string> out;
            for (StateId q = 0; q < d.num_states(); ++q)
                if (d.is_final(q) == accepted) out.push_back(d.name(q));
            if (needs_sink && !accepted) out.push_back(sink);
            return out;
        };

        for (char sig : {'a', 'b'}) {
            const std::string prefix = "hd/" + idx + "/S" + sig + "/";
            TransducerSpec spec{full, full, {}, {}, {}, {}};
            add_copy(spec, prefix);
            const std::string hash = prefix + "hash", end = prefix + "end";
            spec.states.push_back(hash);
            spec.states.push_back(end);
            for (const auto& q : member_states(true)) {
                spec.transitions.push_back({prefix + q, '#', std::string(1, sig), hash});
                spec.transitions.push_back({prefix + q, sig, std::string(1, sig), end});
            }
            spec.transitions.push_back({hash, '#', "#", hash});
            spec.transitions.push_back({hash, sig, "#", end});
            spec.finals = {{end, ""}};
            parts.emplace_back(trim(Transducer(spec)));
            names.push_back("S" + idx + sig);
        }
        {
            const std::string prefix = "hd/" + idx + "/N/";
            TransducerSpec spec{full, full, {}, {}, {}, {}};
            add_copy(spec, prefix);
            const std::string hash = prefix + "hash", end = prefix + "end";
            spec.states.push_back(hash);
            spec.states.push_back(end);
            for (const auto& q : member_states(false)) {
                spec.transitions.push_back({prefix + q, '#', "#", hash});
                spec.transitions.push_back({prefix + q, 'a', "a", end});
                spec.transitions.push_back({prefix + q, 'b', "b", end});
            }
            spec.transitions.push_back({hash, '#', "#", hash});
            spec.transitions.push_back({hash, 'a', "a", end});
            spec.transitions.push_back({hash, 'b', "b", end});
            spec.finals = {{end, ""}};
            auto t = trim(Transducer(spec));
            // A DFA accepting everything leaves N_i with an empty domain.
            if (t.num_states() == 0) continue;
            parts.emplace_back(std::move(t));
            names.push_back("N" + idx);
        }
    }
    return MultiSequentialTransducer(std::move(parts), std::move(names));
}

// ---------------------------------------------------------------- bad j-pairs

std::vector<int> chi(int n)
{
    if (n < 1) throw Error(ErrorKind::invalid_argument, "chi needs n >= 1");
    std::vector<int> w{1};
    for (int k = 2; k <= n; ++k) {
        std::vector<int> next = w;
        next.push_back(k);
        next.insert(next.end(), w.begin(), w.end());
        w = std::move(next);
    }
    return w;
}

bool has_bad_jpair(const std::vector<int>& u, int j)
{
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] != j) continue;
        for (std::size_t k2 = k + 1; k2 < u.size(); ++k2) {
            if (u[k2] == j) return true;
            if (u[k2] > j) break;
        }
    }
    return false;
}

bool has_any_bad_jpair(const std::vector<int>& u, int n)
{
    for (int j = 1; j <= n; ++j)
        if (has_bad_jpair(u, j)) return true;
    return false;
}

Symbol pair_symbol(int i, char c)
{
    if (i < 1 || i > 26 || (c != 'a' && c != 'b'))
        throw Error(ErrorKind::invalid_argument, "pair symbol out of range");
    return static_cast<Symbol>((c == 'a' ? 'A' : 'a') + i - 1);
}

int pair_index(Symbol s)
{
    return s >= 'a' ? s - 'a' + 1 : s - 'A' + 1;
}

char pair_letter(Symbol s)
{
    return s >= 'a' ? 'b' : 'a';
}

MultiSequentialTransducer gen_badjpair(int n)
{
    if (n < 1 || n > 26) throw Error(ErrorKind::invalid_argument, "bad j-pair family needs 1 <= n <= 26");
    std::vector<Symbol> symbols;
    for (int i = 1; i <= n; ++i) {
        symbols.push_back(pair_symbol(i, 'a'));
        symbols.push_back(pair_symbol(i, 'b'));
    }
    const Alphabet in(symbols);
    const Alphabet out("ab");

    std::vector<SequentialTransducer> parts;
    std::vector<std::string> names;
    // f_σ: guess that the last letter is σ, write it first, then replay the
    // second components one step late.
    for (char guess : {'a', 'b'}) {
        const std::string p = std::string("bj/f") + guess + "/";
        TransducerSpec spec{in, out, {p + "init", p + "a", p + "b"}, {p + "init"}, {{p + guess, ""}}, {}};
        for (Symbol s : in.symbols()) {
            const std::string to = p + pair_letter(s);
            spec.transitions.push_back({p + "init", s, std::string(1, guess), to});
            spec.transitions.push_back({p + "a", s, "a", to});
            spec.transitions.push_back({p + "b", s, "b", to});
        }
        parts.emplace_back(Transducer(spec));
        names.push_back(std::string("f") + guess);
    }
    for (int j = 1; j <= n; ++j) {
        const std::string p = "bj/j" + std::to_string(j) + "/";
        TransducerSpec spec{in, out, {p + "none", p + "open", p + "found"}, {p + "none"}, {{p + "found", ""}}, {}};
        for (Symbol s : in.symbols()) {
            const int i = pair_index(s);
            spec.transitions.push_back({p + "none", s, "", i == j ? p + "open" : p + "none"});
            spec.transitions.push_back(
                {p + "open", s, "", i == j ? p + "found" : (i < j ? p + "open" : p + "none")});
            spec.transitions.push_back({p + "found", s, "", p + "found"});
        }
        parts.emplace_back(Transducer(spec));
        names.push_back("bad" + std::to_string(j));
    }
    return MultiSequentialTransducer(std::move(parts), std::move(names));
}

// ---------------------------------------------------------------- subwords

SequentialTransducer gen_subword(const Word& sub, const Alphabet& alphabet)
{
    if (sub.empty() || !alphabet.contains_word(sub))
        throw Error(ErrorKind::invalid_argument, "subword must be a non-empty word over the alphabet");
    const std::string p = "sw/" + sub + "/";
    TransducerSpec spec{alphabet, alphabet, {}, {p + "0"}, {{p + std::to_string(sub.size()), ""}}, {}};
    for (std::size_t k = 0; k <= sub.size(); ++k) spec.states.push_back(p + std::to_string(k));
    for (std::size_t k = 0; k <= sub.size(); ++k)
        for (Symbol s : alphabet.symbols()) {
            if (k < sub.size() && s == sub[k])
                spec.transitions.push_back({p + std::to_string(k), s, std::string(1, s), p + std::to_string(k + 1)});
            else
                spec.transitions.push_back({p + std::to_string(k), s, "", p + std::to_string(k)});
        }
    return SequentialTransducer(Transducer(spec));
}

MultiSequentialTransducer gen_subword_union(std::size_t length, const Alphabet& alphabet)
{
    if (length == 0) throw Error(ErrorKind::invalid_argument, "subword length must be positive");
    std::vector<SequentialTransducer> parts;
    std::vector<std::string> names;
    for (const auto& w : words_up_to(alphabet, length)) {
        if (w.size() != length) continue;
        parts.push_back(gen_subword(w, alphabet));
        names.push_back("sub_" + w);
    }
    return MultiSequentialTransducer(std::move(parts), std::move(names));
}

} // namespace seqsynth::corpus
