#include "seqsynth/delay.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>

namespace seqsynth {

Word lcp(const Word& a, const Word& b)
{
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    return Word(a.begin(), ia);
}

Word lcp(std::span<const Word> ws)
{
    if (ws.empty()) throw Error(ErrorKind::empty_list, "lcp of an empty list");
    Word acc = ws.front();
    for (const auto& w : ws.subspan(1)) {
        auto [ia, ib] = std::mismatch(acc.begin(), acc.end(), w.begin(), w.end());
        acc.erase(ia, acc.end());
    }
    return acc;
}

std::vector<Word> delay(std::span<const Word> ws)
{
    const auto prefix = lcp(ws).size();
    std::vector<Word> out;
    out.reserve(ws.size());
    for (const auto& w : ws) out.push_back(w.substr(prefix));
    return out;
}

DelayMap::DelayMap(std::vector<std::pair<StateId, Word>> entries) : entries_(std::move(entries))
{
    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

StateSet DelayMap::live() const
{
    StateSet out;
    for (const auto& [q, w] : entries_)
        if (out.empty() || out.back() != q) out.push_back(q);
    return out;
}

std::vector<Word> DelayMap::pending(StateId q) const
{
    std::vector<Word> out;
    for (const auto& [p, w] : entries_)
        if (p == q) out.push_back(w);
    return out;
}

std::size_t DelayMap::longest_pending() const
{
    std::size_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.second.size());
    return m;
}

DelayMap initial_delay_map(const Transducer& t)
{
    std::vector<std::pair<StateId, Word>> e;
    for (auto q : t.input().initials()) e.emplace_back(q, Word{});
    return DelayMap(std::move(e));
}

std::vector<Candidate> candidates(const Transducer& t, const DelayMap& d, Symbol s)
{
    if (!t.input_alphabet().contains(s))
        throw Error(ErrorKind::unknown_symbol, std::string("symbol '") + s + "' not in alphabet");
    std::vector<Candidate> out;
    for (const auto& [q, w] : d.entries())
        for (auto i : t.input().outgoing(q, s))
            out.push_back({t.input().transitions()[i].to, w + t.output(i), q, w, i});
    std::sort(out.begin(), out.end());
    return out;
}

Flush flush(std::span<const Candidate> cs)
{
    if (cs.empty()) return {};
    std::vector<Word> words;
    words.reserve(cs.size());
    for (const auto& c : cs) words.push_back(c.word);
    Flush f;
    f.safe_output = lcp(words);
    std::vector<std::pair<StateId, Word>> e;
    for (const auto& c : cs) e.emplace_back(c.target, c.word.substr(f.safe_output.size()));
    f.next = DelayMap(std::move(e));
    return f;
}

} // namespace seqsynth
