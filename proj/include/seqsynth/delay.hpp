#pragma once

// Delay arithmetic: longest common prefixes, delay tuples, the successor
// candidates of a delay map and the flush step that emits safe output.

#include "seqsynth/transducer.hpp"

#include <compare>
#include <span>
#include <utility>
#include <vector>

namespace seqsynth {

/// Longest word prefixing every element. Throws EmptyList.
Word lcp(std::span<const Word> ws);
Word lcp(const Word& a, const Word& b);

/// (ℓ⁻¹w) for every w, with ℓ = lcp(ws). Throws EmptyList.
std::vector<Word> delay(std::span<const Word> ws);

/// Mapping state -> set of pending words, stored as a sorted list of
/// (state, word) pairs. States without entries are not live.
class DelayMap {
public:
    DelayMap() = default;
    explicit DelayMap(std::vector<std::pair<StateId, Word>> entries);

    const std::vector<std::pair<StateId, Word>>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    /// States with a non-empty set of pending words, ascending.
    StateSet live() const;
    std::vector<Word> pending(StateId q) const;
    std::size_t longest_pending() const;

    friend auto operator<=>(const DelayMap&, const DelayMap&) = default;
    friend bool operator==(const DelayMap&, const DelayMap&) = default;

private:
    std::vector<std::pair<StateId, Word>> entries_;
};

/// D0: ε pending at every initial state.
DelayMap initial_delay_map(const Transducer& t);

struct Candidate {
    StateId target = 0;
    Word word;              // pending · ρ(transition), before flushing
    StateId source = 0;
    Word source_pending;
    std::size_t transition = 0;

    friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

/// One candidate per (live state, pending word, σ-transition), sorted.
std::vector<Candidate> candidates(const Transducer& t, const DelayMap& d, Symbol s);

struct Flush {
    Word safe_output;
    DelayMap next;
};

/// Emits the common prefix of the candidate words and keeps the remainders.
Flush flush(std::span<const Candidate> cs);

} // namespace seqsynth
