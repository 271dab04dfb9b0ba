#pragma once

// Finite automata over finite words: the constructions the rest of the
// library builds on (trim, product, subset construction, inclusion,
// residuals).

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqsynth {

using Symbol = char;
using Word = std::string;
using StateId = std::uint32_t;

/// Sorted set of distinct single-character symbols. Never empty.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Symbol> symbols);
    explicit Alphabet(std::string_view symbols);

    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool contains(Symbol s) const noexcept;
    bool contains_word(std::string_view w) const noexcept;
    std::string to_string() const { return {symbols_.begin(), symbols_.end()}; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<Symbol> symbols_;
};

struct Transition {
    StateId from = 0;
    Symbol symbol = 0;
    StateId to = 0;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Sorted, duplicate-free list of state identifiers.
using StateSet = std::vector<StateId>;

class Nfa {
public:
    Nfa() = default;

    /// Transitions are sorted and deduplicated; the index of a transition in
    /// transitions() is stable for the lifetime of the automaton.
    Nfa(Alphabet alphabet,
        std::vector<std::string> state_names,
        StateSet initials,
        StateSet finals,
        std::vector<Transition> transitions);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t num_states() const noexcept { return names_.size(); }
    const std::vector<std::string>& state_names() const noexcept { return names_; }
    const std::string& name(StateId q) const { return names_.at(q); }
    std::optional<StateId> find_state(std::string_view name) const;

    const StateSet& initials() const noexcept { return initials_; }
    const StateSet& finals() const noexcept { return finals_; }
    bool is_initial(StateId q) const;
    bool is_final(StateId q) const { return final_flags_.at(q); }

    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    /// Indices into transitions() of the transitions leaving q, ordered by
    /// (symbol, target).
    std::span<const std::size_t> outgoing(StateId q) const;
    /// Indices of transitions leaving q labelled by s.
    std::span<const std::size_t> outgoing(StateId q, Symbol s) const;

    bool is_deterministic() const;

    friend bool operator==(const Nfa& a, const Nfa& b)
    {
        return a.alphabet_ == b.alphabet_ && a.names_ == b.names_ && a.initials_ == b.initials_
            && a.finals_ == b.finals_ && a.transitions_ == b.transitions_;
    }

private:
    Alphabet alphabet_;
    std::vector<std::string> names_;
    StateSet initials_;
    StateSet finals_;
    std::vector<Transition> transitions_;
    std::vector<bool> final_flags_;
    // CSR index over transitions_ by source state.
    std::vector<std::size_t> out_begin_;
    std::vector<std::size_t> out_index_;
};

/// Image of a state set under one symbol.
StateSet post(const Nfa& a, const StateSet& from, Symbol s);
/// States reached from the initial states on w. Throws UnknownSymbol.
StateSet reach(const Nfa& a, std::string_view w);
StateSet reach_from(const Nfa& a, const StateSet& from, std::string_view w);
bool intersects_finals(const Nfa& a, const StateSet& s);

bool accepts(const Nfa& a, std::string_view w);

/// Removes every state that is not both reachable and co-reachable.
/// An automaton with empty language trims to zero states.
Nfa trim(const Nfa& a);
bool is_trim(const Nfa& a);

/// Subset construction restricted to reachable non-empty macrostates.
/// Macrostates are named "{q1,q2,...}" after their sorted members.
Nfa determinize(const Nfa& a);

Nfa complement(const Nfa& a);

enum class ProductMode { intersection, union_tracking };

/// Synchronised product. In union_tracking mode a side may be absent ("-")
/// so the result accepts L(a) ∪ L(b).
Nfa product(const Nfa& a, const Nfa& b, ProductMode mode);

/// State-disjoint union; names are kept when disjoint, prefixed "1:"/"2:" otherwise.
Nfa disjoint_union(const Nfa& a, const Nfa& b);

/// Returns nullopt when L(b) ⊆ L(a); otherwise the shortlex-least word of L(b) \ L(a).
std::optional<Word> includes(const Nfa& a, const Nfa& b);

bool is_empty(const Nfa& a);
/// Shortlex-least accepted word, if any.
std::optional<Word> shortest_word(const Nfa& a);

/// The automaton a with its initial states replaced by s.
Nfa residual_from(const Nfa& a, const StateSet& s);

/// Normalises an arbitrary list of states into a StateSet.
StateSet make_state_set(std::vector<StateId> states);

} // namespace seqsynth
