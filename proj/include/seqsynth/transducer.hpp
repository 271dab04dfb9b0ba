#pragma once

#include "seqsynth/nfa.hpp"

#include <set>
#include <string>
#include <vector>

namespace seqsynth {

/// Construction record for one transducer transition, names resolved later.
struct TransitionSpec {
    std::string from;
    Symbol input = 0;
    Word output;
    std::string to;
};

struct TransducerSpec {
    Alphabet input_alphabet;
    Alphabet output_alphabet;
    std::vector<std::string> states;
    std::vector<std::string> initials;
    /// final state -> terminal output
    std::vector<std::pair<std::string, Word>> finals;
    std::vector<TransitionSpec> transitions;
};

/// Real-time transducer (A, ρ, τ): an input automaton whose transitions carry
/// output words, plus a terminal output for each accepting state.
class Transducer {
public:
    Transducer() = default;
    explicit Transducer(const TransducerSpec& spec);
    /// outputs[i] belongs to input.transitions()[i]; terminal[q] is read only for finals.
    Transducer(Nfa input, Alphabet output_alphabet, std::vector<Word> outputs, std::vector<Word> terminal);

    const Nfa& input() const noexcept { return input_; }
    const Alphabet& input_alphabet() const noexcept { return input_.alphabet(); }
    const Alphabet& output_alphabet() const noexcept { return output_alphabet_; }
    std::size_t num_states() const noexcept { return input_.num_states(); }
    const std::string& name(StateId q) const { return input_.name(q); }

    const Word& output(std::size_t transition) const { return outputs_.at(transition); }
    const std::vector<Word>& outputs() const noexcept { return outputs_; }
    /// Terminal output of a final state (empty word for non-finals).
    const Word& terminal(StateId q) const { return terminal_.at(q); }

    /// Longest word on a transition.
    std::size_t longest_output() const;

    TransducerSpec to_spec() const;

    friend bool operator==(const Transducer&, const Transducer&) = default;

private:
    Nfa input_;
    Alphabet output_alphabet_;
    std::vector<Word> outputs_;
    std::vector<Word> terminal_;
};

/// A transducer whose input automaton is deterministic.
class SequentialTransducer {
public:
    SequentialTransducer() = default;
    /// Throws NotSequential.
    explicit SequentialTransducer(Transducer t);

    const Transducer& transducer() const noexcept { return t_; }
    operator const Transducer&() const noexcept { return t_; }
    StateId initial() const { return t_.input().initials().front(); }

    /// Index of the unique transition on s from q, if any.
    std::optional<std::size_t> step(StateId q, Symbol s) const;

    struct Run {
        StateId state;
        Word output;
    };
    /// The (unique) run on u from `from`, not necessarily accepting.
    std::optional<Run> run(std::string_view u, std::optional<StateId> from = std::nullopt) const;
    /// Output on u, when u is accepted.
    std::optional<Word> apply(std::string_view u) const;

    friend bool operator==(const SequentialTransducer&, const SequentialTransducer&) = default;

private:
    Transducer t_;
};

/// Ordered list of sequential parts with globally unique state names and
/// shared alphabets; its relation is the union of the parts' graphs.
class MultiSequentialTransducer {
public:
    MultiSequentialTransducer() = default;
    MultiSequentialTransducer(std::vector<SequentialTransducer> parts, std::vector<std::string> names = {});

    std::size_t num_parts() const noexcept { return parts_.size(); }
    const std::vector<SequentialTransducer>& parts() const noexcept { return parts_; }
    const SequentialTransducer& part(std::size_t i) const { return parts_.at(i); }
    const std::string& part_name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& part_names() const noexcept { return names_; }
    const Alphabet& input_alphabet() const { return parts_.front().transducer().input_alphabet(); }
    const Alphabet& output_alphabet() const { return parts_.front().transducer().output_alphabet(); }

    /// The disjoint union as a single transducer; part i occupies the state
    /// range [offset(i), offset(i+1)).
    const Transducer& flat() const noexcept { return flat_; }
    StateId offset(std::size_t part) const { return offsets_.at(part); }
    std::size_t part_of(StateId flat_state) const;

    std::size_t total_states() const { return flat_.num_states(); }
    std::size_t max_part_states() const;

    friend bool operator==(const MultiSequentialTransducer& a, const MultiSequentialTransducer& b)
    {
        return a.parts_ == b.parts_ && a.names_ == b.names_;
    }

private:
    std::vector<SequentialTransducer> parts_;
    std::vector<std::string> names_;
    Transducer flat_;
    std::vector<StateId> offsets_;
};

/// All outputs v·τ(q) of accepting runs on u. Throws UnknownSymbol.
std::set<Word> evaluate(const Transducer& t, std::string_view u);

Transducer disjoint_union(const Transducer& a, const Transducer& b);

Nfa domain_automaton(const Transducer& t);

/// Trims the input automaton, carrying outputs along.
Transducer trim(const Transducer& t);
MultiSequentialTransducer trim(const MultiSequentialTransducer& t);
bool is_trim(const MultiSequentialTransducer& t);

/// Sequential transducer for (u, ℓ)⁻¹⟦d⟧ where q is reached on u and `pending`
/// is what remains of the output after removing ℓ: a fresh initial state copies
/// q's outgoing transitions and terminal output with `pending` prefixed.
SequentialTransducer residual_part(const SequentialTransducer& d, StateId q, const Word& pending);

struct Classification {
    bool sequential = false;
    bool synchronous = false;
    bool functional_on_sample = false;
};

Classification classify(const Transducer& t, std::size_t sample_length = 6);

bool is_synchronous(const Transducer& t);

/// Every word over the alphabet of length <= max_len, in shortlex order.
std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len);

} // namespace seqsynth
