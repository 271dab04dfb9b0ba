#pragma once

// Asynchronous realisability of multi-sequential specifications.
//
// Positive answers come from the delay game (the first K at which Eve wins).
// Negative answers come from a bounded search for witness trees, which are
// re-checked by the verifier before being reported. When neither search
// concludes within its bounds the verdict is unknown.

#include "seqsynth/game.hpp"
#include "seqsynth/transducer.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace seqsynth {

/// (u, v, X): every part of X runs on u to q_i producing α_i and loops on v
/// at q_i producing β_i, every other part has no run on u, and some pair of
/// parts has a different delay before and after the loop.
struct CriticalLoop {
    Word u;
    Word v;
    std::vector<std::size_t> parts;   // X, ascending part indices
    std::vector<Word> alpha;          // aligned with parts
    std::vector<Word> beta;
    std::vector<StateId> state;       // q_i, local to its part
};

/// Every critical loop with |u| <= max_u and 1 <= |v| <= max_v, in shortlex
/// order of (u, v). Throws InvalidArgument for zero bounds, BudgetExceeded
/// when the enumeration would exceed `max_pairs` (u, v) pairs.
std::vector<CriticalLoop> find_critical_loops(const MultiSequentialTransducer& t, std::size_t max_u,
                                              std::size_t max_v, std::size_t max_pairs = 10'000'000);

/// The part run data of a loop, recomputed from the words. Nullopt when u, v
/// do not describe a critical loop of t.
std::optional<CriticalLoop> make_critical_loop(const MultiSequentialTransducer& t, const Word& u, const Word& v);

/// Bounds of the witness search.
struct WitnessBounds {
    std::size_t max_u = 4;
    std::size_t max_v = 4;
    std::size_t max_nodes = 7;
};

/// Node labelled (u, v, S). Parts of S are split into `dead` (no run on u) and
/// `looping` (run on u reaching a state that loops on v). Leaves carry a
/// continuation accepted by the specification but by no part of S.
struct WitnessNode {
    Word u;
    Word v;
    std::vector<std::size_t> parts;     // S
    std::vector<std::size_t> dead;      // N
    std::vector<std::size_t> looping;   // L
    std::vector<Word> alpha;            // aligned with looping
    std::vector<Word> beta;
    std::vector<StateId> state;         // loop state, local to its part
    std::optional<Word> leaf_word;
    std::vector<WitnessNode> children;

    std::size_t size() const;
    friend bool operator==(const WitnessNode&, const WitnessNode&) = default;
};

/// Smallest witness (by node count, then canonical search order) within the
/// bounds, or nullopt. Throws NotTrim.
std::optional<WitnessNode> search_witness(const MultiSequentialTransducer& t, const WitnessBounds& bounds = {});

/// L · (6M)^(n²).
BigInt theoretical_K(const MultiSequentialTransducer& t);

enum class Verdict { realisable, unrealisable, unknown };

std::string_view to_string(Verdict v);

struct DecideOptions {
    std::size_t k_max = 4;
    WitnessBounds witness;
    GameOptions game;
};

struct AsyncVerdict {
    Verdict verdict = Verdict::unknown;
    std::optional<std::size_t> winning_bound;
    std::optional<SequentialTransducer> realiser;
    std::optional<WitnessNode> witness;
    std::vector<GameStats> games;
    /// Largest K whose game was solved; nullopt when none was.
    std::optional<std::size_t> k_reached;
    bool budget_exceeded = false;
    DecideOptions options;
};

/// Game first for K = 0..min(k_max, theoretical_K), then the witness search.
AsyncVerdict decide(const MultiSequentialTransducer& t, const DecideOptions& options = {});

enum class CharacterisationStatus { subset_found, no_valid_subset, unknown };

struct CharacterisationResult {
    CharacterisationStatus status = CharacterisationStatus::unknown;
    std::vector<std::size_t> subset;   // Y when found
    /// For each tried Y: 0 when it works, else the first failing condition (1, 2 or 3).
    /// Condition 3 answered unknown is reported as -3.
    std::vector<std::pair<std::vector<std::size_t>, int>> tried;
};

/// Searches a strict subset Y of the loop's parts with pairwise stable
/// delays, covering the residual domain after u, and whose residual
/// specification is realisable (decided recursively with halved budgets).
/// Throws InvalidLoop when `loop` is not a critical loop of t.
CharacterisationResult check_characterisation(const MultiSequentialTransducer& t, const CriticalLoop& loop,
                                              const DecideOptions& options = {});

/// The residual specification of the parts Y after the loop prefix u, each
/// part starting at q_i with pending ℓ⁻¹α_i where ℓ is the common prefix of
/// the α over all of X.
MultiSequentialTransducer residual_specification(const MultiSequentialTransducer& t, const CriticalLoop& loop,
                                                 const std::vector<std::size_t>& subset);

/// Condition 5 of witness trees for a pair of looping parts.
bool delays_differ(const Word& alpha_i, const Word& beta_i, const Word& alpha_j, const Word& beta_j);

/// True when u and v have a position where both are defined and differ.
bool mismatch(std::string_view u, std::string_view v);

} // namespace seqsynth
