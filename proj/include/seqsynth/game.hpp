#pragma once

// The K-bounded synthesis game. Adam picks input symbols; Eve picks which of
// the runs she keeps, after which the common prefix of the kept pending
// outputs is emitted. Eve loses when the input read so far is accepted by the
// specification but by none of her kept runs.

#include "seqsynth/delay.hpp"
#include "seqsynth/transducer.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace seqsynth {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t default_vertex_cap = 5'000'000;

struct GameOptions {
    std::size_t vertex_cap = default_vertex_cap;
};

struct AdamVertex {
    StateSet reached;   // every state reachable on the input so far (C)
    DelayMap delays;    // kept runs and their pending words (D)

    friend auto operator<=>(const AdamVertex&, const AdamVertex&) = default;
    friend bool operator==(const AdamVertex&, const AdamVertex&) = default;
};

struct EveMove {
    std::vector<std::uint32_t> kept;   // kept groups (parts, or raw candidates)
    std::size_t kept_runs = 0;
    Word output;                       // flushed safe output
    std::uint32_t target = 0;          // Adam vertex
};

struct EveVertex {
    std::uint32_t adam = 0;
    Symbol symbol = 0;
    std::vector<EveMove> moves;
};

/// Explicit arena of the K-game, built breadth-first from the initial vertex.
/// Vertex numbering is canonical, so two builds of the same input agree.
struct GameGraph {
    std::size_t bound = 0;
    Transducer spec;
    /// Part index per flat state; empty when moves are per raw candidate.
    std::vector<std::size_t> part_of_state;
    std::size_t num_parts = 0;

    std::vector<AdamVertex> adam;
    /// adam_succ[v][i] is the Eve vertex after Adam plays the i-th input symbol.
    std::vector<std::vector<std::uint32_t>> adam_succ;
    std::vector<EveVertex> eve;
    std::vector<bool> unsafe;
    std::uint32_t initial = 0;

    std::size_t num_edges() const;
    std::size_t num_unsafe() const;
};

/// Moves are keep/drop decisions per part.
GameGraph build_game(const MultiSequentialTransducer& t, std::size_t bound, const GameOptions& options = {});
/// Moves are arbitrary subsets of the successor candidates.
GameGraph build_game(const Transducer& t, std::size_t bound, const GameOptions& options = {});

/// Positional strategy: chosen move index for each Eve vertex in the winning region.
struct Strategy {
    std::vector<std::optional<std::uint32_t>> moves;
};

struct SafetySolution {
    bool eve_wins = false;
    std::vector<bool> adam_winning;   // Eve wins from this Adam vertex
    std::vector<bool> eve_winning;
    Strategy strategy;
};

/// Attractor computation; the strategy prefers more kept runs, then the least successor.
SafetySolution solve_safety(const GameGraph& g);

/// Sequential realiser whose states are the Adam vertices visited under s.
/// Throws NotWinning if s does not win from the initial vertex.
SequentialTransducer extract_realiser(const GameGraph& g, const Strategy& s);

struct GameStats {
    std::size_t bound = 0;
    std::size_t adam_vertices = 0;
    std::size_t eve_vertices = 0;
    std::size_t edges = 0;
    std::size_t unsafe = 0;
    std::size_t winning_region = 0;
    bool eve_wins = false;
};

GameStats game_stats(const GameGraph& g, const SafetySolution& s);

struct KIteration {
    std::optional<std::size_t> winning_bound;
    std::optional<SequentialTransducer> realiser;
    std::vector<GameStats> history;
};

/// Solves K = 0, 1, ..., k_max and stops at the first win.
KIteration iterate_k(const MultiSequentialTransducer& t, std::size_t k_max, const GameOptions& options = {});
KIteration iterate_k(const Transducer& t, std::size_t k_max, const GameOptions& options = {});

/// 2^m · (m · |Γ|^(K+1))^n, the bound on reachable Adam vertices of an
/// n-sequential input with m states. |Γ| is taken as at least 2.
BigInt adam_vertex_bound(std::size_t states, std::size_t output_symbols, std::size_t bound, std::size_t parts);

std::string describe(const GameGraph& g, const AdamVertex& v);

/// Graphviz text: Adam vertices as boxes, Eve vertices as circles, unsafe bold.
std::string export_dot(const GameGraph& g);

} // namespace seqsynth
