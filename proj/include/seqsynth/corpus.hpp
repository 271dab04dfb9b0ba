#pragma once

// Deterministic generators for the specification families used in tests and
// benchmarks. Every generated state is named family/index/role so generated
// files are byte-stable.

#include "seqsynth/transducer.hpp"

#include <vector>

namespace seqsynth::corpus {

/// Two-part example over {a,b}: D1 accepts words with two a's and rewrites
/// every letter to a; D2 accepts words with a b and rewrites every letter to b.
MultiSequentialTransducer rewrite_pair();
SequentialTransducer rewrite_to_a();   // D1 alone
SequentialTransducer rewrite_to_b();   // D2 alone
/// The same pair over {a,b,c} where both parts also copy c.
MultiSequentialTransducer rewrite_pair_copying_c();

/// Union over i of S_i = {(w #^m σ, w σ #^m) | w ∈ L(A_i)} (two parts) and
/// N_i = {(w #^m σ, w #^m σ) | w ∉ L(A_i)} (one part), σ ∈ {a,b}.
/// Throws AlphabetClash when a DFA uses '#', 'a' or 'b'; InvalidArgument on an empty list.
MultiSequentialTransducer gen_hardness(const std::vector<Nfa>& dfas);

/// χ₁ = 1, χₙ = χₙ₋₁ · n · χₙ₋₁.
std::vector<int> chi(int n);
/// Positions k < k' with u[k] = u[k'] = j and every letter strictly between <= j.
bool has_bad_jpair(const std::vector<int>& u, int j);
bool has_any_bad_jpair(const std::vector<int>& u, int n);

/// Single-character encoding of the pair (i, c) for 1 <= i <= 26, c ∈ {a,b}:
/// (i,a) -> 'A'+i-1, (i,b) -> 'a'+i-1.
Symbol pair_symbol(int i, char c);
int pair_index(Symbol s);
char pair_letter(Symbol s);

/// (n+2)-sequential transducer for {(w, f(w))} ∪ {(w, ε) | w has a bad j-pair},
/// f moving the last letter of π₂(w) to the front.
MultiSequentialTransducer gen_badjpair(int n);

/// Sequential transducer accepting the words having `sub` as a scattered
/// subword and writing `sub`.
SequentialTransducer gen_subword(const Word& sub, const Alphabet& alphabet);
/// Union of gen_subword over every word of the given length.
MultiSequentialTransducer gen_subword_union(std::size_t length, const Alphabet& alphabet);

} // namespace seqsynth::corpus
