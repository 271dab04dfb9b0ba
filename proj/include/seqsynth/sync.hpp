#pragma once

// Exact decision of realisability by a synchronous sequential transducer for
// synchronous multi-sequential specifications.
//
// The procedure walks the synchronised product of the parts. A configuration
// is the set of flat states of the parts still followed, all of which have
// agreed on every output letter so far. When a letter makes the parts
// disagree (or kills some of them) the prefix is critical and a strict subset
// P of the followed parts must be kept such that
//   1. every part of P survives and they emit the same letter,
//   2. P still covers the residual domain, and
//   3. the configuration made of P's successors is itself realisable.
// Realisability of a configuration is memoised, so the recursion visits each
// configuration once.

#include "seqsynth/transducer.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace seqsynth {

enum class PrefixClass { smooth, critical, dead };

std::string_view to_string(PrefixClass c);

/// Smooth: every part runs on u and all outputs agree. Dead: u is not a
/// prefix of a word of the domain. Critical otherwise. Throws UnknownSymbol.
PrefixClass classify_prefix(const MultiSequentialTransducer& t, std::string_view u);

struct CriticalCertificate;

/// Why keeping the parts `subset` after the critical prefix does not work.
struct SubsetFailure {
    std::vector<std::size_t> subset;   // part indices, ascending
    int condition = 0;                 // 1, 2 or 3
    /// Condition 2: a continuation accepted by the followed parts but by no part of the subset.
    std::optional<Word> counterexample;
    /// Condition 3: the kept configuration is unrealisable for this reason.
    std::shared_ptr<const CriticalCertificate> nested;
};

/// A critical prefix at which no strict subset of the followed parts works.
struct CriticalCertificate {
    std::vector<std::size_t> parts;   // parts followed when the sub-problem starts
    StateSet start;                   // their flat states at that point
    Word prefix;                      // critical prefix, read from `start`
    std::vector<SubsetFailure> failures;   // one per non-empty strict subset
};

/// Chosen configuration after a critical letter: (configuration, letter) -> kept successors.
using SyncDecisions = std::map<std::pair<StateSet, Symbol>, StateSet>;

struct SyncVerdict {
    bool realisable = false;
    std::optional<SequentialTransducer> realiser;
    SyncDecisions decisions;
    std::optional<CriticalCertificate> certificate;
};

/// Throws NotSynchronous when a part is not letter-to-letter, NotTrim when a
/// part has useless states.
SyncVerdict check_residual_property(const MultiSequentialTransducer& t);

/// Synchronous realiser over the product configurations reachable under the
/// decisions. Throws InconsistentDecisions when a reached critical letter has
/// no decision or the decision is not a set of agreeing surviving runs.
SequentialTransducer build_sync_realiser(const MultiSequentialTransducer& t, const SyncDecisions& decisions);

} // namespace seqsynth
