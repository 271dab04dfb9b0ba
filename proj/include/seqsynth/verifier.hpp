#pragma once

// Independent checks of realisers and unrealisability certificates. Nothing
// here trusts the procedures that produced the object under test: runs are
// recomputed, inclusions re-decided and witness words re-evaluated.

#include "seqsynth/async.hpp"
#include "seqsynth/sync.hpp"
#include "seqsynth/transducer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace seqsynth {

struct DomainCheck {
    bool ok = false;
    /// Shortlex-least word in exactly one of the two domains.
    std::optional<Word> counterexample;
};

/// dom(r) = dom(t), decided exactly. Throws AlphabetMismatch.
DomainCheck verify_domain(const Transducer& r, const Transducer& t);

struct MembershipCheck {
    bool ok = false;
    std::optional<Word> failing;
    std::string reason;
    std::size_t words_checked = 0;
};

/// For every u in dom(t) with |u| <= max_len, r(u) is defined and belongs to
/// ⟦t⟧(u). Inputs outside dom(t) are not constrained here.
MembershipCheck verify_membership(const SequentialTransducer& r, const Transducer& t, std::size_t max_len);

enum class HorizonMode { sync, async };

/// Whether some output strategy satisfies ⟦t⟧ on every domain word of length
/// <= horizon. In sync mode the strategy emits one letter per input letter
/// and requires a synchronous t (NotSynchronous otherwise); infeasibility then
/// proves that no synchronous sequential realiser exists. In async mode the
/// realiser's terminal output can absorb any finite amount of look-ahead, so
/// every horizon is feasible as soon as each domain word has an output.
/// Throws BudgetExceeded past `max_states` explored strategy states.
bool horizon_oracle(const Transducer& t, std::size_t horizon, HorizonMode mode, std::size_t max_states = 2'000'000);

struct VerificationReport {
    DomainCheck domain;
    MembershipCheck membership;
    std::vector<std::pair<std::size_t, bool>> horizon;   // (L, feasible)
    bool ok() const { return domain.ok && membership.ok; }
};

VerificationReport verify_realiser(const SequentialTransducer& r, const Transducer& t, std::size_t max_len);

struct WitnessCheck {
    bool ok = false;
    int condition = 0;    // first violated condition (1..6), 0 when ok
    std::string detail;
};

/// Re-establishes the six witness conditions: (1) the root holds every part;
/// (2) the dead/looping split and the stored run outputs match a recomputation;
/// (3) children hold strict subsets of the looping parts and extend u;
/// (4) the children partition the looping parts; (5) parts in different
/// children have delays that provably diverge; (6) each leaf's word is accepted
/// by the specification after u and by none of the leaf's parts.
WitnessCheck check_witness(const MultiSequentialTransducer& t, const WitnessNode& root);

/// Direct re-verification of a loop: runs on u, u·v and u·v·v, the loop
/// returning to the same state, the absence of runs outside X, and a pair whose
/// delay changes across the loop and keeps growing on the second iteration.
bool verify_critical_loop(const MultiSequentialTransducer& t, const CriticalLoop& loop);

struct CertificateCheck {
    bool ok = false;
    std::string detail;
};

/// Re-checks a synchronous unrealisability certificate: the prefix is critical
/// for the followed parts, every strict subset is listed, and each recorded
/// failure holds (condition-2 words re-evaluated, condition-3 certificates
/// checked recursively).
CertificateCheck check_sync_certificate(const MultiSequentialTransducer& t, const CriticalCertificate& cert);

} // namespace seqsynth
