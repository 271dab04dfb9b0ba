#include "seqsynth/sync.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>
#include <deque>

namespace seqsynth {

std::string_view to_string(PrefixClass c)
{
    switch (c) {
    case PrefixClass::smooth: return "smooth";
    case PrefixClass::critical: return "critical";
    case PrefixClass::dead: return "dead";
    }
    return "?";
}

PrefixClass classify_prefix(const MultiSequentialTransducer& t, std::string_view u)
{
    const auto& flat = t.flat();
    if (!flat.input_alphabet().contains_word(u))
        throw Error(ErrorKind::unknown_symbol, "prefix uses a symbol outside the input alphabet");
    auto reached = reach(flat.input(), u);
    if (is_empty(residual_from(flat.input(), reached))) return PrefixClass::dead;
    std::optional<Word> common;
    for (const auto& p : t.parts()) {
        auto r = p.run(u);
        if (!r) return PrefixClass::critical;
        if (common && *common != r->output) return PrefixClass::critical;
        common = r->output;
    }
    return PrefixClass::smooth;
}

namespace {

/// Successor of one followed run on a letter.
struct RunStep {
    StateId from = 0;
    std::optional<StateId> to;
    Symbol out = 0;
};

class SyncSolver {
public:
    explicit SyncSolver(const MultiSequentialTransducer& t) : t_(t), flat_(t.flat()) {}

    /// Null when the configuration is realisable.
    std::shared_ptr<const CriticalCertificate> solve(const StateSet& config)
    {
        if (auto it = memo_.find(config); it != memo_.end()) return it->second;

        std::map<StateSet, std::pair<StateSet, Symbol>> parent;
        std::deque<StateSet> queue{config};
        parent.emplace(config, std::pair<StateSet, Symbol>{{}, 0});
        std::shared_ptr<const CriticalCertificate> failure;

        while (!queue.empty() && !failure) {
            StateSet cur = queue.front();
            queue.pop_front();
            for (Symbol s : flat_.input_alphabet().symbols()) {
                auto steps = step(cur, s);
                const bool any_alive = std::any_of(steps.begin(), steps.end(), [](const RunStep& r) { return r.to; });
                if (!any_alive) continue;
                if (is_smooth(steps)) {
                    StateSet next;
                    for (const auto& r : steps) next.push_back(*r.to);
                    next = make_state_set(std::move(next));
                    if (parent.emplace(next, std::pair{cur, s}).second) queue.push_back(std::move(next));
                    continue;
                }
                if (auto kept = choose(steps)) {
                    decisions_[{cur, s}] = *kept;
                    continue;
                }
                Word prefix(1, s);
                for (StateSet x = cur; x != config;) {
                    const auto& [px, ps] = parent.at(x);
                    prefix.insert(prefix.begin(), ps);
                    x = px;
                }
                failure = certify(config, prefix, steps);
                break;
            }
        }
        memo_[config] = failure;
        return failure;
    }

    SyncDecisions take_decisions() { return std::move(decisions_); }

private:
    std::vector<RunStep> step(const StateSet& config, Symbol s) const
    {
        std::vector<RunStep> out;
        for (auto q : config) {
            RunStep r{q, std::nullopt, 0};
            auto idx = flat_.input().outgoing(q, s);
            if (!idx.empty()) {
                r.to = flat_.input().transitions()[idx.front()].to;
                r.out = flat_.output(idx.front()).front();
            }
            out.push_back(r);
        }
        return out;
    }

    static bool is_smooth(const std::vector<RunStep>& steps)
    {
        for (const auto& r : steps)
            if (!r.to || r.out != steps.front().out) return false;
        return true;
    }

    /// Non-empty strict subsets of positions, larger first, then lexicographic.
    static std::vector<std::vector<std::size_t>> strict_subsets(std::size_t n)
    {
        std::vector<std::vector<std::size_t>> out;
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1U) s.push_back(i);
            out.push_back(std::move(s));
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() > b.size();
            return a < b;
        });
        return out;
    }

    // Checks conditions 1, 2 and 3 in order for the subset; returns the first failure (0 if none).
    int check_subset(const std::vector<RunStep>& steps, const std::vector<std::size_t>& subset, StateSet& kept,
                     std::optional<Word>& counterexample, std::shared_ptr<const CriticalCertificate>& nested)
    {
        kept.clear();
        for (auto i : subset) {
            if (!steps[i].to || steps[i].out != steps[subset.front()].out) return 1;
            kept.push_back(*steps[i].to);
        }
        kept = make_state_set(std::move(kept));
        StateSet alive;
        for (const auto& r : steps)
            if (r.to) alive.push_back(*r.to);
        alive = make_state_set(std::move(alive));
        counterexample = includes(residual_from(flat_.input(), kept), residual_from(flat_.input(), alive));
        if (counterexample) return 2;
        nested = solve(kept);
        if (nested) return 3;
        return 0;
    }

    std::optional<StateSet> choose(const std::vector<RunStep>& steps)
    {
        for (const auto& subset : strict_subsets(steps.size())) {
            StateSet kept;
            std::optional<Word> cex;
            std::shared_ptr<const CriticalCertificate> nested;
            if (check_subset(steps, subset, kept, cex, nested) == 0) return kept;
        }
        return std::nullopt;
    }

    std::shared_ptr<const CriticalCertificate> certify(const StateSet& config, const Word& prefix,
                                                       const std::vector<RunStep>& steps)
    {
        auto cert = std::make_shared<CriticalCertificate>();
        cert->start = config;
        for (auto q : config) cert->parts.push_back(t_.part_of(q));
        cert->prefix = prefix;
        auto subsets = strict_subsets(steps.size());
        std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        for (const auto& subset : subsets) {
            SubsetFailure f;
            for (auto i : subset) f.subset.push_back(cert->parts[i]);
            StateSet kept;
            f.condition = check_subset(steps, subset, kept, f.counterexample, f.nested);
            if (f.condition == 0)
                throw Error(ErrorKind::inconsistent_decisions, "certificate subset unexpectedly succeeds");
            if (f.condition != 2) f.counterexample.reset();
            if (f.condition != 3) f.nested.reset();
            cert->failures.push_back(std::move(f));
        }
        return cert;
    }

    const MultiSequentialTransducer& t_;
    const Transducer& flat_;
    std::map<StateSet, std::shared_ptr<const CriticalCertificate>> memo_;
    SyncDecisions decisions_;
};

StateSet initial_config(const MultiSequentialTransducer& t)
{
    StateSet c;
    for (std::size_t i = 0; i < t.num_parts(); ++i) c.push_back(t.offset(i) + t.part(i).initial());
    return make_state_set(std::move(c));
}

void require_sync_trim(const MultiSequentialTransducer& t)
{
    for (std::size_t i = 0; i < t.num_parts(); ++i)
        if (!is_synchronous(t.part(i).transducer()))
            throw Error(ErrorKind::not_synchronous, "part " + t.part_name(i) + " is not synchronous");
    if (!is_trim(t)) throw Error(ErrorKind::not_trim, "specification is not trim");
}

} // namespace

SyncVerdict check_residual_property(const MultiSequentialTransducer& t)
{
    require_sync_trim(t);
    SyncSolver solver(t);
    auto cert = solver.solve(initial_config(t));
    SyncVerdict v;
    v.decisions = solver.take_decisions();
    if (cert) {
        v.certificate = *cert;
        return v;
    }
    v.realisable = true;
    v.realiser = build_sync_realiser(t, v.decisions);
    return v;
}

SequentialTransducer build_sync_realiser(const MultiSequentialTransducer& t, const SyncDecisions& decisions)
{
    require_sync_trim(t);
    const auto& flat = t.flat();
    const auto& a = flat.input();

    std::map<StateSet, std::size_t> id;
    std::vector<StateSet> order;
    std::deque<StateSet> queue;
    auto visit = [&](const StateSet& c) {
        if (id.emplace(c, order.size()).second) {
            order.push_back(c);
            queue.push_back(c);
        }
        return "s" + std::to_string(id.at(c));
    };
    TransducerSpec spec{flat.input_alphabet(), flat.output_alphabet(), {}, {"s0"}, {}, {}};
    visit(initial_config(t));
    while (!queue.empty()) {
        StateSet cur = queue.front();
        queue.pop_front();
        const std::string from = "s" + std::to_string(id.at(cur));
        for (Symbol s : flat.input_alphabet().symbols()) {
            std::vector<std::pair<StateId, Symbol>> alive;
            for (auto q : cur) {
                auto idx = a.outgoing(q, s);
                if (!idx.empty()) alive.emplace_back(a.transitions()[idx.front()].to, flat.output(idx.front()).front());
            }
            if (alive.empty()) continue;
            const bool smooth = alive.size() == cur.size()
                             && std::all_of(alive.begin(), alive.end(),
                                            [&](const auto& r) { return r.second == alive.front().second; });
            StateSet next;
            Symbol out = alive.front().second;
            if (smooth) {
                for (const auto& r : alive) next.push_back(r.first);
                next = make_state_set(std::move(next));
            } else {
                auto it = decisions.find({cur, s});
                if (it == decisions.end())
                    throw Error(ErrorKind::inconsistent_decisions, "no decision for a reachable critical letter");
                next = it->second;
                std::optional<Symbol> common;
                for (auto q : next) {
                    auto r = std::find_if(alive.begin(), alive.end(), [q](const auto& x) { return x.first == q; });
                    if (r == alive.end() || (common && *common != r->second))
                        throw Error(ErrorKind::inconsistent_decisions, "decision keeps runs that do not agree");
                    common = r->second;
                }
                if (!common) throw Error(ErrorKind::inconsistent_decisions, "decision keeps no run");
                out = *common;
            }
            spec.transitions.push_back({from, s, Word(1, out), visit(next)});
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        spec.states.push_back("s" + std::to_string(i));
        if (intersects_finals(a, order[i])) spec.finals.emplace_back(spec.states.back(), Word{});
    }
    return SequentialTransducer(trim(Transducer(spec)));
}

} // namespace seqsynth
