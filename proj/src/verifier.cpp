#include "seqsynth/verifier.hpp"

#include "seqsynth/delay.hpp"
#include "seqsynth/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace seqsynth {

namespace {

bool shortlex_less(const Word& a, const Word& b)
{
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

} // namespace

DomainCheck verify_domain(const Transducer& r, const Transducer& t)
{
    if (r.input_alphabet() != t.input_alphabet())
        throw Error(ErrorKind::alphabet_mismatch, "realiser and specification use different input alphabets");
    auto missing = includes(r.input(), t.input());   // in dom(t) but not dom(r)
    auto extra = includes(t.input(), r.input());     // in dom(r) but not dom(t)
    DomainCheck c;
    if (missing && extra) c.counterexample = shortlex_less(*missing, *extra) ? *missing : *extra;
    else if (missing) c.counterexample = missing;
    else if (extra) c.counterexample = extra;
    c.ok = !c.counterexample;
    return c;
}

MembershipCheck verify_membership(const SequentialTransducer& r, const Transducer& t, std::size_t max_len)
{
    if (r.transducer().input_alphabet() != t.input_alphabet())
        throw Error(ErrorKind::alphabet_mismatch, "realiser and specification use different input alphabets");
    struct Node {
        Word u;
        std::set<std::pair<StateId, Word>> spec;   // runs of t
        std::optional<std::pair<StateId, Word>> real;
    };
    const auto& a = t.input();
    const auto& rt = r.transducer();
    Node root{Word{}, {}, std::pair<StateId, Word>{r.initial(), Word{}}};
    for (auto q : a.initials()) root.spec.emplace(q, Word{});

    MembershipCheck c;
    std::vector<Node> level{root};
    for (std::size_t len = 0; len <= max_len && !level.empty(); ++len) {
        std::vector<Node> next;
        for (auto& n : level) {
            std::set<Word> allowed;
            for (const auto& [q, v] : n.spec)
                if (a.is_final(q)) allowed.insert(v + t.terminal(q));
            if (!allowed.empty()) {
                ++c.words_checked;
                if (!n.real || !rt.input().is_final(n.real->first)) {
                    c.failing = n.u;
                    c.reason = "realiser undefined on a domain word";
                    return c;
                }
                const Word out = n.real->second + rt.terminal(n.real->first);
                if (!allowed.contains(out)) {
                    c.failing = n.u;
                    c.reason = "realiser output '" + out + "' not allowed by the specification";
                    return c;
                }
            }
            if (len == max_len) continue;
            for (Symbol s : t.input_alphabet().symbols()) {
                Node m{n.u + s, {}, std::nullopt};
                for (const auto& [q, v] : n.spec)
                    for (auto i : a.outgoing(q, s)) m.spec.emplace(a.transitions()[i].to, v + t.output(i));
                if (m.spec.empty()) continue;
                if (n.real)
                    if (auto i = r.step(n.real->first, s))
                        m.real = std::pair{rt.input().transitions()[*i].to, n.real->second + rt.output(*i)};
                next.push_back(std::move(m));
            }
        }
        level = std::move(next);
    }
    c.ok = true;
    return c;
}

namespace {

class SyncHorizon {
public:
    SyncHorizon(const Transducer& t, std::size_t max_states) : t_(t), max_states_(max_states) {}

    bool feasible(std::size_t remaining, const StateSet& reached, const StateSet& kept)
    {
        const auto& a = t_.input();
        if (intersects_finals(a, reached) && !intersects_finals(a, kept)) return false;
        if (remaining == 0) return true;
        auto key = std::make_tuple(remaining, reached, kept);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= max_states_)
            throw Error(ErrorKind::budget_exceeded, "horizon search exceeds its state budget");

        bool ok = true;
        for (Symbol s : a.alphabet().symbols()) {
            auto next_reached = post(a, reached, s);
            if (next_reached.empty()) continue;
            bool some = false;
            bool tried_empty = false;
            for (Symbol c : t_.output_alphabet().symbols()) {
                StateSet next_kept;
                for (auto q : kept)
                    for (auto i : a.outgoing(q, s))
                        if (t_.output(i) == Word(1, c)) next_kept.push_back(a.transitions()[i].to);
                next_kept = make_state_set(std::move(next_kept));
                if (next_kept.empty()) {
                    if (tried_empty) continue;
                    tried_empty = true;
                }
                if (feasible(remaining - 1, next_reached, next_kept)) {
                    some = true;
                    break;
                }
            }
            if (!some) {
                ok = false;
                break;
            }
        }
        memo_.emplace(std::move(key), ok);
        return ok;
    }

private:
    const Transducer& t_;
    std::size_t max_states_;
    std::map<std::tuple<std::size_t, StateSet, StateSet>, bool> memo_;
};

} // namespace

bool horizon_oracle(const Transducer& t, std::size_t horizon, HorizonMode mode, std::size_t max_states)
{
    if (mode == HorizonMode::async) return true;
    if (!is_synchronous(t)) throw Error(ErrorKind::not_synchronous, "sync horizon needs a synchronous specification");
    const auto init = make_state_set(t.input().initials());
    return SyncHorizon(t, max_states).feasible(horizon, init, init);
}

VerificationReport verify_realiser(const SequentialTransducer& r, const Transducer& t, std::size_t max_len)
{
    VerificationReport rep;
    rep.domain = verify_domain(r.transducer(), t);
    rep.membership = verify_membership(r, t, max_len);
    return rep;
}

// ---------------------------------------------------------------- witnesses

namespace {

struct FlatNode {
    const WitnessNode* node;
    const WitnessNode* parent;
};

void collect(const WitnessNode& n, const WitnessNode* parent, std::vector<FlatNode>& out)
{
    out.push_back({&n, parent});
    for (const auto& c : n.children) collect(c, &n, out);
}

bool sorted_unique(const std::vector<std::size_t>& v)
{
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

WitnessCheck fail(int condition, std::string detail)
{
    return {false, condition, std::move(detail)};
}

} // namespace

WitnessCheck check_witness(const MultiSequentialTransducer& t, const WitnessNode& root)
{
    std::vector<FlatNode> nodes;
    collect(root, nullptr, nodes);
    const auto n = t.num_parts();

    // 1: maximality.
    if (root.parts.size() != n) return fail(1, "root does not hold every part");
    for (std::size_t i = 0; i < n; ++i)
        if (root.parts[i] != i) return fail(1, "root does not hold every part");

    // 2: consistency, recomputed from the words.
    for (const auto& [x, parent] : nodes) {
        if (x->parts.empty() || !sorted_unique(x->parts) || x->parts.back() >= n)
            return fail(2, "node part set is empty, unsorted or out of range");
        if (!t.input_alphabet().contains_word(x->u) || !t.input_alphabet().contains_word(x->v))
            return fail(2, "node words use symbols outside the input alphabet");
        WitnessNode expect;
        for (auto i : x->parts) {
            auto r = t.part(i).run(x->u);
            if (!r) {
                expect.dead.push_back(i);
                continue;
            }
            auto back = t.part(i).run(x->v, r->state);
            if (!back || back->state != r->state)
                return fail(2, "part " + t.part_name(i) + " does not loop on v after u = '" + x->u + "'");
            expect.looping.push_back(i);
            expect.alpha.push_back(r->output);
            expect.beta.push_back(back->output);
            expect.state.push_back(r->state);
        }
        if (expect.dead != x->dead || expect.looping != x->looping)
            return fail(2, "dead/looping split differs from the runs on u = '" + x->u + "'");
        if (expect.alpha != x->alpha || expect.beta != x->beta || expect.state != x->state)
            return fail(2, "recorded run outputs differ from the runs on u = '" + x->u + "'");
    }

    // 3: monotonicity.
    for (const auto& [x, parent] : nodes) {
        if (!parent) continue;
        const auto& l = parent->looping;
        if (x->parts.size() >= l.size() || !std::includes(l.begin(), l.end(), x->parts.begin(), x->parts.end()))
            return fail(3, "child part set is not a strict subset of the parent's looping parts");
        if (!x->u.starts_with(parent->u)) return fail(3, "child u does not extend the parent's u");
    }

    // 4: partition of the looping parts by the children.
    for (const auto& [x, parent] : nodes) {
        if (x->children.empty()) continue;
        std::vector<std::size_t> all;
        for (const auto& c : x->children) all.insert(all.end(), c.parts.begin(), c.parts.end());
        std::sort(all.begin(), all.end());
        if (!sorted_unique(all) || all != x->looping)
            return fail(4, "children do not partition the looping parts at u = '" + x->u + "'");
    }

    // 5: delays between different children.
    for (const auto& [x, parent] : nodes) {
        auto index = [&](std::size_t part) {
            return static_cast<std::size_t>(std::find(x->looping.begin(), x->looping.end(), part) - x->looping.begin());
        };
        for (std::size_t y = 0; y < x->children.size(); ++y)
            for (std::size_t z = y + 1; z < x->children.size(); ++z)
                for (auto i : x->children[y].parts)
                    for (auto j : x->children[z].parts) {
                        const auto a = index(i), b = index(j);
                        if (!delays_differ(x->alpha[a], x->beta[a], x->alpha[b], x->beta[b]))
                            return fail(5, "parts " + t.part_name(i) + " and " + t.part_name(j)
                                               + " keep a bounded delay on the loop at u = '" + x->u + "'");
                    }
    }

    // 6: leaves.
    for (const auto& [x, parent] : nodes) {
        if (!x->children.empty()) continue;
        if (!x->leaf_word) return fail(6, "leaf without a continuation word");
        const Word full = x->u + *x->leaf_word;
        if (!t.input_alphabet().contains_word(full)) return fail(6, "leaf word uses unknown symbols");
        if (!accepts(t.flat().input(), full)) return fail(6, "'" + full + "' is not in the domain");
        for (auto i : x->parts)
            if (t.part(i).apply(full))
                return fail(6, "'" + full + "' is accepted by part " + t.part_name(i));
    }
    return {true, 0, {}};
}

bool verify_critical_loop(const MultiSequentialTransducer& t, const CriticalLoop& loop)
{
    const auto& sigma = t.input_alphabet();
    if (!sigma.contains_word(loop.u) || !sigma.contains_word(loop.v) || loop.v.empty()) return false;
    const auto m = loop.parts.size();
    if (m < 2 || loop.alpha.size() != m || loop.beta.size() != m || loop.state.size() != m) return false;
    std::vector<bool> in_x(t.num_parts(), false);
    for (std::size_t k = 0; k < m; ++k) {
        const auto i = loop.parts[k];
        if (i >= t.num_parts() || in_x[i]) return false;
        in_x[i] = true;
        const auto& d = t.part(i);
        auto r0 = d.run(loop.u);
        auto r1 = d.run(loop.u + loop.v);
        auto r2 = d.run(loop.u + loop.v + loop.v);
        if (!r0 || !r1 || !r2) return false;
        if (r0->state != loop.state[k] || r1->state != loop.state[k] || r2->state != loop.state[k]) return false;
        if (r0->output != loop.alpha[k] || r1->output != loop.alpha[k] + loop.beta[k]
            || r2->output != loop.alpha[k] + loop.beta[k] + loop.beta[k])
            return false;
    }
    for (std::size_t i = 0; i < t.num_parts(); ++i)
        if (!in_x[i] && t.part(i).run(loop.u)) return false;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const Word w0[2] = {loop.alpha[a], loop.alpha[b]};
            const Word w1[2] = {w0[0] + loop.beta[a], w0[1] + loop.beta[b]};
            const Word w2[2] = {w1[0] + loop.beta[a], w1[1] + loop.beta[b]};
            const auto d0 = delay(w0), d1 = delay(w1), d2 = delay(w2);
            if (d0 != d1 && d1 != d2) return true;
        }
    return false;
}

// ---------------------------------------------------------------- sync certificates

namespace {

CertificateCheck check_certificate_from(const MultiSequentialTransducer& t, const CriticalCertificate& cert,
                                        const StateSet& expected_start)
{
    auto bad = [](std::string d) { return CertificateCheck{false, std::move(d)}; };
    const auto& flat = t.flat();
    const auto& a = flat.input();
    if (cert.start != expected_start) return bad("certificate starts from unexpected states");
    std::vector<std::size_t> parts;
    for (auto q : cert.start) parts.push_back(t.part_of(q));
    if (parts != cert.parts) return bad("part list does not match the start states");
    if (cert.prefix.empty() || !flat.input_alphabet().contains_word(cert.prefix))
        return bad("prefix is empty or uses unknown symbols");

    // Every proper prefix is smooth for the followed parts.
    StateSet cur = cert.start;
    for (std::size_t k = 0; k + 1 < cert.prefix.size(); ++k) {
        StateSet next;
        std::optional<Word> common;
        for (auto q : cur) {
            auto idx = a.outgoing(q, cert.prefix[k]);
            if (idx.empty()) return bad("a followed part dies before the end of the prefix");
            if (common && *common != flat.output(idx.front())) return bad("parts disagree before the end of the prefix");
            common = flat.output(idx.front());
            next.push_back(a.transitions()[idx.front()].to);
        }
        cur = make_state_set(std::move(next));
    }
    const Symbol last = cert.prefix.back();
    std::vector<std::optional<std::pair<StateId, Word>>> steps;
    for (auto q : cur) {
        auto idx = a.outgoing(q, last);
        if (idx.empty()) steps.emplace_back(std::nullopt);
        else steps.emplace_back(std::pair{a.transitions()[idx.front()].to, flat.output(idx.front())});
    }
    StateSet alive;
    bool smooth = true;
    for (const auto& s : steps) {
        if (!s || !steps.front() || s->second != steps.front()->second) smooth = false;
        if (s) alive.push_back(s->first);
    }
    alive = make_state_set(std::move(alive));
    if (alive.empty()) return bad("prefix is dead");
    if (smooth) return bad("prefix is not critical");

    const auto n = cur.size();
    std::set<std::vector<std::size_t>> listed;
    for (const auto& f : cert.failures) listed.insert(f.subset);
    if (listed.size() != cert.failures.size() || listed.size() != (std::size_t{1} << n) - 2)
        return bad("failures do not list every non-empty strict subset exactly once");

    for (const auto& f : cert.failures) {
        std::vector<std::size_t> pos;
        for (auto p : f.subset) {
            auto it = std::find(cert.parts.begin(), cert.parts.end(), p);
            if (it == cert.parts.end()) return bad("subset names a part that is not followed");
            pos.push_back(static_cast<std::size_t>(it - cert.parts.begin()));
        }
        bool agree = true;
        StateSet kept;
        const auto& first = steps[pos.front()];
        for (auto k : pos) {
            if (!steps[k] || !first || steps[k]->second != first->second) agree = false;
            else kept.push_back(steps[k]->first);
        }
        kept = make_state_set(std::move(kept));
        if (f.condition == 1) {
            if (agree) return bad("condition 1 is claimed to fail but the subset agrees");
            continue;
        }
        if (!agree) return bad("subset fails condition 1 but another condition is recorded");
        if (f.condition == 2) {
            if (!f.counterexample) return bad("condition 2 failure without a word");
            const auto& w = *f.counterexample;
            if (!flat.input_alphabet().contains_word(w)) return bad("counterexample uses unknown symbols");
            if (!intersects_finals(a, reach_from(a, alive, w))) return bad("counterexample not accepted after the prefix");
            if (intersects_finals(a, reach_from(a, kept, w))) return bad("counterexample accepted by the subset");
            continue;
        }
        if (f.condition == 3) {
            if (includes(residual_from(a, kept), residual_from(a, alive)))
                return bad("subset fails condition 2 but condition 3 is recorded");
            if (!f.nested) return bad("condition 3 failure without a nested certificate");
            auto sub = check_certificate_from(t, *f.nested, kept);
            if (!sub.ok) return bad("nested: " + sub.detail);
            continue;
        }
        return bad("unknown condition number");
    }
    return {true, {}};
}

} // namespace

CertificateCheck check_sync_certificate(const MultiSequentialTransducer& t, const CriticalCertificate& cert)
{
    for (std::size_t i = 0; i < t.num_parts(); ++i)
        if (!is_synchronous(t.part(i).transducer()))
            return {false, "part " + t.part_name(i) + " is not synchronous"};
    StateSet init;
    for (std::size_t i = 0; i < t.num_parts(); ++i) init.push_back(t.offset(i) + t.part(i).initial());
    return check_certificate_from(t, cert, make_state_set(std::move(init)));
}

} // namespace seqsynth
