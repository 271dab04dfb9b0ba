#include "seqsynth/async.hpp"

#include "seqsynth/delay.hpp"
#include "seqsynth/error.hpp"
#include "seqsynth/verifier.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>

namespace seqsynth {

bool mismatch(std::string_view u, std::string_view v)
{
    const auto n = std::min(u.size(), v.size());
    for (std::size_t i = 0; i < n; ++i)
        if (u[i] != v[i]) return true;
    return false;
}

bool delays_differ(const Word& alpha_i, const Word& beta_i, const Word& alpha_j, const Word& beta_j)
{
    if (beta_i.size() != beta_j.size()) return true;
    return !(beta_i.empty() && beta_j.empty()) && mismatch(alpha_i, alpha_j);
}

namespace {

bool delay_changes(const Word& ai, const Word& bi, const Word& aj, const Word& bj)
{
    const Word before[2] = {ai, aj};
    const Word after[2] = {ai + bi, aj + bj};
    return delay(before) != delay(after);
}

struct PartRun {
    std::size_t part;
    StateId state;
    Word alpha;
};

/// Runs on u of every part that has one.
std::vector<PartRun> runs_on(const MultiSequentialTransducer& t, std::string_view u)
{
    std::vector<PartRun> out;
    for (std::size_t i = 0; i < t.num_parts(); ++i)
        if (auto r = t.part(i).run(u)) out.push_back({i, r->state, r->output});
    return out;
}

std::size_t count_words(std::size_t alphabet, std::size_t min_len, std::size_t max_len, std::size_t cap)
{
    std::size_t total = 0, level = 1;
    for (std::size_t len = 0; len <= max_len; ++len) {
        if (len >= min_len) total += level;
        if (total > cap) return cap + 1;
        if (level > cap / std::max<std::size_t>(alphabet, 1) + 1) level = cap + 1;
        else level *= alphabet;
    }
    return total;
}

} // namespace

std::optional<CriticalLoop> make_critical_loop(const MultiSequentialTransducer& t, const Word& u, const Word& v)
{
    if (!t.input_alphabet().contains_word(u) || !t.input_alphabet().contains_word(v)) return std::nullopt;
    CriticalLoop loop{u, v, {}, {}, {}, {}};
    for (const auto& r : runs_on(t, u)) {
        auto back = t.part(r.part).run(v, r.state);
        if (!back || back->state != r.state) return std::nullopt;
        loop.parts.push_back(r.part);
        loop.alpha.push_back(r.alpha);
        loop.beta.push_back(back->output);
        loop.state.push_back(r.state);
    }
    for (std::size_t i = 0; i < loop.parts.size(); ++i)
        for (std::size_t j = i + 1; j < loop.parts.size(); ++j)
            if (delay_changes(loop.alpha[i], loop.beta[i], loop.alpha[j], loop.beta[j])) return loop;
    return std::nullopt;
}

std::vector<CriticalLoop> find_critical_loops(const MultiSequentialTransducer& t, std::size_t max_u,
                                              std::size_t max_v, std::size_t max_pairs)
{
    if (max_u == 0 || max_v == 0) throw Error(ErrorKind::invalid_argument, "loop bounds must be at least 1");
    const auto sigma = t.input_alphabet().size();
    const auto nu = count_words(sigma, 0, max_u, max_pairs);
    const auto nv = count_words(sigma, 1, max_v, max_pairs);
    if (nu > max_pairs || nv > max_pairs || nu * nv > max_pairs)
        throw Error(ErrorKind::budget_exceeded, "critical-loop enumeration exceeds its budget");

    const auto us = words_up_to(t.input_alphabet(), max_u);
    const auto vs = words_up_to(t.input_alphabet(), max_v);
    std::vector<CriticalLoop> out;
    for (const auto& u : us) {
        if (runs_on(t, u).size() < 2) continue;
        for (const auto& v : vs)
            if (!v.empty())
                if (auto loop = make_critical_loop(t, u, v)) out.push_back(std::move(*loop));
    }
    return out;
}

std::size_t WitnessNode::size() const
{
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

namespace {

class WitnessSearch {
public:
    WitnessSearch(const MultiSequentialTransducer& t, const WitnessBounds& b)
        : t_(t), bounds_(b), vs_(words_up_to(t.input_alphabet(), b.max_v))
    {
        vs_.erase(vs_.begin());   // drop ε
    }

    /// Smallest witness subtree for `parts` below prefix `from` with at most `budget` nodes.
    std::optional<WitnessNode> best(const std::vector<std::size_t>& parts, const Word& from, std::size_t budget)
    {
        auto key = std::make_tuple(parts, from, budget);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        auto result = compute(parts, from, budget);
        if (result && result->size() > budget) result.reset();
        memo_[key] = result;
        return result;
    }

private:
    /// Fills the dead/looping split and run data of a node; false when some live part does not loop on v.
    bool label(WitnessNode& node) const
    {
        node.dead.clear();
        node.looping.clear();
        node.alpha.clear();
        node.beta.clear();
        node.state.clear();
        for (auto i : node.parts) {
            auto r = t_.part(i).run(node.u);
            if (!r) {
                node.dead.push_back(i);
                continue;
            }
            auto back = t_.part(i).run(node.v, r->state);
            if (!back || back->state != r->state) return false;
            node.looping.push_back(i);
            node.alpha.push_back(r->output);
            node.beta.push_back(back->output);
            node.state.push_back(r->state);
        }
        return true;
    }

    std::optional<Word> uncovered(const std::vector<std::size_t>& parts, const Word& u) const
    {
        const auto& a = t_.flat().input();
        auto reached = reach(a, u);
        if (reached.empty()) return std::nullopt;
        StateSet kept;
        for (auto q : reached)
            if (std::binary_search(parts.begin(), parts.end(), t_.part_of(q))) kept.push_back(q);
        return includes(residual_from(a, kept), residual_from(a, reached));
    }

    /// Restricted growth strings over `n` items with at least two blocks.
    static std::vector<std::vector<std::size_t>> partitions(std::size_t n)
    {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> rgs(n, 0);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t blocks) {
            if (k == n) {
                if (blocks >= 2) out.push_back(rgs);
                return;
            }
            for (std::size_t b = 0; b <= blocks && b < n; ++b) {
                rgs[k] = b;
                rec(k + 1, std::max(blocks, b + 1));
            }
        };
        if (n > 0) rec(0, 0);
        return out;
    }

    std::optional<WitnessNode> compute(const std::vector<std::size_t>& parts, const Word& from, std::size_t budget)
    {
        WitnessNode leaf;
        leaf.u = from;
        leaf.parts = parts;
        if (label(leaf)) {
            if (auto w = uncovered(parts, from)) {
                leaf.leaf_word = *w;
                return leaf;
            }
        }
        if (budget < 3) return std::nullopt;

        std::optional<WitnessNode> best_node;
        const auto& alphabet = t_.input_alphabet();
        if (from.size() > bounds_.max_u) return std::nullopt;
        for (const auto& suffix : words_up_to(alphabet, bounds_.max_u - from.size())) {
            const Word u = from + suffix;
            std::vector<std::size_t> dead, live;
            std::vector<const SequentialTransducer::Run*> runs;
            for (auto i : parts) {
                if (const auto* r = run_of(i, u)) {
                    live.push_back(i);
                    runs.push_back(r);
                } else {
                    dead.push_back(i);
                }
            }
            if (live.size() < 2) continue;
            std::vector<const std::vector<std::optional<Word>>*> tables;
            for (std::size_t k = 0; k < live.size(); ++k) tables.push_back(&loops_at(live[k], runs[k]->state));

            std::vector<std::vector<std::size_t>> seen_components;
            for (std::size_t vi = 0; vi < vs_.size(); ++vi) {
                bool all_loop = true;
                for (const auto* tab : tables) all_loop = all_loop && (*tab)[vi].has_value();
                if (!all_loop) continue;
                WitnessNode node;
                node.u = u;
                node.v = vs_[vi];
                node.parts = parts;
                node.dead = dead;
                node.looping = live;
                for (std::size_t k = 0; k < live.size(); ++k) {
                    node.alpha.push_back(runs[k]->output);
                    node.beta.push_back(*(*tables[k])[vi]);
                    node.state.push_back(runs[k]->state);
                }
                // Pairs violating the delay condition must share a child.
                const auto m = node.looping.size();
                std::vector<std::size_t> comp(m);
                for (std::size_t i = 0; i < m; ++i) comp[i] = i;
                std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
                    return comp[x] == x ? x : comp[x] = find(comp[x]);
                };
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = i + 1; j < m; ++j)
                        if (!delays_differ(node.alpha[i], node.beta[i], node.alpha[j], node.beta[j]))
                            comp[find(j)] = find(i);
                std::vector<std::size_t> canon(m);
                std::vector<std::size_t> roots;
                for (std::size_t i = 0; i < m; ++i) {
                    auto r = find(i);
                    auto it = std::find(roots.begin(), roots.end(), r);
                    canon[i] = static_cast<std::size_t>(it - roots.begin());
                    if (it == roots.end()) roots.push_back(r);
                }
                if (roots.size() < 2) continue;
                if (std::find(seen_components.begin(), seen_components.end(), canon) != seen_components.end()) continue;
                seen_components.push_back(canon);

                for (const auto& blocks : partitions(roots.size())) {
                    const auto nblocks = *std::max_element(blocks.begin(), blocks.end()) + 1;
                    if (1 + nblocks > budget || (best_node && 1 + nblocks >= best_node->size())) continue;
                    std::vector<std::vector<std::size_t>> groups(nblocks);
                    for (std::size_t i = 0; i < m; ++i) groups[blocks[canon[i]]].push_back(node.looping[i]);
                    std::vector<WitnessNode> children;
                    std::size_t total = 1;
                    bool ok = true;
                    for (auto& g : groups) {
                        std::sort(g.begin(), g.end());
                        // Every sibling needs at least one node.
                        auto child = best(g, u, budget - nblocks);
                        if (!child) {
                            ok = false;
                            break;
                        }
                        total += child->size();
                        if (total > budget || (best_node && total >= best_node->size())) {
                            ok = false;
                            break;
                        }
                        children.push_back(std::move(*child));
                    }
                    if (!ok) continue;
                    WitnessNode candidate = node;
                    candidate.children = std::move(children);
                    best_node = std::move(candidate);
                }
            }
        }
        return best_node;
    }

    const SequentialTransducer::Run* run_of(std::size_t part, const Word& u)
    {
        auto [it, fresh] = runs_.try_emplace({part, u});
        if (fresh) it->second = t_.part(part).run(u);
        return it->second ? &*it->second : nullptr;
    }

    /// For each v of vs_, the loop output at q when v leads from q back to q.
    const std::vector<std::optional<Word>>& loops_at(std::size_t part, StateId q)
    {
        auto [it, fresh] = loops_.try_emplace({part, q});
        if (fresh) {
            it->second.reserve(vs_.size());
            for (const auto& v : vs_) {
                auto back = t_.part(part).run(v, q);
                it->second.push_back(back && back->state == q ? std::optional<Word>(back->output) : std::nullopt);
            }
        }
        return it->second;
    }

    const MultiSequentialTransducer& t_;
    WitnessBounds bounds_;
    std::vector<Word> vs_;
    std::map<std::pair<std::size_t, Word>, std::optional<SequentialTransducer::Run>> runs_;
    std::map<std::pair<std::size_t, StateId>, std::vector<std::optional<Word>>> loops_;
    std::map<std::tuple<std::vector<std::size_t>, Word, std::size_t>, std::optional<WitnessNode>> memo_;
};

} // namespace

std::optional<WitnessNode> search_witness(const MultiSequentialTransducer& t, const WitnessBounds& bounds)
{
    if (!is_trim(t)) throw Error(ErrorKind::not_trim, "specification is not trim");
    std::vector<std::size_t> all(t.num_parts());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return WitnessSearch(t, bounds).best(all, Word{}, bounds.max_nodes);
}

BigInt theoretical_K(const MultiSequentialTransducer& t)
{
    const BigInt L = t.flat().longest_output();
    const BigInt base = BigInt(6) * BigInt(t.max_part_states());
    const auto n = static_cast<unsigned>(t.num_parts());
    return L * boost::multiprecision::pow(base, n * n);
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::realisable: return "REALISABLE";
    case Verdict::unrealisable: return "UNREALISABLE";
    case Verdict::unknown: return "UNKNOWN";
    }
    return "?";
}

AsyncVerdict decide(const MultiSequentialTransducer& t, const DecideOptions& options)
{
    AsyncVerdict v;
    v.options = options;
    const BigInt threshold = theoretical_K(t);
    const std::size_t k_last =
        threshold < BigInt(options.k_max) ? static_cast<std::size_t>(threshold) : options.k_max;
    bool lost_at_threshold = false;
    for (std::size_t k = 0; k <= k_last; ++k) {
        GameGraph g;
        try {
            g = build_game(t, k, options.game);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::budget_exceeded) throw;
            v.budget_exceeded = true;
            break;
        }
        auto sol = solve_safety(g);
        v.games.push_back(game_stats(g, sol));
        v.k_reached = k;
        if (sol.eve_wins) {
            v.verdict = Verdict::realisable;
            v.winning_bound = k;
            v.realiser = extract_realiser(g, sol.strategy);
            return v;
        }
        if (BigInt(k) == threshold) lost_at_threshold = true;
    }
    try {
        if (auto w = search_witness(t, options.witness); w && check_witness(t, *w).ok) {
            v.verdict = Verdict::unrealisable;
            v.witness = std::move(w);
            return v;
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::budget_exceeded) throw;
        v.budget_exceeded = true;
    }
    // Losing the game at the completeness threshold settles the question without a witness.
    if (lost_at_threshold) v.verdict = Verdict::unrealisable;
    return v;
}

MultiSequentialTransducer residual_specification(const MultiSequentialTransducer& t, const CriticalLoop& loop,
                                                 const std::vector<std::size_t>& subset)
{
    const Word ell = lcp(std::span<const Word>(loop.alpha));
    std::vector<SequentialTransducer> parts;
    std::vector<std::string> names;
    for (auto i : subset) {
        auto it = std::find(loop.parts.begin(), loop.parts.end(), i);
        if (it == loop.parts.end()) throw Error(ErrorKind::invalid_argument, "subset is not part of the loop");
        const auto k = static_cast<std::size_t>(it - loop.parts.begin());
        parts.push_back(residual_part(t.part(i), loop.state[k], loop.alpha[k].substr(ell.size())));
        names.push_back(t.part_name(i));
    }
    return MultiSequentialTransducer(std::move(parts), std::move(names));
}

CharacterisationResult check_characterisation(const MultiSequentialTransducer& t, const CriticalLoop& loop,
                                              const DecideOptions& options)
{
    if (loop.parts.size() < 2) throw Error(ErrorKind::invalid_loop, "a critical loop needs at least two parts");
    auto fresh = make_critical_loop(t, loop.u, loop.v);
    if (!fresh || fresh->parts != loop.parts || fresh->alpha != loop.alpha || fresh->beta != loop.beta
        || fresh->state != loop.state)
        throw Error(ErrorKind::invalid_loop, "(u, v) with the given runs is not a critical loop");

    DecideOptions half = options;
    half.k_max = options.k_max / 2;
    half.witness.max_u = std::max<std::size_t>(1, options.witness.max_u / 2);
    half.witness.max_v = std::max<std::size_t>(1, options.witness.max_v / 2);
    half.witness.max_nodes = std::max<std::size_t>(1, options.witness.max_nodes / 2);

    const auto& a = t.flat().input();
    const auto reached = reach(a, loop.u);
    const auto n = loop.parts.size();
    std::vector<std::vector<std::size_t>> subsets;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> y;
        for (std::size_t k = 0; k < n; ++k)
            if (mask >> k & 1U) y.push_back(k);
        subsets.push_back(std::move(y));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        return x < y;
    });

    CharacterisationResult result;
    bool saw_unknown = false;
    for (const auto& ks : subsets) {
        std::vector<std::size_t> y;
        for (auto k : ks) y.push_back(loop.parts[k]);
        int outcome = 0;
        for (std::size_t x = 0; x < ks.size() && outcome == 0; ++x)
            for (std::size_t z = x + 1; z < ks.size() && outcome == 0; ++z) {
                auto i = ks[x], j = ks[z];
                if (delay_changes(loop.alpha[i], loop.beta[i], loop.alpha[j], loop.beta[j])) outcome = 1;
            }
        if (outcome == 0) {
            StateSet kept;
            for (auto k : ks) kept.push_back(t.offset(loop.parts[k]) + loop.state[k]);
            kept = make_state_set(std::move(kept));
            if (includes(residual_from(a, kept), residual_from(a, reached))) outcome = 2;
        }
        if (outcome == 0) {
            auto sub = decide(residual_specification(t, loop, y), half);
            if (sub.verdict == Verdict::unrealisable) outcome = 3;
            else if (sub.verdict == Verdict::unknown) outcome = -3;
        }
        result.tried.emplace_back(y, outcome);
        if (outcome == 0) {
            result.status = CharacterisationStatus::subset_found;
            result.subset = y;
            return result;
        }
        if (outcome == -3) saw_unknown = true;
    }
    result.status = saw_unknown ? CharacterisationStatus::unknown : CharacterisationStatus::no_valid_subset;
    return result;
}

} // namespace seqsynth
