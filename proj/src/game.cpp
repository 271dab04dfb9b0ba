#include "seqsynth/game.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace seqsynth {

namespace {

struct AdamVertexHash {
    std::size_t operator()(const AdamVertex& v) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::size_t x) { h = (h ^ x) * 0x100000001b3ULL; };
        for (auto q : v.reached) mix(q);
        mix(0x9e3779b9);
        for (const auto& [q, w] : v.delays.entries()) {
            mix(q);
            mix(std::hash<std::string>{}(w));
        }
        return h;
    }
};

class GameBuilder {
public:
    GameBuilder(GameGraph& g, const GameOptions& options) : g_(g), options_(options) {}

    void run()
    {
        const auto& t = g_.spec;
        AdamVertex v0{make_state_set(t.input().initials()), initial_delay_map(t)};
        g_.initial = intern(std::move(v0));
        while (!queue_.empty()) {
            auto v = queue_.front();
            queue_.pop_front();
            expand(v);
        }
        const auto& a = t.input();
        g_.unsafe.resize(g_.adam.size());
        for (std::size_t i = 0; i < g_.adam.size(); ++i) {
            const auto& v = g_.adam[i];
            g_.unsafe[i] = intersects_finals(a, v.reached) && !intersects_finals(a, v.delays.live());
        }
    }

private:
    std::uint32_t intern(AdamVertex v)
    {
        auto it = index_.find(v);
        if (it != index_.end()) return it->second;
        if (g_.adam.size() >= options_.vertex_cap)
            throw Error(ErrorKind::budget_exceeded,
                        "game with bound " + std::to_string(g_.bound) + " exceeds the vertex cap of "
                            + std::to_string(options_.vertex_cap));
        auto id = static_cast<std::uint32_t>(g_.adam.size());
        index_.emplace(v, id);
        g_.adam.push_back(std::move(v));
        g_.adam_succ.emplace_back();
        queue_.push_back(id);
        return id;
    }

    void expand(std::uint32_t v)
    {
        const auto& t = g_.spec;
        for (Symbol s : t.input_alphabet().symbols()) {
            // Copies: interning may reallocate g_.adam.
            auto reached = post(t.input(), g_.adam[v].reached, s);
            auto cands = candidates(t, g_.adam[v].delays, s);

            // Group candidates: per part when part-structured, else one group each.
            std::vector<std::vector<std::size_t>> groups;
            std::vector<std::uint32_t> group_ids;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                std::uint32_t gid = g_.part_of_state.empty()
                                        ? static_cast<std::uint32_t>(i)
                                        : static_cast<std::uint32_t>(g_.part_of_state[cands[i].target]);
                auto it = std::find(group_ids.begin(), group_ids.end(), gid);
                if (it == group_ids.end()) {
                    group_ids.push_back(gid);
                    groups.push_back({i});
                } else {
                    groups[static_cast<std::size_t>(it - group_ids.begin())].push_back(i);
                }
            }
            if (groups.size() > 24)
                throw Error(ErrorKind::budget_exceeded, "too many independent runs to enumerate Eve's moves");

            EveVertex e{v, s, {}};
            const std::uint64_t subsets = std::uint64_t{1} << groups.size();
            for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                std::vector<Candidate> kept;
                EveMove m;
                for (std::size_t gi = 0; gi < groups.size(); ++gi)
                    if (mask >> gi & 1U) {
                        m.kept.push_back(group_ids[gi]);
                        for (auto ci : groups[gi]) kept.push_back(cands[ci]);
                    }
                auto f = flush(kept);
                if (f.next.longest_pending() > g_.bound) continue;
                m.kept_runs = kept.size();
                m.output = std::move(f.safe_output);
                m.target = intern(AdamVertex{reached, std::move(f.next)});
                e.moves.push_back(std::move(m));
            }
            g_.adam_succ[v].push_back(static_cast<std::uint32_t>(g_.eve.size()));
            g_.eve.push_back(std::move(e));
        }
    }

    GameGraph& g_;
    const GameOptions& options_;
    std::unordered_map<AdamVertex, std::uint32_t, AdamVertexHash> index_;
    std::deque<std::uint32_t> queue_;
};

} // namespace

std::size_t GameGraph::num_edges() const
{
    std::size_t n = 0;
    for (const auto& s : adam_succ) n += s.size();
    for (const auto& e : eve) n += e.moves.size();
    return n;
}

std::size_t GameGraph::num_unsafe() const
{
    return static_cast<std::size_t>(std::count(unsafe.begin(), unsafe.end(), true));
}

GameGraph build_game(const MultiSequentialTransducer& t, std::size_t bound, const GameOptions& options)
{
    GameGraph g;
    g.bound = bound;
    g.spec = t.flat();
    g.num_parts = t.num_parts();
    for (StateId q = 0; q < t.total_states(); ++q) g.part_of_state.push_back(t.part_of(q));
    GameBuilder(g, options).run();
    return g;
}

GameGraph build_game(const Transducer& t, std::size_t bound, const GameOptions& options)
{
    GameGraph g;
    g.bound = bound;
    g.spec = t;
    GameBuilder(g, options).run();
    return g;
}

SafetySolution solve_safety(const GameGraph& g)
{
    const auto na = g.adam.size();
    const auto ne = g.eve.size();
    std::vector<bool> attr_a(na, false), attr_e(ne, false);
    std::vector<std::size_t> remaining(ne);
    std::vector<std::vector<std::uint32_t>> eve_preds(na);
    for (std::uint32_t e = 0; e < ne; ++e) {
        remaining[e] = g.eve[e].moves.size();
        for (const auto& m : g.eve[e].moves) eve_preds[m.target].push_back(e);
    }

    std::vector<std::uint32_t> work;
    for (std::uint32_t v = 0; v < na; ++v)
        if (g.unsafe[v]) {
            attr_a[v] = true;
            work.push_back(v);
        }
    while (!work.empty()) {
        auto v = work.back();
        work.pop_back();
        for (auto e : eve_preds[v]) {
            if (attr_e[e] || --remaining[e] > 0) continue;
            attr_e[e] = true;
            auto owner = g.eve[e].adam;
            if (!attr_a[owner]) {
                attr_a[owner] = true;
                work.push_back(owner);
            }
        }
    }

    SafetySolution sol;
    sol.adam_winning.resize(na);
    sol.eve_winning.resize(ne);
    for (std::size_t v = 0; v < na; ++v) sol.adam_winning[v] = !attr_a[v];
    for (std::size_t e = 0; e < ne; ++e) sol.eve_winning[e] = !attr_e[e];
    sol.eve_wins = !g.adam.empty() && sol.adam_winning[g.initial];

    sol.strategy.moves.assign(ne, std::nullopt);
    for (std::uint32_t e = 0; e < ne; ++e) {
        if (!sol.eve_winning[e]) continue;
        std::optional<std::uint32_t> best;
        for (std::uint32_t i = 0; i < g.eve[e].moves.size(); ++i) {
            const auto& m = g.eve[e].moves[i];
            if (!sol.adam_winning[m.target]) continue;
            if (!best) {
                best = i;
                continue;
            }
            const auto& b = g.eve[e].moves[*best];
            if (m.kept_runs > b.kept_runs || (m.kept_runs == b.kept_runs && g.adam[m.target] < g.adam[b.target]))
                best = i;
        }
        sol.strategy.moves[e] = best;
    }
    return sol;
}

SequentialTransducer extract_realiser(const GameGraph& g, const Strategy& s)
{
    const auto& spec = g.spec;
    const auto& a = spec.input();
    std::unordered_map<std::uint32_t, std::size_t> state_of;
    std::vector<std::uint32_t> order;
    std::deque<std::uint32_t> queue;
    auto visit = [&](std::uint32_t v) {
        if (state_of.emplace(v, order.size()).second) {
            order.push_back(v);
            queue.push_back(v);
        }
    };
    if (g.adam.empty()) throw Error(ErrorKind::not_winning, "empty game");
    visit(g.initial);

    TransducerSpec out{spec.input_alphabet(), spec.output_alphabet(), {}, {}, {}, {}};
    std::vector<TransitionSpec> trans;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (g.unsafe[v])
            throw Error(ErrorKind::not_winning, "strategy reaches an unsafe vertex");
        const auto& symbols = spec.input_alphabet().symbols();
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            auto e = g.adam_succ[v][i];
            if (e >= s.moves.size() || !s.moves[e])
                throw Error(ErrorKind::not_winning, "strategy undefined at a visited vertex");
            const auto& m = g.eve[e].moves[*s.moves[e]];
            if (g.adam[m.target].reached.empty()) continue;
            visit(m.target);
            trans.push_back({"s" + std::to_string(state_of[v]), symbols[i], m.output,
                             "s" + std::to_string(state_of[m.target])});
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& v = g.adam[order[i]];
        out.states.push_back("s" + std::to_string(i));
        if (!intersects_finals(a, v.reached)) continue;
        // Least accepting kept run: flat state ids are ordered by part.
        for (const auto& [q, w] : v.delays.entries())
            if (a.is_final(q)) {
                out.finals.emplace_back(out.states.back(), w + spec.terminal(q));
                break;
            }
    }
    out.initials = {"s0"};
    out.transitions = std::move(trans);
    auto trimmed = trim(Transducer(out));
    if (trimmed.num_states() == 0) {
        // Empty domain: a lone non-accepting initial state keeps the realiser well formed.
        TransducerSpec empty{spec.input_alphabet(), spec.output_alphabet(), {"s0"}, {"s0"}, {}, {}};
        return SequentialTransducer(Transducer(empty));
    }
    return SequentialTransducer(std::move(trimmed));
}

GameStats game_stats(const GameGraph& g, const SafetySolution& s)
{
    GameStats st;
    st.bound = g.bound;
    st.adam_vertices = g.adam.size();
    st.eve_vertices = g.eve.size();
    st.edges = g.num_edges();
    st.unsafe = g.num_unsafe();
    st.winning_region = static_cast<std::size_t>(std::count(s.adam_winning.begin(), s.adam_winning.end(), true));
    st.eve_wins = s.eve_wins;
    return st;
}

namespace {

template <typename Input>
KIteration iterate(const Input& t, std::size_t k_max, const GameOptions& options)
{
    KIteration result;
    for (std::size_t k = 0; k <= k_max; ++k) {
        auto g = build_game(t, k, options);
        auto sol = solve_safety(g);
        result.history.push_back(game_stats(g, sol));
        if (sol.eve_wins) {
            result.winning_bound = k;
            result.realiser = extract_realiser(g, sol.strategy);
            break;
        }
    }
    return result;
}

} // namespace

KIteration iterate_k(const MultiSequentialTransducer& t, std::size_t k_max, const GameOptions& options)
{
    return iterate(t, k_max, options);
}

KIteration iterate_k(const Transducer& t, std::size_t k_max, const GameOptions& options)
{
    return iterate(t, k_max, options);
}

BigInt adam_vertex_bound(std::size_t states, std::size_t output_symbols, std::size_t bound, std::size_t parts)
{
    BigInt gamma = std::max<std::size_t>(output_symbols, 2);
    BigInt per_part = BigInt(states) * boost::multiprecision::pow(gamma, static_cast<unsigned>(bound + 1));
    return boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(states))
         * boost::multiprecision::pow(per_part, static_cast<unsigned>(parts));
}

std::string describe(const GameGraph& g, const AdamVertex& v)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.reached.size(); ++i) {
        if (i) out += ',';
        out += g.spec.name(v.reached[i]);
    }
    out += "} [";
    bool first = true;
    for (const auto& [q, w] : v.delays.entries()) {
        if (!first) out += ',';
        first = false;
        out += g.spec.name(q) + ":" + (w.empty() ? std::string("ε") : w);
    }
    return out + "]";
}

namespace {

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string export_dot(const GameGraph& g)
{
    std::ostringstream os;
    os << "digraph game {\n";
    os << "  rankdir=LR;\n";
    os << "  label=\"" << g.bound << "-synthesis game\";\n";
    for (std::size_t v = 0; v < g.adam.size(); ++v) {
        os << "  a" << v << " [shape=box, label=\"" << dot_escape(describe(g, g.adam[v])) << "\"";
        if (g.unsafe[v]) os << ", style=bold, penwidth=3";
        if (v == g.initial) os << ", peripheries=2";
        os << "];\n";
    }
    for (std::size_t e = 0; e < g.eve.size(); ++e) os << "  e" << e << " [shape=circle, label=\"\"];\n";
    for (std::size_t v = 0; v < g.adam.size(); ++v)
        for (auto e : g.adam_succ[v])
            os << "  a" << v << " -> e" << e << " [label=\"" << dot_escape(std::string(1, g.eve[e].symbol))
               << "\"];\n";
    for (std::size_t e = 0; e < g.eve.size(); ++e)
        for (const auto& m : g.eve[e].moves) {
            std::string kept = "{";
            for (std::size_t i = 0; i < m.kept.size(); ++i) {
                if (i) kept += ',';
                kept += std::to_string(m.kept[i] + 1);
            }
            kept += "}";
            os << "  e" << e << " -> a" << m.target << " [label=\"" << dot_escape(kept) << " / "
               << (m.output.empty() ? std::string("ε") : dot_escape(m.output)) << "\"];\n";
        }
    os << "}\n";
    return os.str();
}

} // namespace seqsynth
