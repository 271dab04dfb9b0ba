#include "seqsynth/nfa.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace seqsynth {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::unknown_symbol: return "UnknownSymbol";
    case ErrorKind::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorKind::foreign_state: return "ForeignState";
    case ErrorKind::empty_list: return "EmptyList";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::not_winning: return "NotWinning";
    case ErrorKind::not_sequential: return "NotSequential";
    case ErrorKind::not_synchronous: return "NotSynchronous";
    case ErrorKind::not_trim: return "NotTrim";
    case ErrorKind::inconsistent_decisions: return "InconsistentDecisions";
    case ErrorKind::invalid_loop: return "InvalidLoop";
    case ErrorKind::alphabet_clash: return "AlphabetClash";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::parse_error: return "ParseError";
    }
    return "Error";
}

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols))
{
    if (symbols_.empty())
        throw Error(ErrorKind::invalid_argument, "alphabet must not be empty");
    std::sort(symbols_.begin(), symbols_.end());
    if (std::adjacent_find(symbols_.begin(), symbols_.end()) != symbols_.end())
        throw Error(ErrorKind::invalid_argument, "alphabet has duplicate symbols");
}

Alphabet::Alphabet(std::string_view symbols)
    : Alphabet(std::vector<Symbol>(symbols.begin(), symbols.end()))
{}

bool Alphabet::contains(Symbol s) const noexcept
{
    return std::binary_search(symbols_.begin(), symbols_.end(), s);
}

bool Alphabet::contains_word(std::string_view w) const noexcept
{
    return std::all_of(w.begin(), w.end(), [this](Symbol s) { return contains(s); });
}

// ---------------------------------------------------------------- Nfa

StateSet make_state_set(std::vector<StateId> states)
{
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    return states;
}

Nfa::Nfa(Alphabet alphabet,
         std::vector<std::string> state_names,
         StateSet initials,
         StateSet finals,
         std::vector<Transition> transitions)
    : alphabet_(std::move(alphabet)),
      names_(std::move(state_names)),
      initials_(make_state_set(std::move(initials))),
      finals_(make_state_set(std::move(finals))),
      transitions_(std::move(transitions))
{
    const auto n = names_.size();
    auto check = [n](StateId q) {
        if (q >= n)
            throw Error(ErrorKind::foreign_state, "state index " + std::to_string(q) + " out of range");
    };
    for (auto q : initials_) check(q);
    for (auto q : finals_) check(q);
    for (const auto& t : transitions_) {
        check(t.from);
        check(t.to);
        if (!alphabet_.contains(t.symbol))
            throw Error(ErrorKind::unknown_symbol, std::string("transition symbol '") + t.symbol + "'");
    }
    {
        std::set<std::string_view> seen;
        for (const auto& name : names_)
            if (!seen.insert(name).second)
                throw Error(ErrorKind::invalid_argument, "duplicate state name '" + name + "'");
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

    final_flags_.assign(n, false);
    for (auto q : finals_) final_flags_[q] = true;

    out_begin_.assign(n + 1, 0);
    for (const auto& t : transitions_) ++out_begin_[t.from + 1];
    for (std::size_t i = 0; i < n; ++i) out_begin_[i + 1] += out_begin_[i];
    out_index_.resize(transitions_.size());
    // transitions_ is sorted by source first, so indices are already grouped.
    for (std::size_t i = 0; i < transitions_.size(); ++i) out_index_[i] = i;
}

std::optional<StateId> Nfa::find_state(std::string_view name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<StateId>(i);
    return std::nullopt;
}

bool Nfa::is_initial(StateId q) const
{
    return std::binary_search(initials_.begin(), initials_.end(), q);
}

std::span<const std::size_t> Nfa::outgoing(StateId q) const
{
    return std::span<const std::size_t>(out_index_).subspan(out_begin_.at(q),
                                                            out_begin_.at(q + 1) - out_begin_.at(q));
}

std::span<const std::size_t> Nfa::outgoing(StateId q, Symbol s) const
{
    auto all = outgoing(q);
    auto lo = std::partition_point(all.begin(), all.end(),
                                   [&](std::size_t i) { return transitions_[i].symbol < s; });
    auto hi = std::partition_point(lo, all.end(),
                                   [&](std::size_t i) { return transitions_[i].symbol <= s; });
    return {lo, hi};
}

bool Nfa::is_deterministic() const
{
    if (initials_.size() != 1) return false;
    for (std::size_t i = 1; i < transitions_.size(); ++i) {
        const auto& a = transitions_[i - 1];
        const auto& b = transitions_[i];
        if (a.from == b.from && a.symbol == b.symbol) return false;
    }
    return true;
}

// ---------------------------------------------------------------- simulation

StateSet post(const Nfa& a, const StateSet& from, Symbol s)
{
    std::vector<StateId> out;
    for (auto q : from)
        for (auto i : a.outgoing(q, s)) out.push_back(a.transitions()[i].to);
    return make_state_set(std::move(out));
}

StateSet reach_from(const Nfa& a, const StateSet& from, std::string_view w)
{
    StateSet cur = from;
    for (Symbol s : w) {
        if (!a.alphabet().contains(s))
            throw Error(ErrorKind::unknown_symbol, std::string("symbol '") + s + "' not in alphabet");
        cur = post(a, cur, s);
    }
    return cur;
}

StateSet reach(const Nfa& a, std::string_view w)
{
    return reach_from(a, a.initials(), w);
}

bool intersects_finals(const Nfa& a, const StateSet& s)
{
    return std::any_of(s.begin(), s.end(), [&](StateId q) { return a.is_final(q); });
}

bool accepts(const Nfa& a, std::string_view w)
{
    return intersects_finals(a, reach(a, w));
}

// ---------------------------------------------------------------- trim

namespace {

std::vector<bool> forward_reachable(const Nfa& a, const StateSet& from)
{
    std::vector<bool> seen(a.num_states(), false);
    std::vector<StateId> stack;
    for (auto q : from)
        if (!seen[q]) { seen[q] = true; stack.push_back(q); }
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        for (auto i : a.outgoing(q)) {
            auto r = a.transitions()[i].to;
            if (!seen[r]) { seen[r] = true; stack.push_back(r); }
        }
    }
    return seen;
}

std::vector<bool> backward_reachable(const Nfa& a)
{
    std::vector<std::vector<StateId>> preds(a.num_states());
    for (const auto& t : a.transitions()) preds[t.to].push_back(t.from);
    std::vector<bool> seen(a.num_states(), false);
    std::vector<StateId> stack;
    for (auto q : a.finals()) { seen[q] = true; stack.push_back(q); }
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        for (auto p : preds[q])
            if (!seen[p]) { seen[p] = true; stack.push_back(p); }
    }
    return seen;
}

std::vector<bool> useful_states(const Nfa& a)
{
    auto fwd = forward_reachable(a, a.initials());
    auto bwd = backward_reachable(a);
    std::vector<bool> useful(a.num_states());
    for (std::size_t q = 0; q < a.num_states(); ++q) useful[q] = fwd[q] && bwd[q];
    return useful;
}

} // namespace

Nfa trim(const Nfa& a)
{
    auto useful = useful_states(a);
    std::vector<StateId> remap(a.num_states(), 0);
    std::vector<std::string> names;
    for (std::size_t q = 0; q < a.num_states(); ++q)
        if (useful[q]) {
            remap[q] = static_cast<StateId>(names.size());
            names.push_back(a.name(static_cast<StateId>(q)));
        }
    StateSet init, fin;
    for (auto q : a.initials()) if (useful[q]) init.push_back(remap[q]);
    for (auto q : a.finals()) if (useful[q]) fin.push_back(remap[q]);
    std::vector<Transition> trans;
    for (const auto& t : a.transitions())
        if (useful[t.from] && useful[t.to]) trans.push_back({remap[t.from], t.symbol, remap[t.to]});
    return Nfa(a.alphabet(), std::move(names), std::move(init), std::move(fin), std::move(trans));
}

bool is_trim(const Nfa& a)
{
    auto useful = useful_states(a);
    return std::all_of(useful.begin(), useful.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------- determinize

namespace {

std::string macrostate_name(const Nfa& a, const StateSet& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += a.name(s[i]);
    }
    return out + "}";
}

void require_same_alphabet(const Nfa& a, const Nfa& b)
{
    if (a.alphabet() != b.alphabet())
        throw Error(ErrorKind::alphabet_mismatch,
                    "alphabets {" + a.alphabet().to_string() + "} and {" + b.alphabet().to_string() + "} differ");
}

} // namespace

Nfa determinize(const Nfa& a)
{
    std::map<StateSet, StateId> index;
    std::vector<StateSet> macros;
    std::deque<StateId> queue;
    auto intern = [&](const StateSet& s) {
        auto [it, fresh] = index.emplace(s, static_cast<StateId>(macros.size()));
        if (fresh) {
            macros.push_back(s);
            queue.push_back(it->second);
        }
        return it->second;
    };
    if (!a.initials().empty()) intern(a.initials());
    std::vector<Transition> trans;
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        for (Symbol s : a.alphabet().symbols()) {
            auto next = post(a, macros[id], s);
            if (next.empty()) continue;
            auto to = intern(next);
            trans.push_back({id, s, to});
        }
    }
    std::vector<std::string> names;
    StateSet fin;
    for (std::size_t i = 0; i < macros.size(); ++i) {
        names.push_back(macrostate_name(a, macros[i]));
        if (intersects_finals(a, macros[i])) fin.push_back(static_cast<StateId>(i));
    }
    StateSet init;
    if (!macros.empty()) init.push_back(0);
    return Nfa(a.alphabet(), std::move(names), std::move(init), std::move(fin), std::move(trans));
}

Nfa complement(const Nfa& a)
{
    auto d = a.is_deterministic() ? a : determinize(a);
    // Complete with a sink, then swap accepting states.
    const auto n = static_cast<StateId>(d.num_states());
    auto names = d.state_names();
    std::string sink = "sink";
    while (d.find_state(sink)) sink += "'";
    names.push_back(sink);
    std::vector<Transition> trans = d.transitions();
    for (StateId q = 0; q <= n; ++q)
        for (Symbol s : d.alphabet().symbols())
            if (q == n || d.outgoing(q, s).empty()) trans.push_back({q, s, n});
    StateSet fin;
    for (StateId q = 0; q < n; ++q)
        if (!d.is_final(q)) fin.push_back(q);
    fin.push_back(n);
    StateSet init = d.initials().empty() ? StateSet{n} : d.initials();
    return trim(Nfa(d.alphabet(), std::move(names), std::move(init), std::move(fin), std::move(trans)));
}

// ---------------------------------------------------------------- product / union

Nfa product(const Nfa& a, const Nfa& b, ProductMode mode)
{
    require_same_alphabet(a, b);
    constexpr StateId absent = static_cast<StateId>(-1);
    using Pair = std::pair<StateId, StateId>;
    std::map<Pair, StateId> index;
    std::vector<Pair> pairs;
    std::deque<StateId> queue;
    auto intern = [&](Pair p) {
        auto [it, fresh] = index.emplace(p, static_cast<StateId>(pairs.size()));
        if (fresh) {
            pairs.push_back(p);
            queue.push_back(it->second);
        }
        return it->second;
    };
    StateSet init;
    if (mode == ProductMode::intersection) {
        for (auto p : a.initials())
            for (auto q : b.initials()) init.push_back(intern({p, q}));
    } else {
        std::vector<StateId> ai(a.initials().begin(), a.initials().end());
        std::vector<StateId> bi(b.initials().begin(), b.initials().end());
        if (ai.empty()) ai.push_back(absent);
        if (bi.empty()) bi.push_back(absent);
        for (auto p : ai)
            for (auto q : bi) init.push_back(intern({p, q}));
    }
    std::vector<Transition> trans;
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        auto [p, q] = pairs[id];
        for (Symbol s : a.alphabet().symbols()) {
            std::vector<StateId> ps, qs;
            if (p != absent)
                for (auto i : a.outgoing(p, s)) ps.push_back(a.transitions()[i].to);
            if (q != absent)
                for (auto i : b.outgoing(q, s)) qs.push_back(b.transitions()[i].to);
            if (mode == ProductMode::intersection) {
                for (auto p2 : ps)
                    for (auto q2 : qs) trans.push_back({id, s, intern({p2, q2})});
            } else {
                if (ps.empty() && qs.empty()) continue;
                if (ps.empty()) ps.push_back(absent);
                if (qs.empty()) qs.push_back(absent);
                for (auto p2 : ps)
                    for (auto q2 : qs) trans.push_back({id, s, intern({p2, q2})});
            }
        }
    }
    std::vector<std::string> names;
    StateSet fin;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        names.push_back("(" + (p == absent ? std::string("-") : a.name(p)) + ","
                        + (q == absent ? std::string("-") : b.name(q)) + ")");
        bool fa = p != absent && a.is_final(p);
        bool fb = q != absent && b.is_final(q);
        if (mode == ProductMode::intersection ? (fa && fb) : (fa || fb)) fin.push_back(static_cast<StateId>(i));
    }
    return Nfa(a.alphabet(), std::move(names), std::move(init), std::move(fin), std::move(trans));
}

Nfa disjoint_union(const Nfa& a, const Nfa& b)
{
    require_same_alphabet(a, b);
    bool clash = false;
    for (const auto& n : b.state_names())
        if (a.find_state(n)) { clash = true; break; }
    std::vector<std::string> names;
    for (const auto& n : a.state_names()) names.push_back(clash ? "1:" + n : n);
    for (const auto& n : b.state_names()) names.push_back(clash ? "2:" + n : n);
    const auto off = static_cast<StateId>(a.num_states());
    StateSet init = a.initials(), fin = a.finals();
    for (auto q : b.initials()) init.push_back(q + off);
    for (auto q : b.finals()) fin.push_back(q + off);
    auto trans = a.transitions();
    for (auto t : b.transitions()) trans.push_back({t.from + off, t.symbol, t.to + off});
    return Nfa(a.alphabet(), std::move(names), std::move(init), std::move(fin), std::move(trans));
}

// ---------------------------------------------------------------- inclusion

std::optional<Word> includes(const Nfa& a, const Nfa& b)
{
    require_same_alphabet(a, b);
    // Breadth-first over pairs of macrostates (b-side, a-side) with symbols in
    // order: the first bad pair dequeued carries the shortlex-least word.
    using Pair = std::pair<StateSet, StateSet>;
    std::map<Pair, std::size_t> seen;
    std::vector<Pair> nodes;
    std::vector<std::pair<std::size_t, Symbol>> parent;
    std::deque<std::size_t> queue;
    auto visit = [&](Pair p, std::size_t from, Symbol s) {
        auto [it, fresh] = seen.emplace(p, nodes.size());
        if (!fresh) return;
        nodes.push_back(std::move(p));
        parent.emplace_back(from, s);
        queue.push_back(it->second);
    };
    if (b.initials().empty()) return std::nullopt;
    visit({b.initials(), a.initials()}, static_cast<std::size_t>(-1), 0);
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        const auto& [sb, sa] = nodes[id];
        if (intersects_finals(b, sb) && !intersects_finals(a, sa)) {
            Word w;
            for (auto cur = id; parent[cur].first != static_cast<std::size_t>(-1); cur = parent[cur].first)
                w.push_back(parent[cur].second);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (Symbol s : b.alphabet().symbols()) {
            auto nb = post(b, nodes[id].first, s);
            if (nb.empty()) continue;
            visit({std::move(nb), post(a, nodes[id].second, s)}, id, s);
        }
    }
    return std::nullopt;
}

std::optional<Word> shortest_word(const Nfa& a)
{
    // Inclusion of L(a) in the empty language.
    Nfa empty(a.alphabet(), {}, {}, {}, {});
    return includes(empty, a);
}

bool is_empty(const Nfa& a)
{
    return !shortest_word(a).has_value();
}

Nfa residual_from(const Nfa& a, const StateSet& s)
{
    for (auto q : s)
        if (q >= a.num_states())
            throw Error(ErrorKind::foreign_state, "state index " + std::to_string(q) + " not in automaton");
    return Nfa(a.alphabet(), a.state_names(), s, a.finals(), a.transitions());
}

} // namespace seqsynth
