#include "seqsynth/transducer.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace seqsynth {

namespace {

void check_output_word(const Alphabet& out, const Word& w, std::string_view what)
{
    for (Symbol s : w)
        if (!out.contains(s))
            throw Error(ErrorKind::unknown_symbol,
                        std::string(what) + " uses output symbol '" + s + "' outside the output alphabet");
}

} // namespace

// ---------------------------------------------------------------- Transducer

Transducer::Transducer(const TransducerSpec& spec) : output_alphabet_(spec.output_alphabet)
{
    std::map<std::string, StateId, std::less<>> index;
    for (const auto& name : spec.states) {
        if (!index.emplace(name, static_cast<StateId>(index.size())).second)
            throw Error(ErrorKind::invalid_argument, "duplicate state '" + name + "'");
    }
    auto lookup = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw Error(ErrorKind::foreign_state, "undeclared state '" + name + "'");
        return it->second;
    };

    struct Rec {
        Transition t;
        Word out;
    };
    std::vector<Rec> recs;
    for (const auto& tr : spec.transitions) {
        if (!spec.input_alphabet.contains(tr.input))
            throw Error(ErrorKind::unknown_symbol, std::string("input symbol '") + tr.input + "'");
        check_output_word(output_alphabet_, tr.output, "transition " + tr.from + " -> " + tr.to);
        recs.push_back({{lookup(tr.from), tr.input, lookup(tr.to)}, tr.output});
    }
    std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i - 1].t == recs[i].t)
            throw Error(ErrorKind::invalid_argument,
                        "duplicate transition " + spec.states[recs[i].t.from] + " -" + recs[i].t.symbol + "-> "
                            + spec.states[recs[i].t.to]);

    StateSet init, fin;
    for (const auto& name : spec.initials) init.push_back(lookup(name));
    terminal_.assign(spec.states.size(), Word{});
    for (const auto& [name, out] : spec.finals) {
        auto q = lookup(name);
        check_output_word(output_alphabet_, out, "terminal output of " + name);
        fin.push_back(q);
        terminal_[q] = out;
    }
    std::vector<Transition> trans;
    for (auto& r : recs) {
        trans.push_back(r.t);
        outputs_.push_back(std::move(r.out));
    }
    input_ = Nfa(spec.input_alphabet, spec.states, std::move(init), std::move(fin), std::move(trans));
}

Transducer::Transducer(Nfa input, Alphabet output_alphabet, std::vector<Word> outputs, std::vector<Word> terminal)
    : input_(std::move(input)),
      output_alphabet_(std::move(output_alphabet)),
      outputs_(std::move(outputs)),
      terminal_(std::move(terminal))
{
    if (outputs_.size() != input_.transitions().size())
        throw Error(ErrorKind::invalid_argument, "output map is not total on transitions");
    terminal_.resize(input_.num_states());
    for (const auto& w : outputs_) check_output_word(output_alphabet_, w, "transition");
    for (StateId q = 0; q < input_.num_states(); ++q) {
        if (!input_.is_final(q)) terminal_[q].clear();
        check_output_word(output_alphabet_, terminal_[q], "terminal output");
    }
}

std::size_t Transducer::longest_output() const
{
    std::size_t best = 0;
    for (const auto& w : outputs_) best = std::max(best, w.size());
    return best;
}

TransducerSpec Transducer::to_spec() const
{
    TransducerSpec spec{input_.alphabet(), output_alphabet_, input_.state_names(), {}, {}, {}};
    for (auto q : input_.initials()) spec.initials.push_back(name(q));
    for (auto q : input_.finals()) spec.finals.emplace_back(name(q), terminal_[q]);
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
        const auto& t = input_.transitions()[i];
        spec.transitions.push_back({name(t.from), t.symbol, outputs_[i], name(t.to)});
    }
    return spec;
}

// ---------------------------------------------------------------- SequentialTransducer

SequentialTransducer::SequentialTransducer(Transducer t) : t_(std::move(t))
{
    if (!t_.input().is_deterministic())
        throw Error(ErrorKind::not_sequential, "input automaton is not deterministic");
}

std::optional<std::size_t> SequentialTransducer::step(StateId q, Symbol s) const
{
    auto out = t_.input().outgoing(q, s);
    if (out.empty()) return std::nullopt;
    return out.front();
}

std::optional<SequentialTransducer::Run> SequentialTransducer::run(std::string_view u,
                                                                   std::optional<StateId> from) const
{
    Run r{from.value_or(initial()), {}};
    for (Symbol s : u) {
        if (!t_.input_alphabet().contains(s))
            throw Error(ErrorKind::unknown_symbol, std::string("symbol '") + s + "' not in alphabet");
        auto i = step(r.state, s);
        if (!i) return std::nullopt;
        r.output += t_.output(*i);
        r.state = t_.input().transitions()[*i].to;
    }
    return r;
}

std::optional<Word> SequentialTransducer::apply(std::string_view u) const
{
    auto r = run(u);
    if (!r || !t_.input().is_final(r->state)) return std::nullopt;
    return r->output + t_.terminal(r->state);
}

// ---------------------------------------------------------------- MultiSequentialTransducer

MultiSequentialTransducer::MultiSequentialTransducer(std::vector<SequentialTransducer> parts,
                                                     std::vector<std::string> names)
    : parts_(std::move(parts)), names_(std::move(names))
{
    if (parts_.empty()) throw Error(ErrorKind::invalid_argument, "a multi-sequential transducer needs a part");
    if (names_.empty())
        for (std::size_t i = 0; i < parts_.size(); ++i) names_.push_back("part" + std::to_string(i + 1));
    if (names_.size() != parts_.size()) throw Error(ErrorKind::invalid_argument, "part name count mismatch");

    const auto& in = parts_.front().transducer().input_alphabet();
    const auto& out = parts_.front().transducer().output_alphabet();
    std::vector<std::string> states;
    StateSet init, fin;
    std::vector<Transition> trans;
    std::vector<Word> outputs, terminal;
    for (const auto& p : parts_) {
        const auto& t = p.transducer();
        if (t.input_alphabet() != in || t.output_alphabet() != out)
            throw Error(ErrorKind::alphabet_mismatch, "parts must share alphabets");
        const auto off = static_cast<StateId>(states.size());
        offsets_.push_back(off);
        for (const auto& n : t.input().state_names()) states.push_back(n);
        for (auto q : t.input().initials()) init.push_back(q + off);
        for (auto q : t.input().finals()) fin.push_back(q + off);
        for (std::size_t i = 0; i < t.input().transitions().size(); ++i) {
            auto tr = t.input().transitions()[i];
            trans.push_back({tr.from + off, tr.symbol, tr.to + off});
            outputs.push_back(t.output(i));
        }
        for (StateId q = 0; q < t.num_states(); ++q) terminal.push_back(t.terminal(q));
    }
    offsets_.push_back(static_cast<StateId>(states.size()));
    // Per-part transitions are sorted and offsets increase, so the flat order matches.
    flat_ = Transducer(Nfa(in, std::move(states), std::move(init), std::move(fin), std::move(trans)), out,
                       std::move(outputs), std::move(terminal));
}

std::size_t MultiSequentialTransducer::part_of(StateId flat_state) const
{
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat_state);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::size_t MultiSequentialTransducer::max_part_states() const
{
    std::size_t m = 0;
    for (const auto& p : parts_) m = std::max(m, p.transducer().num_states());
    return m;
}

// ---------------------------------------------------------------- operations

std::set<Word> evaluate(const Transducer& t, std::string_view u)
{
    const auto& a = t.input();
    std::set<std::pair<StateId, Word>> cur;
    for (auto q : a.initials()) cur.emplace(q, Word{});
    for (Symbol s : u) {
        if (!a.alphabet().contains(s))
            throw Error(ErrorKind::unknown_symbol, std::string("symbol '") + s + "' not in alphabet");
        std::set<std::pair<StateId, Word>> next;
        for (const auto& [q, v] : cur)
            for (auto i : a.outgoing(q, s)) next.emplace(a.transitions()[i].to, v + t.output(i));
        cur = std::move(next);
    }
    std::set<Word> result;
    for (const auto& [q, v] : cur)
        if (a.is_final(q)) result.insert(v + t.terminal(q));
    return result;
}

Transducer disjoint_union(const Transducer& a, const Transducer& b)
{
    if (a.output_alphabet() != b.output_alphabet())
        throw Error(ErrorKind::alphabet_mismatch, "output alphabets differ");
    auto in = disjoint_union(a.input(), b.input());
    // disjoint_union keeps a's transitions before b's, both already sorted and
    // b's offsets above a's, so outputs concatenate in order.
    auto outputs = a.outputs();
    outputs.insert(outputs.end(), b.outputs().begin(), b.outputs().end());
    std::vector<Word> terminal;
    for (StateId q = 0; q < a.num_states(); ++q) terminal.push_back(a.terminal(q));
    for (StateId q = 0; q < b.num_states(); ++q) terminal.push_back(b.terminal(q));
    return Transducer(std::move(in), a.output_alphabet(), std::move(outputs), std::move(terminal));
}

Nfa domain_automaton(const Transducer& t)
{
    return t.input();
}

Transducer trim(const Transducer& t)
{
    auto trimmed = trim(t.input());
    // Match transitions of the trimmed automaton back to outputs by names.
    std::map<std::tuple<std::string, Symbol, std::string>, Word> out_by_key;
    for (std::size_t i = 0; i < t.outputs().size(); ++i) {
        const auto& tr = t.input().transitions()[i];
        out_by_key[{t.name(tr.from), tr.symbol, t.name(tr.to)}] = t.output(i);
    }
    std::vector<Word> outputs;
    for (const auto& tr : trimmed.transitions())
        outputs.push_back(out_by_key.at({trimmed.name(tr.from), tr.symbol, trimmed.name(tr.to)}));
    std::vector<Word> terminal;
    for (StateId q = 0; q < trimmed.num_states(); ++q)
        terminal.push_back(t.terminal(*t.input().find_state(trimmed.name(q))));
    return Transducer(std::move(trimmed), t.output_alphabet(), std::move(outputs), std::move(terminal));
}

MultiSequentialTransducer trim(const MultiSequentialTransducer& t)
{
    std::vector<SequentialTransducer> parts;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < t.num_parts(); ++i) {
        auto p = trim(t.part(i).transducer());
        // A part with empty domain contributes nothing to the relation.
        if (p.num_states() == 0) continue;
        parts.emplace_back(std::move(p));
        names.push_back(t.part_name(i));
    }
    if (parts.empty()) {
        // Keep one empty-language part so alphabets survive; it has a lone
        // non-accepting initial state.
        TransducerSpec spec{t.input_alphabet(), t.output_alphabet(), {"empty"}, {"empty"}, {}, {}};
        parts.emplace_back(Transducer(spec));
        names.push_back("empty");
    }
    return MultiSequentialTransducer(std::move(parts), std::move(names));
}

bool is_trim(const MultiSequentialTransducer& t)
{
    for (const auto& p : t.parts())
        if (!is_trim(p.transducer().input())) return false;
    return true;
}

SequentialTransducer residual_part(const SequentialTransducer& d, StateId q, const Word& pending)
{
    const auto& t = d.transducer();
    if (q >= t.num_states()) throw Error(ErrorKind::foreign_state, "state not in transducer");
    auto spec = t.to_spec();
    std::string fresh = "<" + t.name(q) + "|" + pending + ">";
    while (t.input().find_state(fresh)) fresh += "'";
    spec.states.push_back(fresh);
    spec.initials = {fresh};
    for (auto i : t.input().outgoing(q)) {
        const auto& tr = t.input().transitions()[i];
        spec.transitions.push_back({fresh, tr.symbol, pending + t.output(i), t.name(tr.to)});
    }
    if (t.input().is_final(q)) spec.finals.emplace_back(fresh, pending + t.terminal(q));
    auto trimmed = trim(Transducer(spec));
    if (trimmed.num_states() == 0)
        trimmed = Transducer(TransducerSpec{t.input_alphabet(), t.output_alphabet(), {fresh}, {fresh}, {}, {}});
    return SequentialTransducer(std::move(trimmed));
}

bool is_synchronous(const Transducer& t)
{
    for (const auto& w : t.outputs())
        if (w.size() != 1) return false;
    for (auto q : t.input().finals())
        if (!t.terminal(q).empty()) return false;
    return true;
}

Classification classify(const Transducer& t, std::size_t sample_length)
{
    Classification c;
    c.sequential = t.input().is_deterministic();
    c.synchronous = is_synchronous(t);
    c.functional_on_sample = true;
    for (const auto& u : words_up_to(t.input_alphabet(), sample_length))
        if (evaluate(t, u).size() > 1) {
            c.functional_on_sample = false;
            break;
        }
    return c;
}

std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len)
{
    std::vector<Word> out{Word{}};
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const auto level_end = out.size();
        for (auto i = level_begin; i < level_end; ++i)
            for (Symbol s : alphabet.symbols()) out.push_back(out[i] + s);
        level_begin = level_end;
    }
    return out;
}

} // namespace seqsynth
