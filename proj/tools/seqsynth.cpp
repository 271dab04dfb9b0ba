// Command-line front end. Exit codes: 0 realisable / success, 1 unrealisable /
// verification failure, 2 unknown, 3 invalid input.

#include "seqsynth/async.hpp"
#include "seqsynth/corpus.hpp"
#include "seqsynth/error.hpp"
#include "seqsynth/game.hpp"
#include "seqsynth/spec_io.hpp"
#include "seqsynth/sync.hpp"
#include "seqsynth/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace seqsynth;

namespace {

constexpr int exit_realisable = 0;
constexpr int exit_unrealisable = 1;
constexpr int exit_unknown = 2;
constexpr int exit_input = 3;

std::size_t default_budget()
{
    if (const char* env = std::getenv("SEQSYNTH_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw Error(ErrorKind::invalid_argument, "SEQSYNTH_BUDGET must be a positive integer");
        }
    }
    return default_vertex_cap;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path);
    out << text;
}

const MultiSequentialTransducer& require_multi(const SpecFile& f, const char* what)
{
    if (!f.multi) throw Error(ErrorKind::invalid_argument, std::string(what) + " needs a part-structured specification");
    return *f.multi;
}

std::string show(const Word& w)
{
    return w.empty() ? "ε" : w;
}

/// "xy|p|q|p.x.q,p.y.p,q.x.q,q.y.p": alphabet, initial, finals, transitions.
Nfa parse_dfa(const std::string& text)
{
    std::vector<std::string> fields;
    std::string cur;
    for (char c : text) {
        if (c == '|') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    if (fields.size() != 4) throw Error(ErrorKind::invalid_argument, "DFA must be 'alphabet|initial|finals|transitions'");
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string item;
        for (char c : s) {
            if (c == ',') {
                if (!item.empty()) out.push_back(item);
                item.clear();
            } else {
                item += c;
            }
        }
        if (!item.empty()) out.push_back(item);
        return out;
    };
    std::vector<std::string> names{fields[1]};
    auto id = [&](const std::string& n) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it != names.end()) return static_cast<StateId>(it - names.begin());
        names.push_back(n);
        return static_cast<StateId>(names.size() - 1);
    };
    std::vector<Transition> trans;
    for (const auto& t : split(fields[3])) {
        auto a = t.find('.'), b = t.rfind('.');
        if (a == std::string::npos || b != a + 2)
            throw Error(ErrorKind::invalid_argument, "DFA transition must be 'from.symbol.to': " + t);
        trans.push_back({id(t.substr(0, a)), t[a + 1], id(t.substr(b + 1))});
    }
    StateSet finals;
    for (const auto& f : split(fields[2])) finals.push_back(id(f));
    return Nfa(Alphabet(fields[0]), names, {0}, make_state_set(finals), trans);
}

Json verdict_json(const char* mode, Verdict v)
{
    Json j = Json::object();
    j["format"] = format_version;
    j["mode"] = mode;
    j["verdict"] = std::string(to_string(v));
    return j;
}

struct Options {
    std::string spec;
    std::string mode = "async";
    std::size_t max_k = 4;
    WitnessBounds witness;
    std::size_t budget = 0;
    bool json = false;
    std::string out;
    std::string input;
    std::string realiser;
    std::size_t test_len = 10;
    std::string family;
    int n = 2;
    std::string word;
    std::string alphabet = "ab";
    std::size_t length = 0;
    std::vector<std::string> dfas;
    std::size_t k = 1;
    std::string dot;
    bool stats = false;
};

DecideOptions decide_options(const Options& o)
{
    DecideOptions d;
    d.k_max = o.max_k;
    d.witness = o.witness;
    d.game.vertex_cap = o.budget ? o.budget : default_budget();
    return d;
}

int cmd_validate(const Options& o)
{
    auto f = load_spec(o.spec);
    if (f.multi) {
        const auto& t = *f.multi;
        bool sync = true;
        for (const auto& p : t.parts()) sync = sync && is_synchronous(p.transducer());
        std::cout << t.num_parts() << (t.num_parts() == 1 ? " part, " : " parts, ")
                  << (sync ? "synchronous" : "asynchronous") << ", " << (is_trim(t) ? "trim" : "not trim") << "\n";
    } else {
        auto c = classify(*f.general);
        std::cout << "general transducer, " << (c.sequential ? "sequential" : "not sequential") << ", "
                  << (c.synchronous ? "synchronous" : "asynchronous") << ", "
                  << (is_trim(f.general->input()) ? "trim" : "not trim") << "\n";
    }
    return 0;
}

int cmd_check(const Options& o)
{
    auto f = load_spec(o.spec);
    if (o.mode == "sync") {
        const auto& t = trim(require_multi(f, "sync check"));
        auto v = check_residual_property(t);
        const auto verdict = v.realisable ? Verdict::realisable : Verdict::unrealisable;
        if (o.json) {
            auto j = verdict_json("sync", verdict);
            if (v.realiser) {
                j["realiser_states"] = v.realiser->transducer().num_states();
                j["realiser"] = realiser_to_json(*v.realiser);
            }
            if (v.certificate) j["certificate"] = to_json(*v.certificate, t);
            std::cout << dump(j);
        } else if (v.realisable) {
            std::cout << "REALISABLE (synchronous realiser with " << v.realiser->transducer().num_states()
                      << " states)\n";
        } else {
            std::cout << "UNREALISABLE (critical prefix " << show(v.certificate->prefix) << ")\n";
        }
        return v.realisable ? exit_realisable : exit_unrealisable;
    }

    if (!f.multi) {
        // General transducers only get the game direction.
        auto it = iterate_k(*f.general, o.max_k, decide_options(o).game);
        const auto verdict = it.winning_bound ? Verdict::realisable : Verdict::unknown;
        if (o.json) {
            auto j = verdict_json("async", verdict);
            if (it.winning_bound) j["k"] = *it.winning_bound;
            Json games = Json::array();
            for (const auto& g : it.history) games.push_back(to_json(g));
            j["games"] = std::move(games);
            std::cout << dump(j);
        } else if (it.winning_bound) {
            std::cout << "REALISABLE (K=" << *it.winning_bound << ")\n";
        } else {
            std::cout << "UNKNOWN (no win up to K=" << o.max_k << ")\n";
        }
        return it.winning_bound ? exit_realisable : exit_unknown;
    }

    const auto t = trim(*f.multi);
    auto v = decide(t, decide_options(o));
    if (o.json) {
        auto j = verdict_json("async", v.verdict);
        if (v.winning_bound) j["k"] = *v.winning_bound;
        if (v.realiser) {
            j["realiser_states"] = v.realiser->transducer().num_states();
            j["realiser"] = realiser_to_json(*v.realiser);
        }
        if (v.witness) j["witness"] = to_json(*v.witness, t);
        Json games = Json::array();
        for (const auto& g : v.games) games.push_back(to_json(g));
        j["games"] = std::move(games);
        Json bounds = Json::object();
        bounds["max_k"] = v.options.k_max;
        bounds["witness_u"] = v.options.witness.max_u;
        bounds["witness_v"] = v.options.witness.max_v;
        bounds["witness_nodes"] = v.options.witness.max_nodes;
        bounds["vertex_cap"] = v.options.game.vertex_cap;
        bounds["theoretical_k"] = theoretical_K(t).str();
        bounds["budget_exceeded"] = v.budget_exceeded;
        j["bounds"] = std::move(bounds);
        std::cout << dump(j);
    } else {
        switch (v.verdict) {
        case Verdict::realisable:
            std::cout << "REALISABLE (K=" << *v.winning_bound << ", realiser with "
                      << v.realiser->transducer().num_states() << " states)\n";
            break;
        case Verdict::unrealisable:
            if (v.witness)
                std::cout << "UNREALISABLE (witness with " << v.witness->size() << " nodes, root u="
                          << show(v.witness->u) << " v=" << show(v.witness->v) << ")\n";
            else
                std::cout << "UNREALISABLE (game lost at the completeness bound)\n";
            break;
        case Verdict::unknown:
            std::cout << "UNKNOWN (max K " << o.max_k << ", witness bounds " << o.witness.max_u << "/"
                      << o.witness.max_v << "/" << o.witness.max_nodes
                      << (v.budget_exceeded ? ", vertex budget exceeded" : "") << ")\n";
            break;
        }
    }
    return v.verdict == Verdict::realisable ? exit_realisable
         : v.verdict == Verdict::unrealisable ? exit_unrealisable
                                              : exit_unknown;
}

int cmd_synthesize(const Options& o)
{
    auto f = load_spec(o.spec);
    std::optional<SequentialTransducer> r;
    std::optional<std::size_t> k;
    Verdict verdict = Verdict::unknown;
    if (f.multi) {
        auto v = decide(trim(*f.multi), decide_options(o));
        verdict = v.verdict;
        r = v.realiser;
        k = v.winning_bound;
    } else {
        auto it = iterate_k(*f.general, o.max_k, decide_options(o).game);
        r = it.realiser;
        k = it.winning_bound;
        if (r) verdict = Verdict::realisable;
    }
    if (!r) {
        std::cout << to_string(verdict) << "\n";
        return verdict == Verdict::unrealisable ? exit_unrealisable : exit_unknown;
    }
    const auto text = dump(realiser_to_json(*r));
    if (o.out.empty()) std::cout << text;
    else write_text(o.out, text);
    std::cout << "K=" << *k << ", " << r->transducer().num_states() << " states\n";
    return exit_realisable;
}

int cmd_run(const Options& o)
{
    auto f = load_spec(o.spec);
    for (const auto& w : evaluate(f.relation(), o.input)) std::cout << w << "\n";
    return 0;
}

int cmd_verify(const Options& o)
{
    auto spec = load_spec(o.spec);
    auto rf = load_spec(o.realiser);
    if (!rf.multi || rf.multi->num_parts() != 1)
        throw Error(ErrorKind::invalid_argument, "realiser file must hold exactly one sequential part");
    auto rep = verify_realiser(rf.multi->part(0), spec.relation(), o.test_len);
    if (o.json) {
        std::cout << dump(to_json(rep));
    } else {
        std::cout << "domain: " << (rep.domain.ok ? "equal" : "differs on " + show(*rep.domain.counterexample)) << "\n";
        std::cout << "membership up to length " << o.test_len << ": "
                  << (rep.membership.ok ? "ok" : "fails on " + show(*rep.membership.failing) + " (" + rep.membership.reason + ")")
                  << " [" << rep.membership.words_checked << " words]\n";
    }
    return rep.ok() ? 0 : 1;
}

int cmd_gen(const Options& o)
{
    Json j;
    if (o.family == "rewrite-pair") {
        j = spec_to_json(corpus::rewrite_pair());
    } else if (o.family == "rewrite-pair-copying") {
        j = spec_to_json(corpus::rewrite_pair_copying_c());
    } else if (o.family == "badjpair") {
        j = spec_to_json(corpus::gen_badjpair(o.n));
    } else if (o.family == "hardness") {
        std::vector<Nfa> dfas;
        for (const auto& d : o.dfas) dfas.push_back(parse_dfa(d));
        j = spec_to_json(corpus::gen_hardness(dfas));
    } else if (o.family == "subword") {
        const Alphabet a(o.alphabet);
        if (o.length > 0) {
            j = spec_to_json(corpus::gen_subword_union(o.length, a));
        } else {
            auto s = corpus::gen_subword(o.word, a);
            j = spec_to_json(MultiSequentialTransducer({s}, {"sub_" + o.word}));
        }
    } else {
        throw Error(ErrorKind::invalid_argument, "unknown family '" + o.family + "'");
    }
    const auto text = dump(j);
    if (o.out.empty()) std::cout << text;
    else write_text(o.out, text);
    return 0;
}

int cmd_game(const Options& o)
{
    auto f = load_spec(o.spec);
    GameOptions go;
    go.vertex_cap = o.budget ? o.budget : default_budget();
    auto g = f.multi ? build_game(*f.multi, o.k, go) : build_game(*f.general, o.k, go);
    auto sol = solve_safety(g);
    if (!o.dot.empty()) write_text(o.dot, export_dot(g));
    const auto st = game_stats(g, sol);
    if (o.stats) {
        std::cout << dump(to_json(st));
    } else {
        std::cout << "K=" << st.bound << ": " << st.adam_vertices << " Adam vertices, " << st.eve_vertices
                  << " Eve vertices, " << st.edges << " edges, " << st.unsafe << " unsafe, Eve "
                  << (st.eve_wins ? "wins" : "loses") << "\n";
    }
    return st.eve_wins ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sequential realisability of multi-sequential transducer specifications"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Parse a specification and print its classification");
    validate->add_option("spec", o.spec, "Specification file")->required();

    auto* check = app.add_subcommand("check", "Decide realisability");
    check->add_option("spec", o.spec, "Specification file")->required();
    check->add_option("--mode", o.mode, "sync or async")->check(CLI::IsMember({"sync", "async"}));
    check->add_option("--max-k", o.max_k, "Largest delay bound tried by the game");
    check->add_option("--witness-u", o.witness.max_u, "Longest u in the witness search");
    check->add_option("--witness-v", o.witness.max_v, "Longest v in the witness search");
    check->add_option("--witness-nodes", o.witness.max_nodes, "Largest witness tree");
    check->add_option("--budget", o.budget, "Game vertex cap (default: SEQSYNTH_BUDGET or 5000000)");
    check->add_flag("--json", o.json, "Print the verdict as JSON");

    auto* synth = app.add_subcommand("synthesize", "Synthesise a sequential realiser");
    synth->add_option("spec", o.spec, "Specification file")->required();
    synth->add_option("--max-k", o.max_k, "Largest delay bound tried by the game");
    synth->add_option("--witness-u", o.witness.max_u, "Longest u in the witness search");
    synth->add_option("--witness-v", o.witness.max_v, "Longest v in the witness search");
    synth->add_option("--witness-nodes", o.witness.max_nodes, "Largest witness tree");
    synth->add_option("--budget", o.budget, "Game vertex cap");
    synth->add_option("-o,--output", o.out, "Realiser file (stdout when absent)");

    auto* run = app.add_subcommand("run", "Print every output of the specification on an input word");
    run->add_option("spec", o.spec, "Specification file")->required();
    run->add_option("--input", o.input, "Input word")->required();

    auto* verify = app.add_subcommand("verify", "Check a realiser against a specification");
    verify->add_option("spec", o.spec, "Specification file")->required();
    verify->add_option("realiser", o.realiser, "Realiser file")->required();
    verify->add_option("--test-len", o.test_len, "Longest input for the membership check");
    verify->add_flag("--json", o.json, "Print the report as JSON");

    auto* gen = app.add_subcommand("gen", "Generate a specification family");
    gen->add_option("family", o.family, "hardness, badjpair, subword, rewrite-pair or rewrite-pair-copying")->required();
    gen->add_option("--n", o.n, "Parameter n of the bad j-pair family");
    gen->add_option("--word", o.word, "Subword of the subword family");
    gen->add_option("--alphabet", o.alphabet, "Alphabet of the subword family");
    gen->add_option("--length", o.length, "Union of all subwords of this length");
    gen->add_option("--dfa", o.dfas, "DFA 'alphabet|initial|finals|from.sym.to,...' (repeatable)");
    gen->add_option("-o,--output", o.out, "Output file (stdout when absent)");

    auto* game = app.add_subcommand("game", "Build and solve one delay game");
    game->add_option("spec", o.spec, "Specification file")->required();
    game->add_option("--k", o.k, "Delay bound");
    game->add_option("--dot", o.dot, "Write the arena as Graphviz");
    game->add_option("--budget", o.budget, "Game vertex cap");
    game->add_flag("--stats", o.stats, "Print statistics as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*check) return cmd_check(o);
        if (*synth) return cmd_synthesize(o);
        if (*run) return cmd_run(o);
        if (*verify) return cmd_verify(o);
        if (*gen) return cmd_gen(o);
        if (*game) return cmd_game(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
