// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include "oracles.hpp"
#include "seqsynth/async.hpp"
#include "seqsynth/corpus.hpp"
#include "seqsynth/delay.hpp"
#include "seqsynth/error.hpp"
#include "seqsynth/game.hpp"
#include "seqsynth/spec_io.hpp"
#include "seqsynth/sync.hpp"
#include "seqsynth/verifier.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <tuple>

#include <unistd.h>

#ifndef SEQSYNTH_CLI
#error "SEQSYNTH_CLI must name the command-line binary"
#endif
#ifndef SEQSYNTH_CORPUS
#error "SEQSYNTH_CORPUS must name the corpus directory"
#endif

using namespace seqsynth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<void(Outcome&)>& body,
            double limit_seconds = 0)
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0)
        o.require(secs < limit_seconds, "runtime " + std::to_string(secs) + " s exceeds " + std::to_string(limit_seconds) + " s");
    std::ostringstream line;
    line << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << secs << " s)";
    for (const auto& n : o.notes) line << "\n    " << n;
    std::cout << line.str() << std::endl;
    if (!o.ok) ++failures;
}

std::vector<std::pair<std::string, MultiSequentialTransducer>> load_corpus()
{
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(SEQSYNTH_CORPUS))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, MultiSequentialTransducer>> out;
    for (const auto& f : files) out.emplace_back(f.filename().string(), *load_spec(f).multi);
    return out;
}

// Two 2-state DFAs over {x,y}: "ends in x", "ends in y" and "even number of x".
Nfa ends_with(char c)
{
    const StateId after = c == 'x' ? 0 : 1;
    return Nfa(Alphabet("xy"), {"p", "q"}, {0}, {after}, {{0, 'x', 0}, {0, 'y', 1}, {1, 'x', 0}, {1, 'y', 1}});
}

Nfa even_x() { return Nfa(Alphabet("xy"), {"e", "o"}, {0}, {0}, {{0, 'x', 1}, {0, 'y', 0}, {1, 'x', 0}, {1, 'y', 1}}); }

bool realiser_passes(const SequentialTransducer& r, const Transducer& t, std::size_t len)
{
    return verify_realiser(r, t, len).ok();
}

// ---- mutants -------------------------------------------------------------

std::vector<SequentialTransducer> realiser_mutants(const SequentialTransducer& r, std::size_t count)
{
    const auto base = r.transducer().to_spec();
    std::vector<SequentialTransducer> out;
    const char letter = base.output_alphabet.symbols().front();
    for (std::size_t k = 0; out.size() < count && k < 4 * base.transitions.size() + base.states.size(); ++k) {
        auto s = base;
        const auto i = (k / 4) % s.transitions.size();
        switch (k % 4) {
        case 0: s.transitions[i].output += letter; break;
        case 1: s.transitions.erase(s.transitions.begin() + static_cast<std::ptrdiff_t>(i)); break;
        case 2: {
            // Flip the finality of the transition's target.
            const auto& q = s.transitions[i].to;
            auto it = std::find_if(s.finals.begin(), s.finals.end(), [&](const auto& f) { return f.first == q; });
            if (it == s.finals.end()) s.finals.emplace_back(q, "");
            else s.finals.erase(it);
            break;
        }
        case 3: {
            if (s.finals.empty()) continue;
            s.finals[i % s.finals.size()].second += letter;
            break;
        }
        }
        out.emplace_back(Transducer(s));
    }
    return out;
}

std::optional<Word> word_in_part_after(const MultiSequentialTransducer& t, std::size_t part, const Word& u)
{
    for (const auto& w : oracle::all_words(t.input_alphabet().to_string(), 6))
        if (!oracle::run_outputs(t.part(part), u + w).empty()) return w;
    return std::nullopt;
}

std::vector<WitnessNode> witness_mutants(const MultiSequentialTransducer& t, const WitnessNode& w)
{
    std::vector<WitnessNode> out;
    auto m = w;
    m.u = "";
    out.push_back(m);
    for (std::size_t c = 0; c < w.children.size(); ++c) {
        m = w;
        m.children.erase(m.children.begin() + static_cast<std::ptrdiff_t>(c));
        out.push_back(m);
    }
    m = w;
    m.parts.pop_back();
    out.push_back(m);
    for (std::size_t c = 0; c < w.children.size(); ++c) {
        const auto& leaf = w.children[c];
        if (!leaf.leaf_word) continue;
        if (auto inside = word_in_part_after(t, leaf.parts.front(), leaf.u)) {
            m = w;
            m.children[c].leaf_word = *inside;
            out.push_back(m);
        }
    }
    for (const auto& v : oracle::all_words(t.input_alphabet().to_string(), 2)) {
        if (v.empty() || v == w.v || make_critical_loop(t, w.u, v)) continue;
        m = w;
        m.v = v;
        out.push_back(m);
        break;
    }
    const char extra = t.output_alphabet().symbols().front();
    for (std::size_t k = 0; k < w.alpha.size(); ++k) {
        m = w;
        m.alpha[k] += extra;
        out.push_back(m);
        m = w;
        m.beta[k] += extra;
        out.push_back(m);
    }
    for (std::size_t c = 0; c < w.children.size(); ++c) {
        m = w;
        auto& u = m.children[c].u;
        u[0] = u[0] == t.input_alphabet().symbols().front() ? t.input_alphabet().symbols().back()
                                                           : t.input_alphabet().symbols().front();
        out.push_back(m);
    }
    return out;
}

// ---- CLI ------------------------------------------------------------------

struct RunResult {
    std::string output;
    std::vector<std::string> files;
};

RunResult run_cli(const std::string& args, const std::vector<fs::path>& produced)
{
    for (const auto& p : produced) fs::remove(p);
    const std::string cmd = std::string("\"") + SEQSYNTH_CLI + "\" " + args + " 2>&1; echo \"exit=$?\"";
    RunResult r;
    if (FILE* pipe = popen(cmd.c_str(), "r")) {
        std::array<char, 4096> buf{};
        std::size_t n;
        while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
        pclose(pipe);
    }
    for (const auto& p : produced) {
        std::ifstream in(p, std::ios::binary);
        r.files.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return r;
}

} // namespace

int main()
{
    const auto left = corpus::rewrite_pair();
    const auto right = corpus::rewrite_pair_copying_c();

    report("1", "two rewriting parts: sync UNREALISABLE at \"a\", async REALISABLE at K=1", [&](Outcome& o) {
        auto s = check_residual_property(left);
        o.require(!s.realisable, "sync check reported realisable");
        o.require(s.certificate && s.certificate->prefix == "a", "critical prefix is not \"a\"");
        o.require(s.certificate && check_sync_certificate(left, *s.certificate).ok, "certificate does not re-check");
        auto a = decide(left);
        o.require(a.verdict == Verdict::realisable, "async verdict " + std::string(to_string(a.verdict)));
        o.require(a.winning_bound == std::optional<std::size_t>(1), "first winning K is not 1");
        o.require(!a.games.empty() && !a.games[0].eve_wins, "K=0 game is not lost");
        if (a.realiser) {
            o.require(verify_domain(*a.realiser, left.flat()).ok, "domain differs");
            auto m = verify_membership(*a.realiser, left.flat(), 12);
            o.require(m.ok, "membership fails on " + m.failing.value_or("?"));
        }
    }, 5);

    report("2", "copying pair: async UNREALISABLE with a verified witness", [&](Outcome& o) {
        auto v = decide(right);
        o.require(v.verdict == Verdict::unrealisable, "verdict " + std::string(to_string(v.verdict)));
        o.require(v.witness.has_value(), "no witness");
        if (v.witness) {
            auto c = check_witness(right, *v.witness);
            o.require(c.ok, "witness fails condition " + std::to_string(c.condition) + ": " + c.detail);
            const bool expected_root = v.witness->u == "a" && v.witness->v == "c"
                                    && v.witness->parts == std::vector<std::size_t>{0, 1};
            o.require(expected_root || c.ok, "root loop differs and the witness does not verify");
        }
    }, 30);

    report("3", "bad j-pair family n=2: 4 parts, 12 states, REALISABLE, realiser >= 8 states, chi(2) = 121", [&](Outcome& o) {
        auto t = corpus::gen_badjpair(2);
        o.require(t.num_parts() == 4, "part count " + std::to_string(t.num_parts()));
        o.require(t.total_states() == 12, "state count " + std::to_string(t.total_states()));
        auto v = decide(t);
        o.require(v.verdict == Verdict::realisable, "verdict " + std::string(to_string(v.verdict)));
        if (v.realiser) {
            o.require(realiser_passes(*v.realiser, t.flat(), 7), "realiser fails the verifier");
            o.require(v.realiser->transducer().num_states() >= 8,
                      "realiser has " + std::to_string(v.realiser->transducer().num_states()) + " states");
        }
        const auto chi = corpus::chi(2);
        o.require(chi == std::vector<int>{1, 2, 1}, "chi(2) differs");
        for (int j = 1; j <= 2; ++j) o.require(!oracle::bad_jpair(chi, j), "chi(2) has a bad pair");
    }, 60);

    report("4", "hardness family: empty intersection realisable, non-empty refuted by sync check and horizon", [&](Outcome& o) {
        auto t = corpus::gen_hardness({ends_with('x'), ends_with('y')});
        auto s = check_residual_property(t);
        o.require(s.realisable, "sync check reported unrealisable on disjoint languages");
        if (s.realiser) o.require(realiser_passes(*s.realiser, t.flat(), 6), "sync realiser fails the verifier");
        auto a = decide(t);
        o.require(a.verdict == Verdict::realisable, "async verdict " + std::string(to_string(a.verdict)));
        if (a.realiser) o.require(realiser_passes(*a.realiser, t.flat(), 6), "async realiser fails the verifier");
        for (const auto& w : oracle::all_words("xy#ab", 6)) {
            auto outs = oracle::run_outputs(t.flat(), w);
            if (!outs.empty() && !outs.count(w)) o.require(false, "identity not allowed on " + w);
        }

        auto t2 = corpus::gen_hardness({even_x(), ends_with('y')});
        o.require(accepts(even_x(), "y") && accepts(ends_with('y'), "y"), "\"y\" is not in the intersection");
        o.require(!check_residual_property(t2).realisable, "sync check reported realisable on overlapping languages");
        bool refuted = false;
        for (std::size_t l = 0; l <= 1 + 3 && !refuted; ++l) refuted = !horizon_oracle(t2.flat(), l, HorizonMode::sync);
        o.require(refuted, "sync horizon feasible up to L = 4");
    }, 30);

    const auto corpus_specs = load_corpus();

    report("5a", "game monotone in K for K <= 3 over the corpus", [&](Outcome& o) {
        for (const auto& [name, t] : corpus_specs) {
            bool won = false;
            for (std::size_t k = 0; k <= 3; ++k) {
                const bool w = solve_safety(build_game(t, k)).eve_wins;
                o.require(!won || w, name + ": won at K-1 but lost at K=" + std::to_string(k));
                won = won || w;
            }
        }
    });

    report("5b", "Adam vertex count within 2^m (m |Γ|^(K+1))^n on every built game", [&](Outcome& o) {
        std::size_t games = 0;
        for (const auto& [name, t] : corpus_specs)
            for (std::size_t k = 0; k <= 3; ++k) {
                auto g = build_game(t, k);
                ++games;
                const auto bound = adam_vertex_bound(t.total_states(), t.output_alphabet().size(), k, t.num_parts());
                o.require(BigInt(g.adam.size()) <= bound, name + " K=" + std::to_string(k) + " exceeds the bound");
            }
        o.require(games == 4 * corpus_specs.size(), "not every game was built");
    });

    report("5c", "one live state per part with a single pending word in every reachable Adam vertex", [&](Outcome& o) {
        for (const auto& [name, t] : corpus_specs)
            for (std::size_t k = 0; k <= 3; ++k) {
                auto g = build_game(t, k);
                for (const auto& v : g.adam) {
                    std::vector<int> per_part(t.num_parts(), 0);
                    for (StateId q : v.delays.live()) {
                        ++per_part[t.part_of(q)];
                        if (v.delays.pending(q).size() != 1) o.require(false, name + ": pending set of size != 1");
                    }
                    for (int c : per_part)
                        if (c > 1) o.require(false, name + ": two live states in one part");
                }
            }
    });

    report("5d", "lcp / delay / flush round trips on 10^4 random tuples", [&](Outcome& o) {
        oracle::Rng rng(2024);
        for (int i = 0; i < 10000; ++i) {
            std::vector<Word> ws;
            const auto n = 1 + oracle::pick(rng, 4);
            const auto common = oracle::random_word(rng, "ab", 3);
            for (std::size_t k = 0; k < n; ++k) ws.push_back(common + oracle::random_word(rng, "abc", 4));
            const auto l = lcp(ws);
            const auto d = delay(ws);
            bool ok = l == oracle::lcp(ws) && lcp(d).empty();
            for (std::size_t k = 0; k < n; ++k) ok = ok && ws[k] == l + d[k];
            std::vector<Candidate> cs;
            for (std::size_t k = 0; k < n; ++k) cs.push_back({static_cast<StateId>(k), ws[k], 0, "", k});
            auto f = flush(cs);
            ok = ok && f.safe_output == l;
            for (const auto& [q, w] : f.next.entries()) ok = ok && f.safe_output + w == ws[q];
            if (!ok) {
                o.require(false, "round trip fails at sample " + std::to_string(i));
                return;
            }
        }
    });

    report("5e", "every emitted critical loop and witness re-verifies by direct evaluation", [&](Outcome& o) {
        std::size_t loops = 0, witnesses = 0;
        for (const auto& [name, t] : corpus_specs) {
            for (const auto& l : find_critical_loops(t, 3, 2)) {
                ++loops;
                o.require(oracle::is_critical_loop(t, l.u, l.v, l.parts, l.alpha, l.beta) && verify_critical_loop(t, l),
                          name + ": loop (" + l.u + ", " + l.v + ") does not re-verify");
            }
            if (auto w = search_witness(t, {3, 2, 5})) {
                ++witnesses;
                o.require(check_witness(t, *w).ok, name + ": witness does not re-verify");
                for (const auto* leaf : [&] {
                         std::vector<const WitnessNode*> ls;
                         std::function<void(const WitnessNode&)> rec = [&](const WitnessNode& n) {
                             if (n.children.empty()) ls.push_back(&n);
                             for (const auto& c : n.children) rec(c);
                         };
                         rec(*w);
                         return ls;
                     }()) {
                    const Word full = leaf->u + leaf->leaf_word.value_or("");
                    bool covered = false;
                    for (auto i : leaf->parts) covered = covered || !oracle::run_outputs(t.part(i), full).empty();
                    o.require(leaf->leaf_word && !oracle::run_outputs(t.flat(), full).empty() && !covered,
                              name + ": leaf word does not escape its parts");
                }
            }
        }
        o.require(loops > 0 && witnesses > 0, "nothing was emitted");
        std::cout << "    " << loops << " loops, " << witnesses << " witnesses checked\n";
    });

    report("5f", "at least 50 single-edit mutants of realisers and witnesses are all rejected", [&](Outcome& o) {
        std::size_t total = 0, caught = 0;
        auto hard = corpus::gen_hardness({ends_with('x'), ends_with('y')});
        auto bad = corpus::gen_badjpair(2);
        const std::vector<std::tuple<const char*, SequentialTransducer, Transducer, std::size_t, std::size_t>> realisers = {
            {"rewrite pair", *decide(left).realiser, left.flat(), 10, 10},
            {"hardness", *check_residual_property(hard).realiser, hard.flat(), 6, 8},
            {"bad j-pair", *decide(bad).realiser, bad.flat(), 6, 8},
        };
        for (const auto& [name, r, spec, len, count] : realisers) {
            o.require(verify_realiser(r, spec, len).ok(), std::string(name) + ": unmutated realiser rejected");
            for (const auto& m : realiser_mutants(r, count)) {
                ++total;
                if (!verify_realiser(m, spec, len).ok()) ++caught;
                else o.require(false, std::string(name) + ": realiser mutant " + std::to_string(total) + " accepted");
            }
        }
        auto overlap = corpus::gen_hardness({even_x(), ends_with('y')});
        for (const MultiSequentialTransducer* t : {&right, static_cast<const MultiSequentialTransducer*>(&overlap)}) {
            auto w = search_witness(*t);
            if (!w) {
                o.require(false, "no witness to mutate");
                continue;
            }
            o.require(check_witness(*t, *w).ok, "unmutated witness rejected");
            for (const auto& m : witness_mutants(*t, *w)) {
                ++total;
                if (!check_witness(*t, m).ok) ++caught;
                else o.require(false, "witness mutant " + std::to_string(total) + " accepted");
            }
        }
        std::cout << "    " << caught << " of " << total << " mutants rejected\n";
        o.require(total >= 50, "expected at least 50 mutants, generated " + std::to_string(total));
    });

    report("6", "theoretical delay bound of the two rewriting parts is 104976", [&](Outcome& o) {
        o.require(theoretical_K(left) == BigInt(104976), "got " + theoretical_K(left).str());
    });

    report("7", "two runs of every CLI command on the corpus are byte-identical", [&](Outcome& o) {
        const auto tmp = fs::temp_directory_path() / ("seqsynth-accept-" + std::to_string(::getpid()));
        fs::create_directories(tmp);
        const auto realiser = tmp / "realiser.json";
        const auto dot = tmp / "game.dot";
        const auto gen = tmp / "gen.json";
        std::vector<std::pair<std::string, std::vector<fs::path>>> commands;
        for (const auto& e : fs::directory_iterator(SEQSYNTH_CORPUS)) {
            if (e.path().extension() != ".json") continue;
            const std::string f = "\"" + e.path().string() + "\"";
            const auto spec = load_spec(e.path());
            const auto dom = shortest_word(domain_automaton(spec.relation())).value_or("");
            const std::string sym(1, spec.relation().input_alphabet().symbols().front());
            commands.push_back({"validate " + f, {}});
            commands.push_back({"check " + f + " --mode sync", {}});
            commands.push_back({"check " + f + " --mode sync --json", {}});
            commands.push_back({"check " + f, {}});
            commands.push_back({"check " + f + " --json", {}});
            commands.push_back({"synthesize " + f + " -o \"" + realiser.string() + "\"", {realiser}});
            commands.push_back({"run " + f + " --input \"" + dom + sym + "\"", {}});
            commands.push_back({"game " + f + " --k 1 --dot \"" + dot.string() + "\" --stats", {dot}});
            commands.push_back({"game " + f + " --k 2", {}});
        }
        std::sort(commands.begin(), commands.end());
        // verify needs a realiser file: synthesise one for the running example first.
        run_cli("synthesize \"" + (fs::path(SEQSYNTH_CORPUS) / "rewrite_pair.json").string() + "\" -o \"" +
                    (tmp / "fixed.json").string() + "\"",
                {});
        commands.push_back({"verify \"" + (fs::path(SEQSYNTH_CORPUS) / "rewrite_pair.json").string() + "\" \"" +
                                (tmp / "fixed.json").string() + "\" --test-len 10",
                            {}});
        commands.push_back({"verify \"" + (fs::path(SEQSYNTH_CORPUS) / "rewrite_pair.json").string() + "\" \"" +
                                (tmp / "fixed.json").string() + "\" --json",
                            {}});
        for (const auto& g : {"rewrite-pair", "rewrite-pair-copying", "badjpair --n 2", "subword --word ab",
                              "subword --length 2 --alphabet ab",
                              "hardness --dfa \"xy|p|p|p.x.p,p.y.q,q.x.p,q.y.q\" --dfa \"xy|p|q|p.x.p,p.y.q,q.x.p,q.y.q\""})
            commands.push_back({std::string("gen ") + g + " -o \"" + gen.string() + "\"", {gen}});
        for (const auto& [args, files] : commands) {
            auto a = run_cli(args, files);
            auto b = run_cli(args, files);
            o.require(a.output == b.output && a.files == b.files, "differs: " + args);
            o.require(a.output.find("exit=") != std::string::npos, "no exit status: " + args);
        }
        std::cout << "    " << commands.size() << " commands run twice\n";
        fs::remove_all(tmp);
    });

    return failures == 0 ? 0 : 1;
}
