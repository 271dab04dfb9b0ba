#include "oracles.hpp"
#include "seqsynth/async.hpp"
#include "seqsynth/error.hpp"
#include "seqsynth/verifier.hpp"

#include <doctest.h>

using namespace seqsynth;

namespace {

MultiSequentialTransducer left_pair() { return MultiSequentialTransducer({oracle::d1(), oracle::d2()}, {"D1", "D2"}); }
MultiSequentialTransducer right_pair()
{
    return MultiSequentialTransducer({oracle::d1("c"), oracle::d2("c")}, {"D1'", "D2'"});
}

bool reverifies(const MultiSequentialTransducer& t, const CriticalLoop& l)
{
    return oracle::is_critical_loop(t, l.u, l.v, l.parts, l.alpha, l.beta) && verify_critical_loop(t, l);
}

} // namespace

TEST_SUITE("async-realizability")
{
    TEST_CASE("critical loop of the copying pair")
    {
        auto loops = find_critical_loops(right_pair(), 1, 1);
        bool found = false;
        for (const auto& l : loops) {
            CHECK(reverifies(right_pair(), l));
            if (l.u == "a" && l.v == "c") {
                found = true;
                CHECK(l.parts == std::vector<std::size_t>{0, 1});
                CHECK(l.alpha == std::vector<Word>{"a", "b"});
                CHECK(l.beta == std::vector<Word>{"c", "c"});
            }
        }
        CHECK(found);
    }

    TEST_CASE("critical loops of the running example")
    {
        auto loops = find_critical_loops(left_pair(), 2, 2);
        CHECK_FALSE(loops.empty());
        for (const auto& l : loops) CHECK(reverifies(left_pair(), l));
        // After "a" the second part leaves its initial state on b, so (a, b) is no loop.
        CHECK_FALSE(make_critical_loop(left_pair(), "a", "b").has_value());
        CHECK_FALSE(oracle::is_critical_loop(left_pair(), "a", "b", {0, 1}, {"a", "b"}, {"a", "b"}));
        auto aa = make_critical_loop(left_pair(), "aa", "a");
        REQUIRE(aa.has_value());
        CHECK(aa->alpha == std::vector<Word>{"aa", "bb"});
        CHECK(aa->beta == std::vector<Word>{"a", "b"});
        // Shortlex order of (u, v).
        for (std::size_t i = 1; i < loops.size(); ++i) {
            const auto& p = loops[i - 1];
            const auto& q = loops[i];
            auto key = [](const CriticalLoop& l) { return std::make_tuple(l.u.size(), l.u, l.v.size(), l.v); };
            CHECK(key(p) < key(q));
        }
    }

    TEST_CASE("single part has no critical loop")
    {
        CHECK(find_critical_loops(MultiSequentialTransducer({oracle::d1()}), 3, 3).empty());
        CHECK_THROWS_AS(find_critical_loops(left_pair(), 0, 1), Error);
        CHECK_THROWS_AS(find_critical_loops(left_pair(), 6, 6, 100), Error);
    }

    TEST_CASE("characterisation on the copying pair fails for every subset")
    {
        auto l = make_critical_loop(right_pair(), "a", "c");
        REQUIRE(l.has_value());
        auto r = check_characterisation(right_pair(), *l);
        CHECK(r.status == CharacterisationStatus::no_valid_subset);
        using Tried = std::vector<std::pair<std::vector<std::size_t>, int>>;
        CHECK(r.tried == Tried{{{0}, 2}, {{1}, 2}});
    }

    TEST_CASE("characterisation on the running example finds a subset")
    {
        for (const auto& l : find_critical_loops(left_pair(), 2, 2)) {
            auto r = check_characterisation(left_pair(), l);
            CHECK(r.status == CharacterisationStatus::subset_found);
            CHECK(r.subset.size() < l.parts.size());
        }
    }

    TEST_CASE("characterisation rejects non-loops")
    {
        CriticalLoop bogus{"a", "b", {0}, {"a"}, {"a"}, {1}};
        try {
            check_characterisation(left_pair(), bogus);
            FAIL("expected InvalidLoop");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_loop);
        }
    }

    TEST_CASE("residual specification after a loop prefix")
    {
        auto l = make_critical_loop(left_pair(), "aa", "a");
        REQUIRE(l.has_value());
        auto r = residual_specification(left_pair(), *l, {0});
        REQUIRE(r.num_parts() == 1);
        // ℓ = lcp(aa, bb) = ε, so the pending word "aa" is kept in front.
        for (const auto& w : oracle::all_words("ab", 5))
            CHECK(oracle::run_outputs(r.flat(), w) == std::set<Word>{"aa" + Word(w.size(), 'a')});
    }

    TEST_CASE("theoretical_K")
    {
        CHECK(theoretical_K(left_pair()) == BigInt(104976));
        CHECK(theoretical_K(MultiSequentialTransducer({oracle::d1()})) == BigInt(18));
        TransducerSpec silent{Alphabet("a"), Alphabet("a"), {"p"}, {"p"}, {{"p", ""}}, {{"p", 'a', "", "p"}}};
        MultiSequentialTransducer z({SequentialTransducer(Transducer(silent))});
        CHECK(theoretical_K(z) == 0);
        // Monotone in the number of parts, the part size and the output length.
        auto three = MultiSequentialTransducer({oracle::d1(), oracle::d2(), oracle::renamed(oracle::d1(), "x")});
        CHECK(theoretical_K(three) > theoretical_K(left_pair()));
        CHECK(theoretical_K(MultiSequentialTransducer({oracle::d2()})) < theoretical_K(MultiSequentialTransducer({oracle::d1()})));
        TransducerSpec wide{Alphabet("ab"), Alphabet("ab"), {"w0", "w1", "w2"}, {"w0"}, {{"w2", ""}},
                            {{"w0", 'a', "aa", "w1"}, {"w1", 'a', "a", "w2"}}};
        MultiSequentialTransducer longer({oracle::d1(), SequentialTransducer(Transducer(wide))});
        CHECK(theoretical_K(longer) == 2 * theoretical_K(left_pair()));
    }

    TEST_CASE("witness for the copying pair")
    {
        auto w = search_witness(right_pair());
        REQUIRE(w.has_value());
        CHECK(w->u == "a");
        CHECK(w->v == "c");
        CHECK(w->parts == std::vector<std::size_t>{0, 1});
        REQUIRE(w->children.size() == 2);
        CHECK(w->children[0].parts == std::vector<std::size_t>{0});
        CHECK(w->children[1].parts == std::vector<std::size_t>{1});
        CHECK(w->size() == 3);
        CHECK(check_witness(right_pair(), *w).ok);
        for (const auto& leaf : w->children) {
            REQUIRE(leaf.leaf_word.has_value());
            const Word full = leaf.u + *leaf.leaf_word;
            CHECK_FALSE(oracle::run_outputs(right_pair().flat(), full).empty());
            CHECK(oracle::run_outputs(right_pair().part(leaf.parts[0]), full).empty());
        }
    }

    TEST_CASE("no witness for realisable inputs")
    {
        CHECK_FALSE(search_witness(left_pair(), {4, 4, 7}).has_value());
        CHECK_FALSE(search_witness(MultiSequentialTransducer({oracle::d1()})).has_value());
    }

    TEST_CASE("decide")
    {
        auto a = decide(left_pair());
        CHECK(a.verdict == Verdict::realisable);
        CHECK(a.winning_bound == std::optional<std::size_t>(1));
        REQUIRE(a.realiser.has_value());
        CHECK(verify_realiser(*a.realiser, left_pair().flat(), 10).ok());

        DecideOptions o;
        o.k_max = 3;
        auto b = decide(right_pair(), o);
        CHECK(b.verdict == Verdict::unrealisable);
        REQUIRE(b.witness.has_value());
        CHECK(check_witness(right_pair(), *b.witness).ok);
        CHECK_FALSE(b.winning_bound.has_value());

        o.k_max = 0;
        auto c = decide(MultiSequentialTransducer({oracle::d1()}), o);
        CHECK(c.verdict == Verdict::realisable);
        CHECK(c.winning_bound == std::optional<std::size_t>(0));
        CHECK(to_string(Verdict::unknown) == "UNKNOWN");
    }

    TEST_CASE("tight budgets give unknown")
    {
        DecideOptions o;
        o.k_max = 4;
        o.game.vertex_cap = 5;
        auto v = decide(left_pair(), o);
        CHECK(v.verdict == Verdict::unknown);
        CHECK(v.budget_exceeded);
    }

    TEST_CASE("mismatch and delays_differ")
    {
        CHECK(mismatch("ab", "b"));
        CHECK_FALSE(mismatch("ab", "a"));
        CHECK_FALSE(mismatch("", "abc"));
        CHECK(delays_differ("a", "c", "b", "cc"));
        CHECK(delays_differ("a", "c", "b", "c"));
        CHECK_FALSE(delays_differ("a", "", "a", ""));
    }

    TEST_CASE("property: loops re-verify and verdicts never conflict on random specifications")
    {
        oracle::Rng rng(61);
        int decided = 0;
        for (int i = 0; i < 40; ++i) {
            auto t = oracle::random_multi(rng, "ab", "xy", 2 + oracle::pick(rng, 2), 3, 2, false);
            for (const auto& l : find_critical_loops(t, 3, 2)) CHECK(reverifies(t, l));
            DecideOptions o;
            o.k_max = 3;
            o.witness = {3, 2, 5};
            auto v = decide(t, o);
            const auto w = search_witness(t, o.witness);
            if (v.verdict == Verdict::realisable) {
                ++decided;
                CHECK_FALSE(w.has_value());
                CHECK(verify_realiser(*v.realiser, t.flat(), 7).ok());
            }
            if (w) CHECK(check_witness(t, *w).ok);
            if (v.verdict == Verdict::unrealisable) {
                ++decided;
                CHECK_FALSE(v.winning_bound.has_value());
                if (v.witness) CHECK(check_witness(t, *v.witness).ok);
            }
        }
        CHECK(decided > 0);
    }
}
