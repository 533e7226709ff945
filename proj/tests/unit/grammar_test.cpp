#include "gramlearn/grammar.hpp"
#include "gramlearn/recognizer.hpp"
#include "gramlearn/sampler.hpp"
#include "support/enumerate.hpp"

#include <doctest.h>

using namespace gramlearn;

namespace {

const char* kWhile = R"g(start: start
start -> stmt
stmt -> "while " boolexpr " do " stmt
stmt -> "if " boolexpr " then " stmt " else " stmt
stmt -> "L = " numexpr
stmt -> stmt " ; " stmt
boolexpr -> "~" boolexpr
boolexpr -> boolexpr " & " boolexpr
boolexpr -> numexpr " == " numexpr
boolexpr -> "false"
boolexpr -> "true"
numexpr -> "(" numexpr "+" numexpr ")"
numexpr -> "L"
numexpr -> "n"
)g";

const char* kLearnedWhile = R"g(start: t0
t0 -> "while " t9 " do " t0
t0 -> "L = " t3
t0 -> t0 " ; " t0
t9 -> t9 " & " t9
t9 -> "true"
t9 -> "false"
t3 -> "(" t3 "+" t3 ")"
t3 -> "n"
)g";

Symbol nt(const std::string& s)
{
    return Symbol::nonterminal(s);
}

Symbol term(const std::string& s)
{
    return Symbol::terminal(s);
}

} // namespace

TEST_CASE("symbols validate their invariants")
{
    CHECK_THROWS_AS(Symbol::terminal(""), Error);
    CHECK_THROWS_AS(Symbol::nonterminal("1abc"), Error);
    CHECK_THROWS_AS(Symbol::nonterminal("a-b"), Error);
    CHECK(Symbol::nonterminal("_x9").text() == "_x9");
    CHECK(term("a") < Symbol::token_class(TokenClass::Digits));
    CHECK(Symbol::token_class(TokenClass::Digits) < nt("a"));
    CHECK(quote_terminal("a\"b\\c\n\t\x01") == "\"a\\\"b\\\\c\\n\\t\\x01\"");
}

TEST_CASE("grammar construction enforces invariants")
{
    CHECK_THROWS_AS(Grammar(nt("S"), {{nt("A"), {term("a")}}}), GrammarError);
    CHECK_THROWS_AS(Grammar(nt("S"), {{nt("S"), {nt("B")}}}), GrammarError);
    CHECK_THROWS_AS(Grammar(nt("S"), {{nt("S"), {}}}), GrammarError);
    const Grammar g(nt("S"), {{nt("S"), {term("a")}}, {nt("S"), {term("a")}}});
    CHECK(g.rules().size() == 1);
}

TEST_CASE("serialization round trips")
{
    const Grammar g = deserialize(kWhile);
    CHECK(deserialize(serialize(g)) == g);
    CHECK(serialize(deserialize(serialize(g))) == serialize(g));

    const Grammar classes(nt("t0"), {{nt("t0"), {Symbol::token_class(TokenClass::Digits), term("\x01\"\\")}},
                                     {nt("t0"), {nt("t1")}},
                                     {nt("t1"), {Symbol::token_class(TokenClass::Whitespace)}}});
    const std::string text = serialize(classes);
    CHECK(text.find("<DIGITS>") != std::string::npos);
    CHECK(deserialize(text) == classes);
}

TEST_CASE("deserialization rejects malformed input")
{
    CHECK_THROWS_AS(deserialize("start: S\nS -> A\n"), Error);
    CHECK_THROWS_AS(deserialize("start: S\nstart: S\nS -> \"a\"\n"), Error);
    CHECK_THROWS_AS(deserialize("S -> \"a\"\n"), Error);
    CHECK_THROWS_AS(deserialize("start: S\nS -> \"a\\q\"\n"), Error);
    CHECK_THROWS_AS(deserialize("start: S\nS -> \"a\n"), Error);
    CHECK_THROWS_AS(deserialize("start: S\nS -> <NOPE>\n"), Error);
    CHECK_THROWS_AS(deserialize("start: S\nS -> \"\"\n"), Error);
    CHECK_THROWS_AS(deserialize("start: S\nS ->\n"), Error);
    CHECK_NOTHROW(deserialize("# comment\n\nstart: S\n  S -> \"a\"  # trailing\n"));
}

TEST_CASE("membership on the while grammar")
{
    const Grammar g = deserialize(kWhile);
    CHECK(membership(g, "L = n"));
    CHECK(membership(g, "while true & false do L = n"));
    CHECK(membership(g, "L = n ; L = (n+n)"));
    CHECK_FALSE(membership(g, "hile"));
    CHECK_FALSE(membership(g, "hile = n ; hile = (n+n)"));
    CHECK_FALSE(membership(g, ""));
}

TEST_CASE("membership expands token classes")
{
    const Grammar g = deserialize("start: S\nS -> \"x=\" <DIGITS>\nS -> <LOWER> \" \" <UPPER>\n");
    CHECK(membership(g, "x=0"));
    CHECK(membership(g, "x=0123"));
    CHECK_FALSE(membership(g, "x="));
    CHECK_FALSE(membership(g, "x=1a"));
    CHECK(membership(g, "abc DEF"));
    CHECK_FALSE(membership(g, "abC DEF"));
}

TEST_CASE("membership handles left recursion and unit cycles")
{
    const Grammar g = deserialize("start: S\nS -> S \"+\" S\nS -> S\nS -> A\nA -> S\nA -> \"a\"\n");
    CHECK(membership(g, "a"));
    CHECK(membership(g, "a+a+a"));
    CHECK_FALSE(membership(g, "a+"));
    CHECK_FALSE(membership(g, "+a"));
}

TEST_CASE("membership agrees with enumeration on a fixed grammar")
{
    const Grammar g = deserialize("start: S\nS -> \"a\" S \"b\"\nS -> \"ab\"\nS -> S S\n");
    const auto lang = testing::enumerate_language(g, 8);
    CHECK(lang.count("aabb"));
    CHECK(lang.count("abab"));
    const Recognizer rec(g);
    for (const auto& s : testing::all_strings("ab", 8))
        CHECK(rec.accepts(s) == (lang.count(s) > 0));
}

TEST_CASE("sampling is deterministic and stays in the language")
{
    const Grammar learned = deserialize(kLearnedWhile);
    const Grammar golden = deserialize(kWhile);
    const Recognizer rec(golden);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::string s = sample(learned, seed);
        CHECK(s == sample(learned, seed));
        CHECK(rec.accepts(s));
    }
    const Grammar single(nt("t0"), {{nt("t0"), {term("a")}}});
    CHECK(sample(single, 1) == "a");
    CHECK(sample(single, 99) == "a");
}

TEST_CASE("sampler depth bound terminates on recursive grammars")
{
    const Grammar g = deserialize("start: S\nS -> S S S\nS -> \"(\" S \")\"\nS -> \"x\"\n");
    const Sampler sampler(g);
    CHECK(sampler.min_depths().at(nt("S")) == 1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        CHECK(membership(g, sampler.sample(rng, 4)));
    }
    const Grammar unsat(nt("S"), {{nt("S"), {nt("S"), term("a")}}});
    CHECK_THROWS_AS(Sampler{unsat}, GrammarError);
}

TEST_CASE("class samples stay in their class")
{
    Rng rng(3);
    std::size_t total = 0;
    for (int i = 0; i < 2000; ++i) {
        const std::string s = sample_class(TokenClass::Alnum, rng);
        CHECK(class_matches(TokenClass::Alnum, s));
        total += s.size();
    }
    // Geometric lengths with mean 3.
    CHECK(total / 2000.0 == doctest::Approx(3.0).epsilon(0.1));
}
