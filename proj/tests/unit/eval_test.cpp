#include "gramlearn/eval.hpp"
#include "gramlearn/grammar.hpp"
#include "gramlearn/recognizer.hpp"

#include <doctest.h>

using namespace gramlearn;

namespace {

const char* kArith = R"g(start: E
E -> E "+" T
E -> T
T -> "(" E ")"
T -> "1"
T -> "2"
)g";

} // namespace

TEST_CASE("f1 is the harmonic mean")
{
    CHECK(f1_score(Rational(1), Rational(1)) == Rational(1));
    CHECK(f1_score(Rational(0), Rational(0)) == Rational(0));
    CHECK(f1_score(Rational(1, 2), Rational(1)) == Rational(2, 3));
}

TEST_CASE("a golden grammar scores perfectly against itself")
{
    const Grammar g = deserialize(kArith);
    OracleClient oracle(std::make_unique<GrammarOracle>(g));
    const auto test = generate_test_set(g, 50, 1);
    const auto r = evaluate(g, test, oracle, 100, 2);
    CHECK(r.recall == Rational(1));
    CHECK(r.precision == Rational(1));
    CHECK(r.f1 == Rational(1));
    CHECK(r.test_size == 50);
    CHECK(r.sample_size == 100);
}

TEST_CASE("recall and precision count exact fractions")
{
    const Grammar only_one = deserialize("start: S\nS -> \"1\"\n");
    CHECK(recall(only_one, {"1", "2", "1", "(1)"}) == Rational(1, 2));
    CHECK_THROWS_AS(recall(only_one, {}), Error);

    const Grammar over = deserialize("start: S\nS -> \"1\"\nS -> \"+\"\n");
    OracleClient oracle(std::make_unique<GrammarOracle>(deserialize(kArith)));
    const Rational p = precision(over, oracle, 200, 0);
    CHECK(p > Rational(1, 4));
    CHECK(p < Rational(3, 4));
}

TEST_CASE("test sets are deterministic")
{
    const Grammar g = deserialize(kArith);
    CHECK(generate_test_set(g, 20, 4) == generate_test_set(g, 20, 4));
    CHECK(generate_test_set(g, 20, 4) != generate_test_set(g, 20, 5));
}

TEST_CASE("training sets cover every terminal and stay in the language")
{
    const Grammar g = deserialize(kArith);
    const auto train = generate_training_set(g, 5, 0);
    CHECK(train.size() >= 5);
    const Recognizer rec(g);
    std::string all;
    for (const auto& s : train) {
        CHECK(rec.accepts(s));
        all += s;
    }
    for (const char* t : {"+", "(", ")", "1", "2"})
        CHECK(all.find(t) != std::string::npos);
    CHECK(std::set<std::string>(train.begin(), train.end()).size() == train.size());
}

TEST_CASE("eval output formats")
{
    EvalReport r{Rational(1, 2), Rational(1), Rational(2, 3), 4, 8};
    const std::string js = eval_json(r);
    CHECK(js.find("\"recall\"") != std::string::npos);
    CHECK(js.find("2/3") != std::string::npos);
    CHECK(eval_table(r).find("precision") != std::string::npos);
}
