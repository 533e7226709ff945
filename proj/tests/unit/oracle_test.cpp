#include "gramlearn/grammar.hpp"
#include "gramlearn/oracle.hpp"

#include <doctest.h>

#include <functional>

using namespace gramlearn;

namespace {

class CountingOracle : public Oracle
{
public:
    explicit CountingOracle(std::function<bool(const std::string&)> f) : f_(std::move(f)) {}
    bool evaluate(const std::string& input) override
    {
        ++calls;
        return f_(input);
    }
    int calls = 0;

private:
    std::function<bool(const std::string&)> f_;
};

} // namespace

TEST_CASE("client memoizes answers")
{
    auto inner = std::make_unique<CountingOracle>([](const std::string& s) { return s.size() % 2 == 0; });
    auto* raw = inner.get();
    OracleClient client(std::move(inner));
    CHECK(client.query("ab"));
    CHECK_FALSE(client.query("abc"));
    CHECK(client.query("ab"));
    CHECK(client.cached("abc"));
    CHECK_FALSE(client.cached("x"));
    CHECK(raw->calls == 2);
    const auto st = client.stats();
    CHECK(st.total_queries == 2);
    CHECK(st.cache_hits == 1);
}

TEST_CASE("client enforces the query budget on distinct strings")
{
    OracleClient client(std::make_unique<CountingOracle>([](const std::string&) { return true; }), 2);
    client.query("a");
    client.query("b");
    CHECK_NOTHROW(client.query("a"));
    CHECK_THROWS_AS(client.query("c"), OracleBudgetExhausted);
    CHECK(client.stats().total_queries == 2);
}

TEST_CASE("grammar oracle")
{
    const Grammar g = deserialize("start: S\nS -> \"a\" S\nS -> \"b\"\n");
    GrammarOracle o(g);
    CHECK(o.evaluate("aab"));
    CHECK_FALSE(o.evaluate("aa"));
}

TEST_CASE("command oracle maps exit status, content and timeouts")
{
    CommandOracle ok("grep -q '^yes$'", std::chrono::milliseconds(5000));
    CHECK(ok.evaluate("yes"));
    CHECK_FALSE(ok.evaluate("no"));
    // The candidate is passed byte for byte.
    CommandOracle exact("sh -c 'test \"$(cat \"$0\")\" = \"a b\"'", std::chrono::milliseconds(5000));
    CHECK(exact.evaluate("a b"));

    CommandOracle slow("sleep 5;", std::chrono::milliseconds(100));
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_FALSE(slow.evaluate("x"));
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(4));
    CHECK(slow.timeouts() == 1);

    CommandOracle missing("/nonexistent/binary", std::chrono::milliseconds(2000));
    CHECK_FALSE(missing.evaluate("x"));
}

TEST_CASE("make_oracle builds both kinds")
{
    OracleConfig cfg;
    cfg.kind = OracleConfig::Kind::Command;
    cfg.command = "true";
    CHECK(make_oracle(cfg)->evaluate("anything"));
    cfg.kind = OracleConfig::Kind::GoldenGrammar;
    cfg.grammar_path = "/nonexistent/grammar.g";
    CHECK_THROWS(make_oracle(cfg));
}
