#include "gramlearn/audit.hpp"
#include "gramlearn/grammar.hpp"
#include "gramlearn/merge.hpp"
#include "gramlearn/recognizer.hpp"

#include <doctest.h>

using namespace gramlearn;

namespace {

Symbol nt(const std::string& s)
{
    return Symbol::nonterminal(s);
}

NodePtr chr(const std::string& label, const std::string& text)
{
    return Node::internal(nt(label), {Node::leaf(Symbol::terminal(text), text)});
}

NodePtr node(const std::string& label, std::vector<NodePtr> kids)
{
    return Node::internal(nt(label), std::move(kids));
}

// (44+4) split as t0 -> t4 tp t4 with t4 -> t4 t4, and (3) as t0 -> tl t0 tr.
TreeSet two_trees()
{
    TreeSet ts;
    ts.labels = std::make_shared<LabelSource>(100);
    ts.trees.push_back(node("t0", {node("t4", {chr("t4", "4"), chr("t4", "4")}), chr("tp", "+"), chr("t4", "4")}));
    ts.trees.push_back(node("t0", {chr("tl", "("), chr("t0", "3"), chr("tr", ")")}));
    return ts;
}

std::set<std::string> rendered(const std::vector<HoledString>& hs)
{
    std::set<std::string> out;
    for (const auto& h : hs)
        out.insert(h.to_string("*"));
    return out;
}

class GrammarClient
{
public:
    explicit GrammarClient(const std::string& text) : client(std::make_unique<GrammarOracle>(deserialize(text))) {}
    OracleClient client;
};

} // namespace

TEST_CASE("holed strings")
{
    HoledString h = HoledString::literal("a");
    h += HoledString::hole();
    h += HoledString::literal("b");
    h += HoledString::hole();
    CHECK(h.holes() == 2);
    CHECK(h.fill("x") == "axbx");
    CHECK(h.fill(std::vector<std::string>{"1", "2"}) == "a1b2");
    CHECK(h.to_string("_") == "a_b_");
    CHECK(HoledString::literal("ab").holes() == 0);
}

TEST_CASE("replacee strings punch holes at every choice of occurrence")
{
    const TreeSet ts = two_trees();
    SamplingConfig cfg;
    cfg.p = 1000;
    Rng rng(1);
    const auto got = rendered(replacee_strings(ts, nt("t4"), cfg, rng));
    const std::set<std::string> expected{"*+*", "*+4", "44+*", "4*+4", "*4+4", "4*+*", "*4+*", "**+*", "**+4"};
    CHECK(got == expected);
}

TEST_CASE("replacer strings by level")
{
    const TreeSet ts = two_trees();
    SamplingConfig cfg;
    cfg.p = 1000;
    Rng rng(1);
    const auto l0 = replacer_strings(ts, nt("t0"), 0, cfg, rng);
    CHECK(std::set<std::string>(l0.begin(), l0.end()) == std::set<std::string>{"44+4", "(3)", "3"});
    const auto l1 = replacer_strings(ts, nt("t0"), 1, cfg, rng);
    CHECK(std::set<std::string>(l1.begin(), l1.end()) ==
          std::set<std::string>{"44+44", "44+4", "4+44", "4+4", "(44+4)", "((3))", "(3)", "3"});
    const auto t4 = replacer_strings(ts, nt("t4"), 0, cfg, rng);
    CHECK(std::set<std::string>(t4.begin(), t4.end()) == std::set<std::string>{"44", "4"});
}

TEST_CASE("sampling caps the string count at p")
{
    const TreeSet ts = two_trees();
    SamplingConfig cfg;
    cfg.p = 3;
    Rng rng(1);
    CHECK(replacee_strings(ts, nt("t4"), cfg, rng).size() == 3);
    cfg.p = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("replacement checks follow the oracle and are audited")
{
    // Juxtaposed or summed expressions over 3 and 4, optionally parenthesized.
    GrammarClient o(R"g(start: E
E -> E E
E -> E "+" E
E -> "(" E ")"
E -> "3"
E -> "4"
)g");
    Rng rng(3);
    AuditLog log;
    MergeContext ctx{o.client, SamplingConfig{}, rng, &log};
    const TreeSet ts = two_trees();

    // Any expression may stand in for a digit string here.
    const auto v1 = replaces(ts, nt("t0"), nt("t4"), ctx);
    CHECK(v1.ok);
    // A '+' cannot stand in for a digit string.
    const auto v2 = replaces(ts, nt("tp"), nt("t4"), ctx);
    CHECK_FALSE(v2.ok);
    CHECK(replaces(ts, nt("t4"), nt("t4"), ctx).ok);

    REQUIRE(log.checks().size() == 2);
    CHECK(log.checks()[0].passed);
    CHECK(log.checks()[0].rejected() == 0);
    CHECK_FALSE(log.checks()[1].passed);
    // Checking stops at the first rejected candidate.
    CHECK(log.checks()[1].rejected() == 1);
    CHECK_FALSE(log.checks()[1].candidates.back().accepted);
    CHECK(log.distinct_candidates() == o.client.stats().total_queries);

    const auto m = merges(ts, nt("t0"), nt("t4"), ctx);
    CHECK(m.ok);
    CHECK(m.checks.size() == 2);
}

TEST_CASE("merging into the start label keeps it")
{
    const TreeSet ts = two_trees();
    const auto m = merge_labels(ts, nt("t4"), nt("t0"));
    CHECK(m.into == nt("t0"));
    CHECK_FALSE(contains_label(m.trees, nt("t4")));
    const auto other = merge_labels(ts, nt("tl"), nt("tr"));
    CHECK(other.into != nt("tl"));
    CHECK(other.into != nt("tr"));
    CHECK(other.trees.trees[1]->children()[0]->label() == other.into);
}

TEST_CASE("character nonterminals")
{
    const TreeSet ts = two_trees();
    CHECK(is_character_nonterminal(ts, nt("tp")));
    CHECK_FALSE(is_character_nonterminal(ts, nt("t4")));
    CHECK_FALSE(is_character_nonterminal(ts, nt("t0")));
}

TEST_CASE("partial merge splits a character nonterminal by position")
{
    // The left of '=' is a fixed variable; the right is any value.
    GrammarClient o(R"g(start: S
S -> "a" "=" E
E -> "a"
E -> "1"
)g");
    Rng rng(5);
    AuditLog log;
    MergeContext ctx{o.client, SamplingConfig{}, rng, &log};
    TreeSet ts;
    ts.labels = std::make_shared<LabelSource>(100);
    ts.trees.push_back(node("t0", {chr("t_a", "a"), chr("t__3d", "="), node("t1", {chr("t_1", "1")})}));
    ts.trees.push_back(node("t0", {chr("t_a", "a"), chr("t__3d", "="), chr("t_a", "a")}));

    CHECK_FALSE(merges(ts, nt("t1"), nt("t_a"), ctx).ok);
    const auto out = partial_merge(ts, nt("t1"), nt("t_a"), ctx);
    REQUIRE(out);
    const auto& first = *out->trees[0];
    const auto& second = *out->trees[1];
    CHECK(first.children()[0]->label() == nt("t_a"));
    CHECK(second.children()[0]->label() == nt("t_a"));
    CHECK(second.children()[2]->label() == first.children()[2]->label());
    CHECK(second.children()[2]->label() != nt("t_a"));

    const Recognizer rec(induced_grammar(*out));
    CHECK(rec.accepts("a=1"));
    CHECK(rec.accepts("a=a"));
    CHECK_FALSE(rec.accepts("1=a"));
    CHECK(merges_are_sound(log));
}

TEST_CASE("merge_all_valid merges interchangeable labels and is idempotent")
{
    GrammarClient o(R"g(start: E
E -> E "+" E
E -> "a"
E -> "b"
)g");
    Rng rng(2);
    MergeContext ctx{o.client, SamplingConfig{}, rng};
    const TreeSet ts = naive_trees({{"a", "+", "b"}, {"a"}});
    const TreeSet merged = merge_all_valid(ts, ctx);
    const auto& root = *merged.trees[0];
    CHECK(root.children()[0]->label() == root.children()[2]->label());
    CHECK(root.children()[1]->label() != root.children()[0]->label());

    const TreeSet again = merge_all_valid(merged, ctx);
    CHECK(same_trees(again, merged));

    const Recognizer rec(induced_grammar(merged));
    CHECK(rec.accepts("b+a"));
    CHECK_FALSE(rec.accepts("+"));
}
