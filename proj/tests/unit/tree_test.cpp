#include "gramlearn/grammar.hpp"
#include "gramlearn/tree.hpp"

#include <doctest.h>

#include <functional>

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

LabelSeq labels(std::initializer_list<const char*> names)
{
    LabelSeq out;
    for (const char* n : names)
        out.push_back(nt(n));
    return out;
}

// Counts windows by scanning every child list directly.
std::size_t count_windows(const TreeSet& ts, const LabelSeq& seq)
{
    std::size_t n = 0;
    std::function<void(const Node&)> walk = [&](const Node& node) {
        const auto& kids = node.children();
        if (kids.size() > seq.size()) {
            for (std::size_t i = 0; i + seq.size() <= kids.size(); ++i) {
                bool match = true;
                for (std::size_t j = 0; j < seq.size() && match; ++j)
                    match = kids[i + j]->label() == seq[j];
                n += match ? 1 : 0;
            }
        }
        for (const auto& c : kids)
            walk(*c);
    };
    for (const auto& t : ts.trees)
        walk(*t);
    return n;
}

} // namespace

TEST_CASE("naive trees share one label per distinct token")
{
    const TreeSet ts = naive_trees({{"a", "b", "a"}, {"b", "("}});
    REQUIRE(ts.trees.size() == 2);
    const auto& root = *ts.trees[0];
    CHECK(root.label() == nt("t0"));
    REQUIRE(root.children().size() == 3);
    CHECK(root.children()[0]->label() == nt("t_a"));
    CHECK(root.children()[2]->label() == nt("t_a"));
    CHECK(ts.trees[1]->children()[1]->label() == nt("t__28"));
    CHECK(root.yield() == "aba");
    CHECK(nonterminal_labels(ts) == std::set<Symbol>{nt("t0"), nt("t_a"), nt("t_b"), nt("t__28")});
}

TEST_CASE("token labels")
{
    CHECK(token_label("abc") == nt("t_abc"));
    CHECK(token_label("42") == nt("t_42"));
    CHECK(token_label(" ") == nt("t__20"));
    CHECK(token_label("+") == nt("t__2b"));
}

TEST_CASE("fresh labels are shared across versions")
{
    const TreeSet ts = naive_trees({{"x"}});
    const TreeSet copy = ts;
    CHECK(ts.fresh_label() == nt("t1"));
    CHECK(copy.fresh_label() == nt("t2"));
}

TEST_CASE("contexts pad with sentinels and put the adjacent label first")
{
    const TreeSet ts = naive_trees({{"a", "b", "c", "d"}});
    const auto table = collect_sequences(ts, 3, 2);
    const auto it = std::find_if(table.multi.begin(), table.multi.end(),
                                 [](const SequenceStats& s) { return s.sequence == labels({"t_b", "t_c"}); });
    REQUIRE(it != table.multi.end());
    CHECK(it->occ == 1);
    REQUIRE(it->contexts.size() == 1);
    const KContext expected{{nt("t_a"), begin_sentinel()}, {nt("t_d"), end_sentinel()}};
    CHECK(*it->contexts.begin() == expected);

    const auto ctx = label_contexts(ts, 2);
    CHECK(ctx.at(nt("t0")).size() == 1);
    CHECK(ctx.at(nt("t0")).begin()->left == LabelSeq{begin_sentinel(), begin_sentinel()});
}

TEST_CASE("sequence counts agree with a direct scan")
{
    const TreeSet ts = naive_trees({{"a", "b", "a", "b", "a"}, {"b", "a", "b"}, {"a", "a", "a", "a"}});
    const auto table = collect_sequences(ts, 4, 3);
    for (const auto& s : table.multi)
        CHECK(s.occ == count_windows(ts, s.sequence));
    for (const auto& s : table.singles)
        CHECK(s.occ == count_windows(ts, s.sequence));
    // Whole child lists are not proper subsequences.
    for (const auto& s : table.multi)
        CHECK(s.sequence != labels({"t_a", "t_a", "t_a", "t_a"}));
    CHECK(std::is_sorted(table.multi.begin(), table.multi.end(),
                         [](const SequenceStats& x, const SequenceStats& y) { return x.sequence < y.sequence; }));
}

TEST_CASE("applying a bubble leaves the input untouched")
{
    const TreeSet ts = naive_trees({{"a", "b", "c", "a", "b"}});
    const std::string before = dump_trees(ts);
    const auto b = apply_bubble(ts, Bubble{labels({"t_a", "t_b"}), std::nullopt, {}, {}});
    CHECK(dump_trees(ts) == before);
    const auto& root = *b.trees.trees[0];
    REQUIRE(root.children().size() == 3);
    CHECK(root.children()[0]->label() == b.label1);
    CHECK(root.children()[2]->label() == b.label1);
    CHECK(root.children()[1]->label() == nt("t_c"));
    CHECK(root.yield() == "abcab");
    // Unchanged subtrees are shared, not copied.
    CHECK(root.children()[1] == ts.trees[0]->children()[2]);

    const TreeSet back = splice_out(b.trees, b.label1);
    CHECK(same_trees(back, ts));
}

TEST_CASE("overlapping windows are bubbled leftmost first")
{
    const TreeSet ts = naive_trees({{"a", "a", "a", "b"}});
    const auto b = apply_bubble(ts, Bubble{labels({"t_a", "t_a"}), std::nullopt, {}, {}});
    const auto& root = *b.trees.trees[0];
    REQUIRE(root.children().size() == 3);
    CHECK(root.children()[0]->label() == b.label1);
    CHECK(root.children()[0]->yield() == "aa");
}

TEST_CASE("nested 2-bubbles bubble the outer sequence first")
{
    const TreeSet ts = naive_trees({{"x", "a", "b", "c", "y"}});
    const auto b = apply_bubble(ts, Bubble{labels({"t_a", "t_b"}), labels({"t_a", "t_b", "t_c"}), {}, {}});
    REQUIRE(b.label2);
    const auto& root = *b.trees.trees[0];
    REQUIRE(root.children().size() == 3);
    const auto& outer = *root.children()[1];
    CHECK(outer.label() == *b.label2);
    REQUIRE(outer.children().size() == 2);
    CHECK(outer.children()[0]->label() == b.label1);
}

TEST_CASE("applying a bubble without a proper occurrence throws")
{
    const TreeSet ts = naive_trees({{"a", "b"}});
    CHECK_THROWS_AS(apply_bubble(ts, Bubble{labels({"t_a", "t_b"}), std::nullopt, {}, {}}), Error);
}

TEST_CASE("relabel rewrites internal nodes only")
{
    const TreeSet ts{{Node::internal(nt("t0"), {chr("t1", "4"), chr("t2", "5")})}};
    const TreeSet out = relabel(ts, {{nt("t2"), nt("t1")}});
    CHECK(out.trees[0]->children()[1]->label() == nt("t1"));
    CHECK(out.trees[0]->children()[1]->children()[0]->label() == Symbol::terminal("5"));
    CHECK(ts.trees[0]->children()[1]->label() == nt("t2"));
    CHECK(contains_label(out, nt("t1")));
    CHECK_FALSE(contains_label(out, nt("t2")));
}

TEST_CASE("splice keeps roots")
{
    const TreeSet ts{{Node::internal(nt("t0"), {chr("t1", "4")})}};
    const TreeSet out = splice_out(ts, nt("t0"));
    CHECK(out.trees[0]->label() == nt("t0"));
}
