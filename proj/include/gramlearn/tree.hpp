#pragma once

#include "gramlearn/rational.hpp"
#include "gramlearn/symbol.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gramlearn {

class Node;
using NodePtr = std::shared_ptr<const Node>;
using LabelSeq = std::vector<Symbol>;

/// Immutable parse-tree node. Internal nodes carry a nonterminal label;
/// leaves carry a terminal or token-class label plus the source text they
/// stand for, so the yield of a tree never changes once built.
class Node
{
public:
    static NodePtr leaf(Symbol label, std::string text);
    static NodePtr internal(Symbol label, std::vector<NodePtr> children);

    const Symbol& label() const { return label_; }
    const std::vector<NodePtr>& children() const { return children_; }
    bool is_leaf() const { return children_.empty(); }

    /// Left-to-right concatenation of leaf text.
    const std::string& yield() const { return yield_; }

    /// Number of nodes in this subtree.
    std::size_t size() const { return size_; }

private:
    Node(Symbol label, std::vector<NodePtr> children, std::string yield, std::size_t size)
        : label_(std::move(label)), children_(std::move(children)), yield_(std::move(yield)), size_(size)
    {
    }

    Symbol label_;
    std::vector<NodePtr> children_;
    std::string yield_;
    std::size_t size_;
};

/// Produces run-unique nonterminal labels "t1", "t2", ...
class LabelSource
{
public:
    explicit LabelSource(std::uint64_t first = 1) : next_(first) {}
    Symbol fresh() { return Symbol::nonterminal("t" + std::to_string(next_++)); }

private:
    std::atomic<std::uint64_t> next_;
};

/// A versioned set of trees. Copies share nodes; every operation returns a
/// new TreeSet and leaves its input untouched. All versions derived from one
/// naive_trees() call share a LabelSource.
struct TreeSet
{
    std::vector<NodePtr> trees;
    Symbol start = Symbol::nonterminal("t0");
    std::shared_ptr<LabelSource> labels = std::make_shared<LabelSource>();

    Symbol fresh_label() const { return labels->fresh(); }
};

/// Structural equality of two subtrees.
bool same_tree(const Node& a, const Node& b);
bool same_trees(const TreeSet& a, const TreeSet& b);

/// Label of the character nonterminal that owns a leaf token: "t_" plus the
/// token for alphanumeric tokens, "t__" plus hex bytes otherwise.
Symbol token_label(std::string_view token);

/// One flat tree per example: t0 -> t_tok1 ... t_tokn, each t_tok -> "tok".
TreeSet naive_trees(const std::vector<std::vector<std::string>>& token_sequences);

std::string yield(const Node& node);

/// Nonterminal labels that appear on any node, sorted.
std::set<Symbol> nonterminal_labels(const TreeSet& ts);

bool contains_label(const TreeSet& ts, const Symbol& label);

/// Reserved context padding symbols.
const Symbol& begin_sentinel();
const Symbol& end_sentinel();

/// Sibling labels around an occurrence; index 0 is adjacent on both sides.
struct KContext
{
    LabelSeq left;
    LabelSeq right;

    friend bool operator==(const KContext&, const KContext&) = default;
    friend auto operator<=>(const KContext&, const KContext&) = default;
};

/// Where a sequence occurs: the preorder index of the parent node across the
/// whole tree set, and the first child position.
struct Occurrence
{
    std::size_t parent;
    std::size_t start;
    std::size_t parent_arity;
};

struct SequenceStats
{
    LabelSeq sequence;
    std::set<KContext> contexts;
    std::size_t occ = 0;
    std::vector<Occurrence> occurrences;
};

struct SequenceTable
{
    /// Proper sibling subsequences of length in [2, max_len], sorted by label sequence.
    std::vector<SequenceStats> multi;
    /// Length-1 proper subsequences (single children of nodes with >= 2 children).
    std::vector<SequenceStats> singles;
};

SequenceTable collect_sequences(const TreeSet& ts, std::size_t max_len, std::size_t k);

/// k-contexts of every node carrying `label`, including root occurrences
/// (which get an all-sentinel context).
std::map<Symbol, std::set<KContext>> label_contexts(const TreeSet& ts, std::size_t k);

struct Bubble
{
    LabelSeq seq1;
    std::optional<LabelSeq> seq2;
    Rational similarity;
    Rational frequency;

    int arity() const { return seq2 ? 2 : 1; }
    std::string to_string() const;
};

struct BubbledTrees
{
    TreeSet trees;
    Symbol label1;
    std::optional<Symbol> label2;
};

/// Replace every non-overlapping proper occurrence of the bubble's sequences
/// (leftmost first) with a fresh node. Throws if a sequence has no proper
/// occurrence.
BubbledTrees apply_bubble(const TreeSet& ts, const Bubble& b);

/// Remove every node labeled `label`, splicing its children into its parent.
/// Root nodes are never removed.
TreeSet splice_out(const TreeSet& ts, const Symbol& label);

/// Apply a label substitution to every internal node.
TreeSet relabel(const TreeSet& ts, const std::map<Symbol, Symbol>& mapping);

/// Indented debug rendering, one node per line.
std::string dump_trees(const TreeSet& ts);

std::string to_string(const LabelSeq& seq);

} // namespace gramlearn
