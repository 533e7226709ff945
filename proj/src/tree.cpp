#include "gramlearn/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace gramlearn {

NodePtr Node::leaf(Symbol label, std::string text)
{
    if (label.is_nonterminal())
        throw Error("leaf nodes must carry a terminal or token class");
    if (text.empty())
        throw Error("leaf text must be non-empty");
    std::string y = text;
    return NodePtr(new Node(std::move(label), {}, std::move(y), 1));
}

NodePtr Node::internal(Symbol label, std::vector<NodePtr> children)
{
    if (!label.is_nonterminal())
        throw Error("internal nodes must carry a nonterminal label");
    if (children.empty())
        throw Error("internal node '" + label.text() + "' has no children");
    std::string y;
    std::size_t size = 1;
    for (const auto& c : children) {
        y += c->yield();
        size += c->size();
    }
    return NodePtr(new Node(std::move(label), std::move(children), std::move(y), size));
}

bool same_tree(const Node& a, const Node& b)
{
    if (&a == &b)
        return true;
    if (a.label() != b.label() || a.children().size() != b.children().size() || a.yield() != b.yield())
        return false;
    for (std::size_t i = 0; i < a.children().size(); ++i) {
        if (!same_tree(*a.children()[i], *b.children()[i]))
            return false;
    }
    return true;
}

bool same_trees(const TreeSet& a, const TreeSet& b)
{
    if (a.start != b.start || a.trees.size() != b.trees.size())
        return false;
    for (std::size_t i = 0; i < a.trees.size(); ++i) {
        if (!same_tree(*a.trees[i], *b.trees[i]))
            return false;
    }
    return true;
}

Symbol token_label(std::string_view token)
{
    static constexpr char kHex[] = "0123456789abcdef";
    const bool alnum = std::all_of(token.begin(), token.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
    });
    std::string label = "t_";
    if (alnum) {
        label += token;
    } else {
        label += '_';
        for (char ch : token) {
            auto c = static_cast<unsigned char>(ch);
            label += kHex[c >> 4];
            label += kHex[c & 0xf];
        }
    }
    return Symbol::nonterminal(std::move(label));
}

TreeSet naive_trees(const std::vector<std::vector<std::string>>& token_sequences)
{
    TreeSet ts;
    for (const auto& tokens : token_sequences) {
        if (tokens.empty())
            throw Error("cannot build a tree for an empty example");
        std::vector<NodePtr> children;
        children.reserve(tokens.size());
        for (const auto& tok : tokens) {
            auto leaf = Node::leaf(Symbol::terminal(tok), tok);
            children.push_back(Node::internal(token_label(tok), {leaf}));
        }
        ts.trees.push_back(Node::internal(ts.start, std::move(children)));
    }
    return ts;
}

std::string yield(const Node& node)
{
    return node.yield();
}

namespace {

template <typename F>
void visit_internal(const Node& n, F&& f)
{
    if (n.is_leaf())
        return;
    f(n);
    for (const auto& c : n.children())
        visit_internal(*c, f);
}

} // namespace

std::set<Symbol> nonterminal_labels(const TreeSet& ts)
{
    std::set<Symbol> out;
    for (const auto& t : ts.trees)
        visit_internal(*t, [&](const Node& n) { out.insert(n.label()); });
    return out;
}

bool contains_label(const TreeSet& ts, const Symbol& label)
{
    std::function<bool(const Node&)> has = [&](const Node& n) {
        if (n.label() == label)
            return true;
        for (const auto& c : n.children()) {
            if (has(*c))
                return true;
        }
        return false;
    };
    return std::any_of(ts.trees.begin(), ts.trees.end(), [&](const NodePtr& t) { return has(*t); });
}

const Symbol& begin_sentinel()
{
    static const Symbol s = Symbol::nonterminal("__begin");
    return s;
}

const Symbol& end_sentinel()
{
    static const Symbol s = Symbol::nonterminal("__end");
    return s;
}

namespace {

KContext context_at(const std::vector<NodePtr>& siblings, std::size_t start, std::size_t len, std::size_t k)
{
    KContext ctx;
    ctx.left.reserve(k);
    ctx.right.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        ctx.left.push_back(start >= i + 1 ? siblings[start - i - 1]->label() : begin_sentinel());
        const std::size_t r = start + len + i;
        ctx.right.push_back(r < siblings.size() ? siblings[r]->label() : end_sentinel());
    }
    return ctx;
}

} // namespace

SequenceTable collect_sequences(const TreeSet& ts, std::size_t max_len, std::size_t k)
{
    if (max_len < 2)
        throw Error("collect_sequences: max_len must be at least 2");

    std::map<LabelSeq, SequenceStats> multi;
    std::map<LabelSeq, SequenceStats> singles;
    std::size_t parent_id = 0;

    for (const auto& t : ts.trees) {
        visit_internal(*t, [&](const Node& n) {
            const std::size_t id = parent_id++;
            const auto& kids = n.children();
            const std::size_t arity = kids.size();
            if (arity < 2)
                return;
            const std::size_t longest = std::min(max_len, arity - 1);
            for (std::size_t len = 1; len <= longest; ++len) {
                auto& table = len == 1 ? singles : multi;
                for (std::size_t start = 0; start + len <= arity; ++start) {
                    LabelSeq seq;
                    seq.reserve(len);
                    for (std::size_t i = start; i < start + len; ++i)
                        seq.push_back(kids[i]->label());
                    auto& stats = table[seq];
                    if (stats.occ == 0)
                        stats.sequence = seq;
                    stats.occ += 1;
                    stats.contexts.insert(context_at(kids, start, len, k));
                    stats.occurrences.push_back({id, start, arity});
                }
            }
        });
    }

    SequenceTable out;
    out.multi.reserve(multi.size());
    for (auto& [_, s] : multi)
        out.multi.push_back(std::move(s));
    for (auto& [_, s] : singles)
        out.singles.push_back(std::move(s));
    return out;
}

std::map<Symbol, std::set<KContext>> label_contexts(const TreeSet& ts, std::size_t k)
{
    std::map<Symbol, std::set<KContext>> out;
    KContext root_ctx{LabelSeq(k, begin_sentinel()), LabelSeq(k, end_sentinel())};
    for (const auto& t : ts.trees) {
        out[t->label()].insert(root_ctx);
        visit_internal(*t, [&](const Node& n) {
            const auto& kids = n.children();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (!kids[i]->is_leaf())
                    out[kids[i]->label()].insert(context_at(kids, i, 1, k));
            }
        });
    }
    return out;
}

std::string to_string(const LabelSeq& seq)
{
    std::string out;
    for (const auto& s : seq) {
        if (!out.empty())
            out += ' ';
        out += s.to_string();
    }
    return out;
}

std::string Bubble::to_string() const
{
    std::string out = "(" + gramlearn::to_string(seq1) + ")";
    if (seq2)
        out += " (" + gramlearn::to_string(*seq2) + ")";
    return out;
}

namespace {

bool is_subsequence(const LabelSeq& inner, const LabelSeq& outer)
{
    if (inner.size() > outer.size())
        return false;
    return std::search(outer.begin(), outer.end(), inner.begin(), inner.end()) != outer.end();
}

/// Rebuilds `node` with every proper occurrence of `seq` wrapped in a node
/// labeled `fresh`. Subtrees without a match are shared.
NodePtr bubble_node(const NodePtr& node, const LabelSeq& seq, const Symbol& fresh, std::size_t& replaced)
{
    if (node->is_leaf())
        return node;
    const auto& kids = node->children();
    bool changed = false;
    std::vector<NodePtr> rebuilt;
    rebuilt.reserve(kids.size());
    for (const auto& c : kids) {
        auto nc = bubble_node(c, seq, fresh, replaced);
        changed = changed || nc != c;
        rebuilt.push_back(std::move(nc));
    }

    const std::size_t len = seq.size();
    if (rebuilt.size() > len) {
        std::vector<NodePtr> out;
        out.reserve(rebuilt.size());
        std::size_t i = 0;
        while (i < rebuilt.size()) {
            bool match = i + len <= rebuilt.size();
            for (std::size_t j = 0; match && j < len; ++j)
                match = rebuilt[i + j]->label() == seq[j];
            if (match) {
                std::vector<NodePtr> grouped(rebuilt.begin() + static_cast<std::ptrdiff_t>(i),
                                             rebuilt.begin() + static_cast<std::ptrdiff_t>(i + len));
                out.push_back(Node::internal(fresh, std::move(grouped)));
                i += len;
                ++replaced;
                changed = true;
            } else {
                out.push_back(rebuilt[i]);
                ++i;
            }
        }
        rebuilt = std::move(out);
    }
    if (!changed)
        return node;
    return Node::internal(node->label(), std::move(rebuilt));
}

TreeSet bubble_all(const TreeSet& ts, const LabelSeq& seq, const Symbol& fresh)
{
    if (seq.empty())
        throw Error("cannot bubble an empty sequence");
    TreeSet out = ts;
    std::size_t replaced = 0;
    for (auto& t : out.trees)
        t = bubble_node(t, seq, fresh, replaced);
    if (replaced == 0)
        throw Error("sequence (" + to_string(seq) + ") has no proper occurrence to bubble");
    return out;
}

} // namespace

BubbledTrees apply_bubble(const TreeSet& ts, const Bubble& b)
{
    const Symbol l1 = ts.fresh_label();
    if (!b.seq2)
        return {bubble_all(ts, b.seq1, l1), l1, std::nullopt};

    const Symbol l2 = ts.fresh_label();
    // An inner sequence can only be found after the enclosing one is bubbled.
    if (b.seq1.size() < b.seq2->size() && is_subsequence(b.seq1, *b.seq2)) {
        TreeSet mid = bubble_all(ts, *b.seq2, l2);
        return {bubble_all(mid, b.seq1, l1), l1, l2};
    }
    TreeSet mid = bubble_all(ts, b.seq1, l1);
    return {bubble_all(mid, *b.seq2, l2), l1, l2};
}

namespace {

NodePtr splice_node(const NodePtr& node, const Symbol& label)
{
    if (node->is_leaf())
        return node;
    std::vector<NodePtr> kids;
    bool changed = false;
    for (const auto& c : node->children()) {
        auto nc = splice_node(c, label);
        if (!nc->is_leaf() && nc->label() == label) {
            for (const auto& g : nc->children())
                kids.push_back(g);
            changed = true;
        } else {
            changed = changed || nc != c;
            kids.push_back(std::move(nc));
        }
    }
    if (!changed)
        return node;
    return Node::internal(node->label(), std::move(kids));
}

NodePtr relabel_node(const NodePtr& node, const std::map<Symbol, Symbol>& mapping)
{
    if (node->is_leaf())
        return node;
    bool changed = false;
    std::vector<NodePtr> kids;
    kids.reserve(node->children().size());
    for (const auto& c : node->children()) {
        auto nc = relabel_node(c, mapping);
        changed = changed || nc != c;
        kids.push_back(std::move(nc));
    }
    auto it = mapping.find(node->label());
    if (it != mapping.end() && it->second != node->label())
        return Node::internal(it->second, std::move(kids));
    if (!changed)
        return node;
    return Node::internal(node->label(), std::move(kids));
}

void dump_node(std::ostringstream& os, const Node& n, int depth)
{
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ');
    if (n.is_leaf()) {
        os << n.label().to_string() << ": " << quote_terminal(n.yield()) << '\n';
        return;
    }
    os << n.label().text() << '\n';
    for (const auto& c : n.children())
        dump_node(os, *c, depth + 1);
}

} // namespace

TreeSet splice_out(const TreeSet& ts, const Symbol& label)
{
    TreeSet out = ts;
    for (auto& t : out.trees)
        t = splice_node(t, label);
    return out;
}

TreeSet relabel(const TreeSet& ts, const std::map<Symbol, Symbol>& mapping)
{
    TreeSet out = ts;
    for (auto& t : out.trees)
        t = relabel_node(t, mapping);
    if (auto it = mapping.find(ts.start); it != mapping.end())
        out.start = it->second;
    return out;
}

std::string dump_trees(const TreeSet& ts)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < ts.trees.size(); ++i) {
        os << "# tree " << i << '\n';
        dump_node(os, *ts.trees[i], 0);
    }
    return os.str();
}

} // namespace gramlearn
