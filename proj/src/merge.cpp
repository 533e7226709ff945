#include "gramlearn/merge.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gramlearn {

void SamplingConfig::validate() const
{
    if (p < 1)
        throw Error("sampling p must be at least 1");
}

HoledString HoledString::literal(std::string s)
{
    HoledString h;
    h.parts_[0] = std::move(s);
    return h;
}

HoledString HoledString::hole()
{
    HoledString h;
    h.parts_.emplace_back();
    return h;
}

HoledString& HoledString::operator+=(const HoledString& other)
{
    parts_.back() += other.parts_.front();
    parts_.insert(parts_.end(), other.parts_.begin() + 1, other.parts_.end());
    return *this;
}

std::string HoledString::fill(const std::string& filler) const
{
    std::string out = parts_[0];
    for (std::size_t i = 1; i < parts_.size(); ++i) {
        out += filler;
        out += parts_[i];
    }
    return out;
}

std::string HoledString::fill(const std::vector<std::string>& fillers) const
{
    if (fillers.size() != holes())
        throw Error("HoledString::fill: filler count does not match hole count");
    std::string out = parts_[0];
    for (std::size_t i = 1; i < parts_.size(); ++i) {
        out += fillers[i - 1];
        out += parts_[i];
    }
    return out;
}

std::string HoledString::to_string(std::string_view marker) const
{
    return fill(std::string(marker));
}

namespace {

using Clock = std::chrono::steady_clock;

/// Alternatives per node are enumerated exactly up to this many combinations
/// and randomly drawn beyond it.
std::size_t product_cap(const SamplingConfig& cfg)
{
    return std::max<std::size_t>(4 * cfg.p, 64);
}

template <typename T, typename Concat>
std::vector<T> capped_product(const std::vector<std::vector<T>>& factors, std::size_t cap, Rng& rng, Concat concat)
{
    std::size_t total = 1;
    for (const auto& f : factors) {
        total = f.size() == 0 ? 0 : (total > cap / f.size() + 1 ? cap + 1 : total * f.size());
        if (total > cap)
            break;
    }
    std::vector<T> out;
    if (total == 0)
        return out;
    if (total <= cap) {
        out.push_back(T{});
        for (const auto& f : factors) {
            std::vector<T> next;
            next.reserve(out.size() * f.size());
            for (const auto& prefix : out) {
                for (const auto& alt : f) {
                    T v = prefix;
                    concat(v, alt);
                    next.push_back(std::move(v));
                }
            }
            out = std::move(next);
        }
    } else {
        out.reserve(cap);
        for (std::size_t n = 0; n < cap; ++n) {
            T v{};
            for (const auto& f : factors)
                concat(v, f[rng.uniform_index(f.size())]);
            out.push_back(std::move(v));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<HoledString> holed_alternatives(const Node& n, const Symbol& replacee, std::size_t cap, Rng& rng)
{
    if (n.is_leaf())
        return {HoledString::literal(n.yield())};
    std::vector<std::vector<HoledString>> factors;
    factors.reserve(n.children().size());
    bool all_plain = true;
    for (const auto& c : n.children()) {
        factors.push_back(holed_alternatives(*c, replacee, cap, rng));
        all_plain = all_plain && factors.back().size() == 1 && factors.back()[0].holes() == 0;
    }
    std::vector<HoledString> out;
    if (all_plain)
        out.push_back(HoledString::literal(n.yield()));
    else
        out = capped_product(factors, cap, rng, [](HoledString& acc, const HoledString& x) { acc += x; });
    if (n.label() == replacee)
        out.push_back(HoledString::hole());
    return out;
}

template <typename F>
void visit_internal(const Node& n, F&& f)
{
    if (n.is_leaf())
        return;
    f(n);
    for (const auto& c : n.children())
        visit_internal(*c, f);
}

void require_label(const TreeSet& ts, const Symbol& label)
{
    if (!contains_label(ts, label))
        throw Error("label '" + label.text() + "' does not occur in the trees");
}

} // namespace

std::vector<HoledString> replacee_strings(const TreeSet& ts, const Symbol& replacee, const SamplingConfig& cfg,
                                          Rng& rng)
{
    require_label(ts, replacee);
    std::set<HoledString> all;
    const std::size_t cap = product_cap(cfg);
    for (const auto& t : ts.trees) {
        for (auto& h : holed_alternatives(*t, replacee, cap, rng)) {
            if (h.holes() > 0)
                all.insert(std::move(h));
        }
    }
    return rng.sample(std::vector<HoledString>(all.begin(), all.end()), cfg.p);
}

std::vector<std::string> replacer_strings(const TreeSet& ts, const Symbol& replacer, int level,
                                          const SamplingConfig& cfg, Rng& rng)
{
    require_label(ts, replacer);
    if (level != 0 && level != 1)
        throw Error("replacer_strings: level must be 0 or 1");

    std::map<Symbol, std::set<std::string>> level0;
    for (const auto& t : ts.trees)
        visit_internal(*t, [&](const Node& n) { level0[n.label()].insert(n.yield()); });

    std::set<std::string> all;
    if (level == 0) {
        all = level0[replacer];
    } else {
        const std::size_t cap = product_cap(cfg);
        for (const auto& t : ts.trees) {
            visit_internal(*t, [&](const Node& n) {
                if (n.label() != replacer)
                    return;
                std::vector<std::vector<std::string>> factors;
                for (const auto& c : n.children()) {
                    if (c->is_leaf()) {
                        factors.push_back({c->yield()});
                    } else {
                        const auto& alts = level0[c->label()];
                        factors.emplace_back(alts.begin(), alts.end());
                    }
                }
                for (auto& s : capped_product(factors, cap, rng, [](std::string& acc, const std::string& x) { acc += x; }))
                    all.insert(std::move(s));
            });
        }
    }
    return rng.sample(std::vector<std::string>(all.begin(), all.end()), cfg.p);
}

Verdict check_candidates(const TreeSet& ts, const Symbol& replacee, const std::vector<std::string>& replacers,
                         const std::string& kind, const std::string& replacer_name, int level, MergeContext& ctx)
{
    const auto t0 = Clock::now();
    auto replacees = replacee_strings(ts, replacee, ctx.cfg, ctx.rng);

    // One replacer per candidate; cycling through a shuffled replacer list
    // guarantees every sampled replacer and every replacee is used.
    std::vector<std::string> candidates;
    if (!replacees.empty() && !replacers.empty()) {
        std::vector<std::string> pool = replacers;
        ctx.rng.shuffle(pool);
        const std::size_t count = std::max(replacees.size(), pool.size());
        std::set<std::string> seen;
        for (std::size_t i = 0; i < count; ++i) {
            const auto& holed = replacees[i % replacees.size()];
            std::string cand;
            if (ctx.cfg.strict_holes && holed.holes() > 1) {
                std::vector<std::string> fillers{pool[i % pool.size()]};
                while (fillers.size() < holed.holes())
                    fillers.push_back(pool[ctx.rng.uniform_index(pool.size())]);
                cand = holed.fill(fillers);
            } else {
                cand = holed.fill(pool[i % pool.size()]);
            }
            if (seen.insert(cand).second)
                candidates.push_back(std::move(cand));
        }
    }
    ctx.sampling_time += Clock::now() - t0;

    Verdict v;
    v.ok = true;
    std::uint64_t id = 0;
    if (ctx.audit) {
        id = ctx.audit->begin_check(kind, replacer_name, replacee.text(), level);
        v.checks.push_back(id);
    }
    for (const auto& cand : candidates) {
        const bool accepted = ctx.oracle.query(cand);
        if (ctx.audit)
            ctx.audit->record_candidate(id, cand, accepted);
        if (!accepted) {
            v.ok = false;
            break;
        }
    }
    if (ctx.audit)
        ctx.audit->end_check(id, v.ok);
    return v;
}

Verdict replaces(const TreeSet& ts, const Symbol& replacer, const Symbol& replacee, MergeContext& ctx, int level)
{
    require_label(ts, replacer);
    require_label(ts, replacee);
    if (replacer == replacee)
        return {true, {}};
    const auto t0 = Clock::now();
    auto fillers = replacer_strings(ts, replacer, level, ctx.cfg, ctx.rng);
    ctx.sampling_time += Clock::now() - t0;
    return check_candidates(ts, replacee, fillers, "replace", replacer.text(), level, ctx);
}

Verdict merges(const TreeSet& ts, const Symbol& a, const Symbol& b, MergeContext& ctx, int level)
{
    Verdict forward = replaces(ts, a, b, ctx, level);
    if (!forward)
        return forward;
    Verdict backward = replaces(ts, b, a, ctx, level);
    backward.checks.insert(backward.checks.begin(), forward.checks.begin(), forward.checks.end());
    return backward;
}

Merged merge_labels(const TreeSet& ts, const Symbol& a, const Symbol& b)
{
    const Symbol into = (a == ts.start || b == ts.start) ? ts.start : ts.fresh_label();
    std::map<Symbol, Symbol> mapping{{a, into}, {b, into}};
    return {relabel(ts, mapping), into};
}

bool is_character_nonterminal(const TreeSet& ts, const Symbol& label)
{
    bool found = false;
    bool ok = true;
    for (const auto& t : ts.trees) {
        visit_internal(*t, [&](const Node& n) {
            if (n.label() != label)
                return;
            found = true;
            ok = ok && n.children().size() == 1 && n.children()[0]->is_leaf();
        });
    }
    return found && ok;
}

namespace {

/// A right-hand-side position of the induced grammar: parent label, the
/// parent's child labels, and the child index.
struct RhsPosition
{
    Symbol parent;
    LabelSeq rhs;
    std::size_t index;

    friend auto operator<=>(const RhsPosition&, const RhsPosition&) = default;
    friend bool operator==(const RhsPosition&, const RhsPosition&) = default;
};

RhsPosition position_of(const Node& parent, std::size_t i)
{
    RhsPosition pos{parent.label(), {}, i};
    pos.rhs.reserve(parent.children().size());
    for (const auto& c : parent.children())
        pos.rhs.push_back(c->label());
    return pos;
}

NodePtr split_node(const NodePtr& node, const Symbol& t_c, const std::map<RhsPosition, Symbol>& split)
{
    if (node->is_leaf())
        return node;
    std::vector<NodePtr> kids;
    kids.reserve(node->children().size());
    bool changed = false;
    for (std::size_t i = 0; i < node->children().size(); ++i) {
        const auto& c = node->children()[i];
        NodePtr nc = split_node(c, t_c, split);
        if (c->label() == t_c) {
            if (auto it = split.find(position_of(*node, i)); it != split.end())
                nc = Node::internal(it->second, nc->children());
        }
        changed = changed || nc != c;
        kids.push_back(std::move(nc));
    }
    if (!changed)
        return node;
    return Node::internal(node->label(), std::move(kids));
}

} // namespace

std::optional<TreeSet> partial_merge(const TreeSet& ts, const Symbol& t_new, const Symbol& t_c, MergeContext& ctx)
{
    if (!is_character_nonterminal(ts, t_c))
        throw Error("partial_merge: '" + t_c.text() + "' is not a character nonterminal");

    // Positions in first-seen order (tree index, preorder, child index).
    std::vector<RhsPosition> positions;
    std::map<RhsPosition, std::set<std::string>> tokens_at;
    std::set<std::string> all_tokens;
    for (const auto& t : ts.trees) {
        visit_internal(*t, [&](const Node& n) {
            for (std::size_t i = 0; i < n.children().size(); ++i) {
                const auto& c = n.children()[i];
                if (c->label() != t_c)
                    continue;
                auto pos = position_of(n, i);
                auto [it, inserted] = tokens_at.try_emplace(pos);
                if (inserted)
                    positions.push_back(pos);
                it->second.insert(c->yield());
                all_tokens.insert(c->yield());
            }
        });
    }

    // A copy only keeps t_c's language if it has seen every expansion of t_c.
    std::map<RhsPosition, Symbol> split;
    std::vector<Symbol> copies;
    for (const auto& pos : positions) {
        if (tokens_at[pos] != all_tokens)
            continue;
        copies.push_back(ts.fresh_label());
        split.emplace(pos, copies.back());
    }
    if (copies.empty())
        return std::nullopt;

    TreeSet split_ts = ts;
    for (auto& t : split_ts.trees)
        t = split_node(t, t_c, split);

    std::vector<Symbol> merged;
    std::vector<std::uint64_t> checks;
    for (const auto& copy : copies) {
        Verdict v = merges(split_ts, copy, t_new, ctx);
        if (v) {
            merged.push_back(copy);
            checks.insert(checks.end(), v.checks.begin(), v.checks.end());
        }
    }
    if (merged.empty())
        return std::nullopt;

    const Symbol into = t_new == ts.start ? ts.start : ts.fresh_label();
    std::map<Symbol, Symbol> mapping{{t_new, into}};
    for (const auto& copy : copies)
        mapping.insert_or_assign(copy, t_c);
    for (const auto& copy : merged)
        mapping.insert_or_assign(copy, into);
    TreeSet out = relabel(split_ts, mapping);
    if (ctx.audit) {
        for (const auto& copy : merged)
            ctx.audit->record_merge(t_new.text(), t_c.text() + "@" + copy.text(), into.text(), checks);
    }
    return out;
}

TreeSet merge_all_valid(const TreeSet& ts, MergeContext& ctx)
{
    TreeSet current = ts;
    // A failed pair stays failed until one of its labels changes: relabeling
    // other nodes alters neither its replacee holes nor its replacer yields.
    std::set<std::pair<Symbol, Symbol>> failed;
    while (true) {
        const auto labels = nonterminal_labels(current);
        const std::vector<Symbol> sorted(labels.begin(), labels.end());
        bool merged = false;
        for (std::size_t i = 0; i < sorted.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < sorted.size() && !merged; ++j) {
                const auto key = std::make_pair(sorted[i], sorted[j]);
                if (failed.count(key))
                    continue;
                Verdict v = merges(current, sorted[i], sorted[j], ctx);
                if (!v) {
                    failed.insert(key);
                    continue;
                }
                auto m = merge_labels(current, sorted[i], sorted[j]);
                if (ctx.audit)
                    ctx.audit->record_merge(sorted[i].text(), sorted[j].text(), m.into.text(), v.checks);
                current = std::move(m.trees);
                merged = true;
            }
        }
        if (!merged)
            return current;
    }
}

} // namespace gramlearn
