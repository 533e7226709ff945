#include "gramlearn/scoring.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace gramlearn {

void ScoringConfig::validate() const
{
    if (context_k < 1 || context_k > 30)
        throw Error("context_k must be in [1, 30]");
    if (top_n < 1)
        throw Error("top_n must be at least 1");
    if (max_len_start < 2 || max_len_start > max_len_end)
        throw Error("need 2 <= max_len_start <= max_len_end");
}

Rational k_tuple_sim(const LabelSeq& a, const LabelSeq& b)
{
    if (a.size() != b.size())
        throw Error("k_tuple_sim: tuple lengths differ");
    if (a == b)
        return Rational(1, 2);
    Rational sum;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i])
            sum += Rational(1, std::int64_t{1} << (i + 2));
    }
    return sum;
}

Rational context_sim(const KContext& a, const KContext& b)
{
    return k_tuple_sim(a.left, b.left) + k_tuple_sim(a.right, b.right);
}

Rational set_context_sim(const std::set<KContext>& a, const std::set<KContext>& b)
{
    if (a.empty() || b.empty())
        throw Error("set_context_sim: empty context set");
    Rational best;
    for (const auto& ca : a) {
        for (const auto& cb : b)
            best = std::max(best, context_sim(ca, cb));
    }
    return best;
}

namespace {

/// Contexts as interned label ids so similarity is integer arithmetic in
/// units of 1/2^(k+1).
class FastContexts
{
public:
    explicit FastContexts(std::size_t k) : k_(k) {}

    std::vector<std::vector<std::uint32_t>> intern(const std::set<KContext>& contexts)
    {
        std::vector<std::vector<std::uint32_t>> out;
        out.reserve(contexts.size());
        for (const auto& c : contexts) {
            std::vector<std::uint32_t> v;
            v.reserve(2 * k_);
            for (const auto& s : c.left)
                v.push_back(id(s));
            for (const auto& s : c.right)
                v.push_back(id(s));
            out.push_back(std::move(v));
        }
        return out;
    }

    std::int64_t tuple_sim(const std::uint32_t* a, const std::uint32_t* b) const
    {
        std::int64_t sum = 0;
        bool all = true;
        for (std::size_t i = 0; i < k_; ++i) {
            if (a[i] == b[i])
                sum += std::int64_t{1} << (k_ - 1 - i);
            else
                all = false;
        }
        return all ? std::int64_t{1} << k_ : sum;
    }

    std::int64_t max_units() const { return std::int64_t{1} << (k_ + 1); }

    std::int64_t set_sim(const std::vector<std::vector<std::uint32_t>>& a,
                         const std::vector<std::vector<std::uint32_t>>& b) const
    {
        std::int64_t best = 0;
        for (const auto& ca : a) {
            for (const auto& cb : b) {
                const std::int64_t s = tuple_sim(ca.data(), cb.data()) + tuple_sim(ca.data() + k_, cb.data() + k_);
                if (s > best) {
                    best = s;
                    if (best == max_units())
                        return best;
                }
            }
        }
        return best;
    }

    Rational to_rational(std::int64_t units) const { return Rational(units, max_units()); }

private:
    std::uint32_t id(const Symbol& s)
    {
        auto [it, inserted] = ids_.emplace(s, static_cast<std::uint32_t>(ids_.size()));
        return it->second;
    }

    std::size_t k_;
    std::unordered_map<Symbol, std::uint32_t, SymbolHash> ids_;
};

bool bubble_before(const Bubble& a, const Bubble& b)
{
    if (a.similarity != b.similarity)
        return a.similarity > b.similarity;
    if (a.frequency != b.frequency)
        return a.frequency > b.frequency;
    if (a.seq1 != b.seq1)
        return a.seq1 < b.seq1;
    return a.seq2 < b.seq2;
}

} // namespace

bool sequences_conflict(const SequenceStats& a, const SequenceStats& b)
{
    const std::size_t la = a.sequence.size();
    const std::size_t lb = b.sequence.size();
    // Occurrences are recorded in preorder, so parents appear in ascending order.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.occurrences.size() && j < b.occurrences.size()) {
        const auto pa = a.occurrences[i].parent;
        const auto pb = b.occurrences[j].parent;
        if (pa < pb) {
            ++i;
        } else if (pb < pa) {
            ++j;
        } else {
            std::size_t i_end = i;
            while (i_end < a.occurrences.size() && a.occurrences[i_end].parent == pa)
                ++i_end;
            std::size_t j_end = j;
            while (j_end < b.occurrences.size() && b.occurrences[j_end].parent == pa)
                ++j_end;
            for (std::size_t x = i; x < i_end; ++x) {
                const auto a0 = a.occurrences[x].start;
                const auto a1 = a0 + la;
                for (std::size_t y = j; y < j_end; ++y) {
                    const auto b0 = b.occurrences[y].start;
                    const auto b1 = b0 + lb;
                    const bool intersect = a0 < b1 && b0 < a1;
                    const bool a_in_b = b0 <= a0 && a1 <= b1;
                    const bool b_in_a = a0 <= b0 && b1 <= a1;
                    if (intersect && !a_in_b && !b_in_a)
                        return true;
                }
            }
            i = i_end;
            j = j_end;
        }
    }
    return false;
}

std::vector<Bubble> score_bubbles(const TreeSet& ts, std::size_t max_len, const ScoringConfig& cfg)
{
    cfg.validate();
    const SequenceTable table = collect_sequences(ts, max_len, cfg.context_k);
    FastContexts fast(cfg.context_k);

    std::vector<std::vector<std::vector<std::uint32_t>>> single_ctx;
    single_ctx.reserve(table.singles.size());
    for (const auto& s : table.singles)
        single_ctx.push_back(fast.intern(s.contexts));

    const std::size_t m = table.multi.size();
    std::vector<std::vector<std::vector<std::uint32_t>>> multi_ctx;
    multi_ctx.reserve(m);
    std::vector<std::int64_t> single_sim(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        multi_ctx.push_back(fast.intern(table.multi[i].contexts));
        for (const auto& sc : single_ctx) {
            single_sim[i] = std::max(single_sim[i], fast.set_sim(multi_ctx[i], sc));
            if (single_sim[i] == fast.max_units())
                break;
        }
    }

    std::vector<Bubble> bubbles;
    bubbles.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        bubbles.push_back({table.multi[i].sequence, std::nullopt, fast.to_rational(single_sim[i]),
                           Rational(static_cast<std::int64_t>(table.multi[i].occ))});
    }

    // Pair only the most promising sequences; all-pairs is quadratic in windows.
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (single_sim[a] != single_sim[b])
            return single_sim[a] > single_sim[b];
        if (table.multi[a].occ != table.multi[b].occ)
            return table.multi[a].occ > table.multi[b].occ;
        return a < b; // multi is sorted by label sequence
    });
    order.resize(std::min(order.size(), 2 * cfg.top_n));
    std::sort(order.begin(), order.end());

    for (std::size_t x = 0; x < order.size(); ++x) {
        for (std::size_t y = x + 1; y < order.size(); ++y) {
            const auto& a = table.multi[order[x]];
            const auto& b = table.multi[order[y]];
            if (sequences_conflict(a, b))
                continue;
            bubbles.push_back({a.sequence, b.sequence,
                               fast.to_rational(fast.set_sim(multi_ctx[order[x]], multi_ctx[order[y]])),
                               Rational(static_cast<std::int64_t>(a.occ + b.occ), 2)});
        }
    }

    const std::size_t keep = std::min(bubbles.size(), cfg.top_n);
    std::partial_sort(bubbles.begin(), bubbles.begin() + static_cast<std::ptrdiff_t>(keep), bubbles.end(),
                      bubble_before);
    bubbles.resize(keep);
    return bubbles;
}

std::vector<Bubble> get_bubbles(const TreeSet& ts, std::size_t max_len, const ScoringConfig& cfg, Rng& rng)
{
    auto bubbles = score_bubbles(ts, max_len, cfg);
    rng.shuffle(bubbles);
    return bubbles;
}

} // namespace gramlearn
