#pragma once

#include "gramlearn/random.hpp"
#include "gramlearn/rational.hpp"
#include "gramlearn/tree.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace gramlearn {

struct ScoringConfig
{
    std::size_t context_k = 4;
    std::size_t top_n = 100;
    std::size_t max_len_start = 3;
    std::size_t max_len_end = 10;

    /// Throws Error when an invariant does not hold.
    void validate() const;
};

/// 1/2 for identical tuples, otherwise sum over matching positions i of 1/2^(i+2).
Rational k_tuple_sim(const LabelSeq& a, const LabelSeq& b);

Rational context_sim(const KContext& a, const KContext& b);

/// Maximum pairwise context_sim. Both sets must be non-empty.
Rational set_context_sim(const std::set<KContext>& a, const std::set<KContext>& b);

/// All candidate bubbles for sequences up to `max_len`, sorted by descending
/// (similarity, frequency) with ties broken by label sequence, truncated to
/// top_n. This is the order before the shuffle.
std::vector<Bubble> score_bubbles(const TreeSet& ts, std::size_t max_len, const ScoringConfig& cfg);

/// score_bubbles() followed by one shuffle with `rng`.
std::vector<Bubble> get_bubbles(const TreeSet& ts, std::size_t max_len, const ScoringConfig& cfg, Rng& rng);

/// True iff some occurrence of `a` strictly overlaps some occurrence of `b`
/// within one sibling list (they intersect and neither contains the other).
bool sequences_conflict(const SequenceStats& a, const SequenceStats& b);

} // namespace gramlearn
