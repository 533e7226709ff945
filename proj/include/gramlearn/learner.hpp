#pragma once

#include "gramlearn/audit.hpp"
#include "gramlearn/grammar.hpp"
#include "gramlearn/merge.hpp"
#include "gramlearn/oracle.hpp"
#include "gramlearn/scoring.hpp"

#include <chrono>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gramlearn {

struct LearnerConfig
{
    ScoringConfig scoring;
    SamplingConfig sampling;
    /// Group same-class character runs into single leaves; off means one leaf
    /// per character.
    bool pretokenize = true;
    std::size_t token_expand_samples = 10;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Maximal runs of lowercase, uppercase, whitespace or digit characters;
/// every other byte is a token on its own.
std::vector<std::string> pretokenize(std::string_view s);

struct AcceptedBubble
{
    Bubble bubble;
    std::string into;
};

struct RunReport
{
    Grammar grammar;
    TreeSet trees;
    std::size_t iterations = 0;
    std::size_t bubbles_tried = 0;
    std::vector<AcceptedBubble> accepted_bubbles;
    OracleStats oracle;
    std::chrono::nanoseconds wall_time{0};
    /// "oracle", "bubble_scoring", "candidate_sampling" and "other".
    std::map<std::string, std::chrono::nanoseconds> phase_times;
    /// "ok" or "budget_exhausted".
    std::string status = "ok";
};

std::string report_json(const RunReport& r);

/// Optional observation points for a run.
struct LearnHooks
{
    AuditLog* audit = nullptr;
    /// Receives every scored bubble list in score order, before the shuffle.
    std::ostream* bubble_log = nullptr;
    /// Called whenever the trees change: initial merges, accepted bubbles and
    /// token expansion.
    std::function<void(const TreeSet& before, const TreeSet& after, const std::string& what)> on_update;
};

struct AcceptResult
{
    bool accepted = false;
    TreeSet trees;
    std::string into;
};

/// Decide a bubble already applied to the trees. On rejection `trees` is the
/// unbubbled input.
AcceptResult accept_bubble(const TreeSet& original, const BubbledTrees& bubbled, const LearnerConfig& cfg,
                           MergeContext& ctx);

/// For each nonterminal whose single-token expansions all share one run
/// class, replace those tokens with the widest class on its ladder that the
/// oracle accepts in every hole. Other expansions are left alone.
TreeSet expand_tokens(const TreeSet& ts, const LearnerConfig& cfg, MergeContext& ctx);

/// Learn a grammar from positive examples. Throws Error when an example is
/// empty or rejected by the oracle. Budget exhaustion ends the run early with
/// status "budget_exhausted" and the grammar learned so far.
RunReport learn(const std::vector<std::string>& examples, OracleClient& oracle, const LearnerConfig& cfg,
                const LearnHooks& hooks = {});

} // namespace gramlearn
