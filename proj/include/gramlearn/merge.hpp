#pragma once

#include "gramlearn/audit.hpp"
#include "gramlearn/oracle.hpp"
#include "gramlearn/random.hpp"
#include "gramlearn/tree.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gramlearn {

struct SamplingConfig
{
    std::size_t p = 50;
    bool level1_for_2bubbles = true;
    /// Fill each hole of a candidate independently instead of with one string.
    bool strict_holes = false;

    void validate() const;
};

/// A string with holes: `parts` are the literal pieces between holes, so a
/// string with n holes has n + 1 parts.
class HoledString
{
public:
    static HoledString literal(std::string s);
    static HoledString hole();

    std::size_t holes() const { return parts_.size() - 1; }
    const std::vector<std::string>& parts() const { return parts_; }

    HoledString& operator+=(const HoledString& other);

    /// Every hole filled with `filler`.
    std::string fill(const std::string& filler) const;
    /// Hole i filled with fillers[i].
    std::string fill(const std::vector<std::string>& fillers) const;

    /// Rendering with `marker` in place of each hole.
    std::string to_string(std::string_view marker = "\xE2\x80\xA2") const;

    friend bool operator==(const HoledString&, const HoledString&) = default;
    friend auto operator<=>(const HoledString&, const HoledString&) = default;

private:
    std::vector<std::string> parts_{std::string()};
};

/// Everything a replacement check needs besides the trees.
struct MergeContext
{
    OracleClient& oracle;
    SamplingConfig cfg;
    Rng& rng;
    AuditLog* audit = nullptr;
    /// Time spent building replacee/replacer strings and candidates.
    std::chrono::nanoseconds sampling_time{0};
};

/// Outcome of a replacement or merge check, with the audit ids of the
/// directional checks that were run.
struct Verdict
{
    bool ok = false;
    std::vector<std::uint64_t> checks;

    explicit operator bool() const { return ok; }
};

/// Holed yields of the trees containing `replacee`: each node labeled
/// `replacee` contributes a hole or any of its own alternatives, other nodes
/// the product of their children's alternatives. Strings without holes are
/// dropped and the union is sampled down to p.
std::vector<HoledString> replacee_strings(const TreeSet& ts, const Symbol& replacee, const SamplingConfig& cfg,
                                          Rng& rng);

/// Level 0: distinct yields of `replacer` nodes. Level 1: for each such node,
/// the product of its children's level-0 alternatives. Sampled down to p.
std::vector<std::string> replacer_strings(const TreeSet& ts, const Symbol& replacer, int level,
                                          const SamplingConfig& cfg, Rng& rng);

/// Fill the replacee holes with the given replacer strings and ask the
/// oracle; stops at the first rejected candidate.
Verdict check_candidates(const TreeSet& ts, const Symbol& replacee, const std::vector<std::string>& replacers,
                         const std::string& kind, const std::string& replacer_name, int level, MergeContext& ctx);

/// Can every occurrence of `replacee` be replaced by strings derived from `replacer`?
Verdict replaces(const TreeSet& ts, const Symbol& replacer, const Symbol& replacee, MergeContext& ctx, int level = 0);

/// replaces() in both directions, short-circuiting on the first failure.
Verdict merges(const TreeSet& ts, const Symbol& a, const Symbol& b, MergeContext& ctx, int level = 0);

struct Merged
{
    TreeSet trees;
    Symbol into;
};

/// Substitute one label for every node labeled `a` or `b`. The start label
/// absorbs the other label; otherwise the merged label is fresh.
Merged merge_labels(const TreeSet& ts, const Symbol& a, const Symbol& b);

/// A nonterminal all of whose nodes have exactly one leaf child.
bool is_character_nonterminal(const TreeSet& ts, const Symbol& label);

/// Split `t_c` per right-hand-side position, merge `t_new` with every split
/// copy that passes merges(), and restore the rest. Returns nothing (and
/// leaves `ts` alone) when no copy merges.
std::optional<TreeSet> partial_merge(const TreeSet& ts, const Symbol& t_new, const Symbol& t_c, MergeContext& ctx);

/// Merge label pairs until a full scan in sorted pair order accepts nothing.
TreeSet merge_all_valid(const TreeSet& ts, MergeContext& ctx);

} // namespace gramlearn
