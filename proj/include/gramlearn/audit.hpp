#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gramlearn {

struct CandidateRecord
{
    std::string text;
    bool accepted;
};

/// One directional check: every candidate submitted to the oracle while
/// deciding whether `replacer` may stand in for `replacee`.
struct CheckRecord
{
    std::uint64_t id = 0;
    std::string kind; // "replace", "expand" or "example"
    std::string replacer;
    std::string replacee;
    int level = 0;
    std::vector<CandidateRecord> candidates;
    bool passed = false;

    std::size_t rejected() const;
};

/// A relabeling that was actually applied, with the checks that justified it.
struct MergeRecord
{
    std::string a;
    std::string b;
    std::string into;
    std::vector<std::uint64_t> checks;
};

/// Tab-separated merge audit trail:
///
///   check  <id> <kind> <replacer> <replacee> <level> <#candidates> <#rejected> <pass|fail>
///   cand   <id> <accept|reject> <quoted candidate>
///   merge  <a> <b> <into> <comma-separated check ids>
///
/// `cand` lines follow their `check` line.
class AuditLog
{
public:
    std::uint64_t begin_check(std::string kind, std::string replacer, std::string replacee, int level);
    void record_candidate(std::uint64_t check, std::string text, bool accepted);
    void end_check(std::uint64_t check, bool passed);
    void record_merge(std::string a, std::string b, std::string into, std::vector<std::uint64_t> checks);

    const std::vector<CheckRecord>& checks() const { return checks_; }
    const std::vector<MergeRecord>& merges() const { return merges_; }

    /// Number of distinct candidate strings across all checks.
    std::size_t distinct_candidates() const;

    void write(std::ostream& os) const;
    void write(const std::string& path) const;
    static AuditLog read(std::istream& is);

private:
    std::vector<CheckRecord> checks_;
    std::vector<MergeRecord> merges_;
};

/// Every applied merge references only passing checks with no rejected candidate.
bool merges_are_sound(const AuditLog& log);

} // namespace gramlearn
