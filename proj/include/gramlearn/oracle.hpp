#pragma once

#include "gramlearn/grammar.hpp"
#include "gramlearn/recognizer.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace gramlearn {

/// Raised when a query would exceed the configured budget.
class OracleBudgetExhausted : public Error
{
public:
    using Error::Error;
};

struct OracleStats
{
    std::uint64_t total_queries = 0; // cache misses only
    std::uint64_t cache_hits = 0;
    std::chrono::nanoseconds wall_time{0};
    std::uint64_t timeouts = 0;
};

/// A black-box Boolean predicate over strings.
class Oracle
{
public:
    virtual ~Oracle() = default;
    virtual bool evaluate(const std::string& input) = 0;
    /// Number of evaluations that hit the timeout.
    virtual std::uint64_t timeouts() const { return 0; }
};

/// Runs `<command> <candidate-file>` through /bin/sh; exit status 0 means valid.
/// A timeout, signal death or spawn failure counts as invalid.
class CommandOracle : public Oracle
{
public:
    CommandOracle(std::string command, std::chrono::milliseconds timeout);
    bool evaluate(const std::string& input) override;
    std::uint64_t timeouts() const override { return timeouts_.load(); }

private:
    std::string command_;
    std::chrono::milliseconds timeout_;
    std::atomic<std::uint64_t> timeouts_{0};
    std::atomic<std::uint64_t> counter_{0};
};

/// Membership in a golden grammar.
class GrammarOracle : public Oracle
{
public:
    explicit GrammarOracle(Grammar golden);
    bool evaluate(const std::string& input) override { return recognizer_.accepts(input); }
    const Grammar& grammar() const { return golden_; }

private:
    Grammar golden_;
    Recognizer recognizer_;
};

struct OracleConfig
{
    enum class Kind { Command, GoldenGrammar };
    Kind kind = Kind::GoldenGrammar;
    std::string command;
    std::string grammar_path;
    std::chrono::milliseconds timeout{10000};
    std::optional<std::uint64_t> budget;
};

std::unique_ptr<Oracle> make_oracle(const OracleConfig& cfg);

/// Memoizing front end for an Oracle. The memo table and counters are guarded
/// by a mutex; evaluations themselves may overlap when called from several
/// threads. total_queries counts evaluations, not calls.
class OracleClient
{
public:
    explicit OracleClient(std::unique_ptr<Oracle> oracle, std::optional<std::uint64_t> budget = std::nullopt);

    bool query(const std::string& input);

    /// True if `input` was already answered (no evaluation needed).
    bool cached(const std::string& input) const;

    OracleStats stats() const;

private:
    std::unique_ptr<Oracle> oracle_;
    std::optional<std::uint64_t> budget_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, bool> memo_;
    OracleStats stats_;
    std::uint64_t in_flight_ = 0;
};

} // namespace gramlearn
