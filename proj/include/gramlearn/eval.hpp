#pragma once

#include "gramlearn/grammar.hpp"
#include "gramlearn/oracle.hpp"
#include "gramlearn/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gramlearn {

struct EvalReport
{
    Rational recall;
    Rational precision;
    Rational f1;
    std::size_t test_size = 0;
    std::size_t sample_size = 0;
};

/// Harmonic mean, or 0 when both are 0.
Rational f1_score(const Rational& precision, const Rational& recall);

/// Fraction of `test_set` accepted by `mined`. The test set must be non-empty.
Rational recall(const Grammar& mined, const std::vector<std::string>& test_set);

/// Fraction of n samples of `mined` (seeds seed .. seed+n-1) the oracle accepts.
Rational precision(const Grammar& mined, OracleClient& oracle, std::size_t n, std::uint64_t seed);

/// n samples from `golden` with seeds seed .. seed+n-1; duplicates are kept.
std::vector<std::string> generate_test_set(const Grammar& golden, std::size_t n, std::uint64_t seed);

/// Short samples that together use every rule reachable from the start
/// symbol, padded with further distinct short samples up to `min_size`.
std::vector<std::string> generate_training_set(const Grammar& golden, std::size_t min_size, std::uint64_t seed);

EvalReport evaluate(const Grammar& mined, const std::vector<std::string>& test_set, OracleClient& oracle,
                    std::size_t sample_size, std::uint64_t seed);

std::string eval_json(const EvalReport& r);
/// Aligned two-column table.
std::string eval_table(const EvalReport& r);

} // namespace gramlearn
