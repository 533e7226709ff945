#include "gramlearn/eval.hpp"

#include "gramlearn/recognizer.hpp"
#include "gramlearn/sampler.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>

namespace gramlearn {

Rational f1_score(const Rational& precision, const Rational& recall)
{
    const Rational sum = precision + recall;
    if (sum == Rational(0))
        return Rational(0);
    return Rational(2) * precision * recall / sum;
}

Rational recall(const Grammar& mined, const std::vector<std::string>& test_set)
{
    if (test_set.empty())
        throw Error("recall: empty test set");
    const Recognizer rec(mined);
    std::int64_t hits = 0;
    for (const auto& s : test_set)
        hits += rec.accepts(s) ? 1 : 0;
    return Rational(hits, static_cast<std::int64_t>(test_set.size()));
}

Rational precision(const Grammar& mined, OracleClient& oracle, std::size_t n, std::uint64_t seed)
{
    if (n == 0)
        throw Error("precision: sample size must be positive");
    const Sampler sampler(mined);
    std::int64_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(seed + i);
        hits += oracle.query(sampler.sample(rng, kDefaultDepthCutoff)) ? 1 : 0;
    }
    return Rational(hits, static_cast<std::int64_t>(n));
}

std::vector<std::string> generate_test_set(const Grammar& golden, std::size_t n, std::uint64_t seed)
{
    const Sampler sampler(golden);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(seed + i);
        out.push_back(sampler.sample(rng, kDefaultDepthCutoff));
    }
    return out;
}

namespace {

std::set<const Rule*> reachable_rules(const Grammar& g)
{
    const auto by_lhs = g.rules_by_lhs();
    std::set<Symbol> seen{g.start()};
    std::vector<Symbol> todo{g.start()};
    std::set<const Rule*> out;
    while (!todo.empty()) {
        const Symbol nt = todo.back();
        todo.pop_back();
        for (const Rule* r : by_lhs.at(nt)) {
            out.insert(r);
            for (const auto& s : r->rhs) {
                if (s.is_nonterminal() && seen.insert(s).second)
                    todo.push_back(s);
            }
        }
    }
    return out;
}

} // namespace

std::vector<std::string> generate_training_set(const Grammar& golden, std::size_t min_size, std::uint64_t seed)
{
    constexpr std::size_t kDraws = 200;
    constexpr std::size_t kMaxCutoff = 12;

    const Sampler sampler(golden);
    Rng rng(seed);
    std::set<const Rule*> uncovered = reachable_rules(golden);
    std::vector<std::string> out;
    std::set<std::string> seen;

    // Each round takes the shortest draw that uses an uncovered rule, at the
    // smallest depth cutoff that produces one.
    while (!uncovered.empty()) {
        std::optional<std::pair<std::string, std::set<const Rule*>>> best;
        for (std::size_t cutoff = 0; cutoff <= kMaxCutoff && !best; ++cutoff) {
            for (std::size_t d = 0; d < kDraws; ++d) {
                std::set<const Rule*> used;
                std::string s = sampler.sample(rng, cutoff, &used);
                const bool fresh = std::any_of(used.begin(), used.end(),
                                               [&](const Rule* r) { return uncovered.count(r) > 0; });
                if (!fresh)
                    continue;
                if (!best || s.size() < best->first.size() || (s.size() == best->first.size() && s < best->first))
                    best.emplace(std::move(s), std::move(used));
            }
        }
        if (!best)
            throw Error("generate_training_set: could not cover every rule");
        for (const Rule* r : best->second)
            uncovered.erase(r);
        if (seen.insert(best->first).second)
            out.push_back(best->first);
    }

    std::size_t attempts = 0;
    while (out.size() < min_size && attempts < 100 * min_size) {
        ++attempts;
        std::string s = sampler.sample(rng, 2 + attempts / (10 * min_size));
        if (seen.insert(s).second)
            out.push_back(std::move(s));
    }
    return out;
}

EvalReport evaluate(const Grammar& mined, const std::vector<std::string>& test_set, OracleClient& oracle,
                    std::size_t sample_size, std::uint64_t seed)
{
    EvalReport r;
    r.recall = recall(mined, test_set);
    r.precision = precision(mined, oracle, sample_size, seed);
    r.f1 = f1_score(r.precision, r.recall);
    r.test_size = test_set.size();
    r.sample_size = sample_size;
    return r;
}

std::string eval_json(const EvalReport& r)
{
    nlohmann::json j = {{"recall", r.recall.to_double()},
                        {"precision", r.precision.to_double()},
                        {"f1", r.f1.to_double()},
                        {"recall_exact", r.recall.to_string()},
                        {"precision_exact", r.precision.to_string()},
                        {"f1_exact", r.f1.to_string()},
                        {"test_size", r.test_size},
                        {"sample_size", r.sample_size}};
    return j.dump(2);
}

std::string eval_table(const EvalReport& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "metric       value\n"
                  "recall       %.4f\n"
                  "precision    %.4f\n"
                  "f1           %.4f\n"
                  "test_size    %zu\n"
                  "sample_size  %zu\n",
                  r.recall.to_double(), r.precision.to_double(), r.f1.to_double(), r.test_size, r.sample_size);
    return buf;
}

} // namespace gramlearn
