#pragma once

#include "gramlearn/grammar.hpp"
#include "gramlearn/random.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace gramlearn {

/// Random derivations from a grammar. Rules are chosen uniformly; once the
/// nesting depth passes the cutoff, only rules that realise the nonterminal's
/// minimal derivation depth are eligible, which bounds every derivation.
class Sampler
{
public:
    explicit Sampler(const Grammar& g);

    /// Minimal derivation depth per nonterminal (terminal-only rules have depth 1).
    const std::map<Symbol, std::size_t>& min_depths() const { return min_depth_; }

    std::string sample(Rng& rng, std::size_t depth_cutoff, std::set<const Rule*>* used = nullptr) const;

private:
    void expand(const Symbol& nt, std::size_t depth, std::size_t cutoff, Rng& rng, std::string& out,
                std::set<const Rule*>* used) const;
    std::size_t rule_depth(const Rule& r) const;

    const Grammar* grammar_;
    std::map<Symbol, std::vector<const Rule*>> by_lhs_;
    std::map<Symbol, std::size_t> min_depth_;
};

inline constexpr std::size_t kDefaultDepthCutoff = 6;

/// A string from the class with geometrically distributed length (mean 3, min 1).
std::string sample_class(TokenClass cls, Rng& rng);

std::string sample(const Grammar& g, std::uint64_t rng_seed, std::size_t depth_cutoff = kDefaultDepthCutoff);

} // namespace gramlearn
