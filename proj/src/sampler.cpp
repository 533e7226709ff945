#include "gramlearn/sampler.hpp"

#include <algorithm>
#include <limits>

namespace gramlearn {

namespace {
constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();
}

Sampler::Sampler(const Grammar& g) : grammar_(&g), by_lhs_(g.rules_by_lhs())
{
    for (const auto& [nt, _] : by_lhs_)
        min_depth_[nt] = kUnreachable;

    // Bellman-Ford style relaxation; converges in at most |N| rounds.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : g.rules()) {
            const std::size_t d = rule_depth(r);
            if (d < min_depth_[r.lhs]) {
                min_depth_[r.lhs] = d;
                changed = true;
            }
        }
    }
    for (const auto& [nt, d] : min_depth_) {
        if (d == kUnreachable)
            throw GrammarError("nonterminal '" + nt.text() + "' derives no finite string");
    }
}

std::size_t Sampler::rule_depth(const Rule& r) const
{
    std::size_t deepest = 0;
    for (const auto& s : r.rhs) {
        if (!s.is_nonterminal())
            continue;
        const std::size_t d = min_depth_.at(s);
        if (d == kUnreachable)
            return kUnreachable;
        deepest = std::max(deepest, d);
    }
    return deepest + 1;
}

std::string sample_class(TokenClass cls, Rng& rng)
{
    const auto alphabet = class_alphabet(cls);
    std::string out;
    do {
        out += alphabet[rng.uniform_index(alphabet.size())];
    } while (rng.chance(2, 3));
    return out;
}

void Sampler::expand(const Symbol& nt, std::size_t depth, std::size_t cutoff, Rng& rng, std::string& out,
                     std::set<const Rule*>* used) const
{
    const auto& options = by_lhs_.at(nt);
    const Rule* chosen = nullptr;
    if (depth < cutoff) {
        chosen = options[rng.uniform_index(options.size())];
    } else {
        std::vector<const Rule*> shallow;
        const std::size_t best = min_depth_.at(nt);
        for (const auto* r : options) {
            if (rule_depth(*r) == best)
                shallow.push_back(r);
        }
        chosen = shallow[rng.uniform_index(shallow.size())];
    }
    if (used)
        used->insert(chosen);
    for (const auto& s : chosen->rhs) {
        switch (s.kind()) {
        case Symbol::Kind::Terminal: out += s.text(); break;
        case Symbol::Kind::Class: out += sample_class(s.cls(), rng); break;
        case Symbol::Kind::Nonterminal: expand(s, depth + 1, cutoff, rng, out, used); break;
        }
    }
}

std::string Sampler::sample(Rng& rng, std::size_t depth_cutoff, std::set<const Rule*>* used) const
{
    std::string out;
    expand(grammar_->start(), 0, depth_cutoff, rng, out, used);
    return out;
}

std::string sample(const Grammar& g, std::uint64_t rng_seed, std::size_t depth_cutoff)
{
    Rng rng(rng_seed);
    return Sampler(g).sample(rng, depth_cutoff);
}

} // namespace gramlearn
