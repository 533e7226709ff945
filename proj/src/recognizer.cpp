#include "gramlearn/recognizer.hpp"

#include <map>
#include <unordered_set>

namespace gramlearn {

namespace {

struct Item
{
    std::uint32_t rule;
    std::uint32_t dot;
    std::uint32_t origin;
};

std::uint64_t item_key(const Item& it)
{
    return (static_cast<std::uint64_t>(it.origin) << 32) | (static_cast<std::uint64_t>(it.rule) << 12) | it.dot;
}

} // namespace

std::uint32_t Recognizer::charset_for(const std::bitset<256>& set)
{
    for (std::size_t i = 0; i < charsets_.size(); ++i) {
        if (charsets_[i] == set)
            return static_cast<std::uint32_t>(i);
    }
    charsets_.push_back(set);
    return static_cast<std::uint32_t>(charsets_.size() - 1);
}

Recognizer::Recognizer(const Grammar& g)
{
    std::map<Symbol, std::uint32_t> index;
    for (const auto& nt : g.nonterminals())
        index.emplace(nt, static_cast<std::uint32_t>(index.size()));
    std::map<TokenClass, std::uint32_t> class_rules;

    auto class_nonterminal = [&](TokenClass cls) {
        if (auto it = class_rules.find(cls); it != class_rules.end())
            return it->second;
        const auto nt = static_cast<std::uint32_t>(index.size() + class_rules.size());
        class_rules.emplace(cls, nt);
        return nt;
    };

    for (const auto& r : g.rules()) {
        CRule cr{index.at(r.lhs), {}};
        for (const auto& s : r.rhs) {
            switch (s.kind()) {
            case Symbol::Kind::Nonterminal: cr.rhs.push_back({false, index.at(s)}); break;
            case Symbol::Kind::Class: cr.rhs.push_back({false, class_nonterminal(s.cls())}); break;
            case Symbol::Kind::Terminal:
                for (char c : s.text()) {
                    std::bitset<256> one;
                    one.set(static_cast<unsigned char>(c));
                    cr.rhs.push_back({true, charset_for(one)});
                }
                break;
            }
        }
        rules_.push_back(std::move(cr));
    }
    for (const auto& [cls, nt] : class_rules) {
        std::bitset<256> set;
        for (char c : class_alphabet(cls))
            set.set(static_cast<unsigned char>(c));
        const auto cs = charset_for(set);
        rules_.push_back({nt, {{true, cs}}});
        rules_.push_back({nt, {{true, cs}, {false, nt}}});
    }
    if (rules_.size() >= (1u << 20))
        throw GrammarError("grammar too large for the recognizer");
    for (const auto& r : rules_) {
        if (r.rhs.size() >= (1u << 12))
            throw GrammarError("rule too long for the recognizer");
    }

    rules_of_.resize(index.size() + class_rules.size());
    for (std::size_t i = 0; i < rules_.size(); ++i)
        rules_of_[rules_[i].lhs].push_back(static_cast<std::uint32_t>(i));
    start_ = index.at(g.start());
}

bool Recognizer::accepts(std::string_view input) const
{
    const std::size_t n = input.size();
    if (n == 0)
        return false;

    std::vector<std::vector<Item>> sets(n + 1);
    std::vector<std::unordered_set<std::uint64_t>> seen(n + 1);
    std::vector<char> predicted(rules_of_.size());

    auto add = [&](std::size_t at, Item it) {
        if (seen[at].insert(item_key(it)).second)
            sets[at].push_back(it);
    };

    for (auto r : rules_of_[start_])
        add(0, {r, 0, 0});

    for (std::size_t i = 0; i <= n; ++i) {
        std::fill(predicted.begin(), predicted.end(), 0);
        auto& set = sets[i];
        for (std::size_t k = 0; k < set.size(); ++k) {
            const Item it = set[k];
            const auto& rule = rules_[it.rule];
            if (it.dot == rule.rhs.size()) {
                // Complete: origin < i since there are no epsilon rules.
                const auto& parents = sets[it.origin];
                for (std::size_t p = 0; p < parents.size(); ++p) {
                    const Item& pi = parents[p];
                    const auto& prhs = rules_[pi.rule].rhs;
                    if (pi.dot < prhs.size() && !prhs[pi.dot].terminal && prhs[pi.dot].id == rule.lhs)
                        add(i, {pi.rule, pi.dot + 1, pi.origin});
                }
                continue;
            }
            const Sym next = rule.rhs[it.dot];
            if (next.terminal) {
                if (i < n && charsets_[next.id].test(static_cast<unsigned char>(input[i])))
                    add(i + 1, {it.rule, it.dot + 1, it.origin});
            } else if (!predicted[next.id]) {
                predicted[next.id] = 1;
                for (auto r : rules_of_[next.id])
                    add(i, {r, 0, static_cast<std::uint32_t>(i)});
            }
        }
        if (i < n && sets[i + 1].empty())
            return false;
        seen[i].clear();
    }

    for (const auto& it : sets[n]) {
        if (it.origin == 0 && rules_[it.rule].lhs == start_ && it.dot == rules_[it.rule].rhs.size())
            return true;
    }
    return false;
}

bool membership(const Grammar& g, std::string_view input)
{
    return Recognizer(g).accepts(input);
}

} // namespace gramlearn
