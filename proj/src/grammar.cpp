#include "gramlearn/grammar.hpp"

#include <algorithm>
#include <functional>

namespace gramlearn {

Grammar::Grammar(Symbol start, std::vector<Rule> rules)
    : start_(std::move(start)), rules_(std::move(rules))
{
    if (!start_.is_nonterminal())
        throw GrammarError("start symbol must be a nonterminal");
    std::sort(rules_.begin(), rules_.end());
    rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());

    std::set<Symbol> defined;
    for (const auto& r : rules_) {
        if (!r.lhs.is_nonterminal())
            throw GrammarError("rule lhs must be a nonterminal");
        if (r.rhs.empty())
            throw GrammarError("empty right-hand side for '" + r.lhs.text() + "'");
        defined.insert(r.lhs);
    }
    if (!defined.count(start_))
        throw GrammarError("start symbol '" + start_.text() + "' has no rules");
    for (const auto& r : rules_) {
        for (const auto& s : r.rhs) {
            if (s.is_nonterminal() && !defined.count(s))
                throw GrammarError("undefined nonterminal '" + s.text() + "' in rule for '" + r.lhs.text() + "'");
        }
    }
}

std::set<Symbol> Grammar::nonterminals() const
{
    std::set<Symbol> out;
    for (const auto& r : rules_)
        out.insert(r.lhs);
    return out;
}

std::map<Symbol, std::vector<const Rule*>> Grammar::rules_by_lhs() const
{
    std::map<Symbol, std::vector<const Rule*>> out;
    for (const auto& r : rules_)
        out[r.lhs].push_back(&r);
    return out;
}

Grammar induced_grammar(const TreeSet& ts)
{
    std::set<Rule> rules;
    std::function<void(const Node&)> walk = [&](const Node& n) {
        if (n.is_leaf())
            return;
        Rule r{n.label(), {}};
        r.rhs.reserve(n.children().size());
        for (const auto& c : n.children()) {
            r.rhs.push_back(c->label());
            walk(*c);
        }
        rules.insert(std::move(r));
    };
    for (const auto& t : ts.trees) {
        if (t->label() != ts.start)
            throw GrammarError("tree root '" + t->label().text() + "' is not the start label");
        walk(*t);
    }
    return Grammar(ts.start, std::vector<Rule>(rules.begin(), rules.end()));
}

} // namespace gramlearn
