#pragma once

#include "gramlearn/symbol.hpp"
#include "gramlearn/tree.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gramlearn {

class GrammarError : public Error
{
public:
    using Error::Error;
};

struct Rule
{
    Symbol lhs;
    std::vector<Symbol> rhs;

    friend bool operator==(const Rule&, const Rule&) = default;
    friend auto operator<=>(const Rule&, const Rule&) = default;
};

/// A context-free grammar without epsilon rules. Rules are kept sorted and
/// deduplicated; construction validates the invariants.
class Grammar
{
public:
    Grammar(Symbol start, std::vector<Rule> rules);

    const Symbol& start() const { return start_; }
    const std::vector<Rule>& rules() const { return rules_; }

    /// Nonterminals that appear as some rule's lhs, sorted.
    std::set<Symbol> nonterminals() const;

    /// Rules grouped by lhs, in canonical order.
    std::map<Symbol, std::vector<const Rule*>> rules_by_lhs() const;

    friend bool operator==(const Grammar&, const Grammar&) = default;

private:
    Symbol start_;
    std::vector<Rule> rules_;
};

/// One rule per distinct (parent label, child labels) pair across all trees.
Grammar induced_grammar(const TreeSet& ts);

/// Grammar file text: "start: <label>" followed by the sorted rules.
std::string serialize(const Grammar& g);
Grammar deserialize(std::string_view text);

Grammar load_grammar(const std::string& path);
void save_grammar(const Grammar& g, const std::string& path);

} // namespace gramlearn
