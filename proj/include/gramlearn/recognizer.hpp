#pragma once

#include "gramlearn/grammar.hpp"

#include <bitset>
#include <string_view>
#include <vector>

namespace gramlearn {

/// Earley recognizer over characters. Terminal tokens are split into
/// characters and each token class becomes a right-recursive run rule
/// (`__cls_X -> [X] | [X] __cls_X`) at compile time, so one chart routine
/// handles every symbol kind.
class Recognizer
{
public:
    explicit Recognizer(const Grammar& g);

    bool accepts(std::string_view input) const;

private:
    struct Sym
    {
        bool terminal;
        std::uint32_t id; // nonterminal index or charset index
    };
    struct CRule
    {
        std::uint32_t lhs;
        std::vector<Sym> rhs;
    };

    std::uint32_t charset_for(const std::bitset<256>& set);

    std::vector<CRule> rules_;
    std::vector<std::vector<std::uint32_t>> rules_of_;
    std::vector<std::bitset<256>> charsets_;
    std::uint32_t start_ = 0;
};

/// True iff `input` is in L(g).
bool membership(const Grammar& g, std::string_view input);

} // namespace gramlearn
