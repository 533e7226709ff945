#include "gramlearn/symbol.hpp"

#include <array>
#include <cctype>

namespace gramlearn {

namespace {

constexpr std::array<std::string_view, 6> kClassNames = {
    "LOWER", "UPPER", "LETTERS", "DIGITS", "ALNUM", "WHITESPACE"};

constexpr std::string_view kLower = "abcdefghijklmnopqrstuvwxyz";
constexpr std::string_view kUpper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr std::string_view kLetters =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
constexpr std::string_view kDigits = "0123456789";
constexpr std::string_view kAlnum =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
constexpr std::string_view kWhitespace = "\t\n\v\f\r ";

} // namespace

std::string_view class_name(TokenClass cls)
{
    return kClassNames[static_cast<std::size_t>(cls)];
}

std::optional<TokenClass> class_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (kClassNames[i] == name)
            return static_cast<TokenClass>(i);
    }
    return std::nullopt;
}

bool class_contains(TokenClass cls, unsigned char c)
{
    switch (cls) {
    case TokenClass::Lower: return c >= 'a' && c <= 'z';
    case TokenClass::Upper: return c >= 'A' && c <= 'Z';
    case TokenClass::Letters: return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    case TokenClass::Digits: return c >= '0' && c <= '9';
    case TokenClass::Alnum:
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    case TokenClass::Whitespace:
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }
    return false;
}

std::string_view class_alphabet(TokenClass cls)
{
    switch (cls) {
    case TokenClass::Lower: return kLower;
    case TokenClass::Upper: return kUpper;
    case TokenClass::Letters: return kLetters;
    case TokenClass::Digits: return kDigits;
    case TokenClass::Alnum: return kAlnum;
    case TokenClass::Whitespace: return kWhitespace;
    }
    return {};
}

bool class_matches(TokenClass cls, std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s) {
        if (!class_contains(cls, static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

bool is_valid_label(std::string_view label)
{
    if (label.empty())
        return false;
    auto head = static_cast<unsigned char>(label.front());
    if (!(std::isalpha(head) || head == '_'))
        return false;
    for (char c : label) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || u == '_'))
            return false;
    }
    return true;
}

Symbol Symbol::terminal(std::string token)
{
    if (token.empty())
        throw Error("terminal token must be non-empty");
    return Symbol(Kind::Terminal, std::move(token), TokenClass::Lower);
}

Symbol Symbol::token_class(TokenClass cls)
{
    return Symbol(Kind::Class, {}, cls);
}

Symbol Symbol::nonterminal(std::string label)
{
    if (!is_valid_label(label))
        throw Error("invalid nonterminal label '" + label + "'");
    return Symbol(Kind::Nonterminal, std::move(label), TokenClass::Lower);
}

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b)
{
    if (auto c = a.kind_ <=> b.kind_; c != 0)
        return c;
    if (a.kind_ == Symbol::Kind::Class)
        return a.cls_ <=> b.cls_;
    return a.text_.compare(b.text_) <=> 0;
}

std::string Symbol::to_string() const
{
    switch (kind_) {
    case Kind::Terminal: return quote_terminal(text_);
    case Kind::Class: return "<" + std::string(class_name(cls_)) + ">";
    case Kind::Nonterminal: return text_;
    }
    return {};
}

std::string quote_terminal(std::string_view token)
{
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out = "\"";
    for (char ch : token) {
        auto c = static_cast<unsigned char>(ch);
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20 || c == 0x7f) {
                out += "\\x";
                out += kHex[c >> 4];
                out += kHex[c & 0xf];
            } else {
                out += ch;
            }
        }
    }
    out += '"';
    return out;
}

} // namespace gramlearn
