#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gramlearn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class TokenClass { Lower, Upper, Letters, Digits, Alnum, Whitespace };

/// Name used in the grammar file format, e.g. "DIGITS".
std::string_view class_name(TokenClass cls);
std::optional<TokenClass> class_from_name(std::string_view name);

bool class_contains(TokenClass cls, unsigned char c);

/// The characters of a class in ascending byte order.
std::string_view class_alphabet(TokenClass cls);

/// True iff `s` is non-empty and every character belongs to `cls`.
bool class_matches(TokenClass cls, std::string_view s);

/// Labels must look like C identifiers.
bool is_valid_label(std::string_view label);

/// A grammar symbol: a literal terminal token, a character class run, or a
/// nonterminal label.
class Symbol
{
public:
    enum class Kind { Terminal, Class, Nonterminal };

    static Symbol terminal(std::string token);
    static Symbol token_class(TokenClass cls);
    static Symbol nonterminal(std::string label);

    Kind kind() const { return kind_; }
    bool is_terminal() const { return kind_ == Kind::Terminal; }
    bool is_class() const { return kind_ == Kind::Class; }
    bool is_nonterminal() const { return kind_ == Kind::Nonterminal; }

    /// Token text for terminals, label for nonterminals, empty for classes.
    const std::string& text() const { return text_; }
    TokenClass cls() const { return cls_; }

    /// Human-readable form; also the grammar-file spelling.
    std::string to_string() const;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b);

private:
    Symbol(Kind kind, std::string text, TokenClass cls)
        : kind_(kind), text_(std::move(text)), cls_(cls)
    {
    }

    Kind kind_;
    std::string text_;
    TokenClass cls_;
};

struct SymbolHash
{
    std::size_t operator()(const Symbol& s) const noexcept
    {
        std::size_t h = std::hash<std::string>{}(s.text());
        return h * 31 + static_cast<std::size_t>(s.kind()) * 7 + static_cast<std::size_t>(s.cls());
    }
};

/// Quote a terminal token using the grammar-file escapes.
std::string quote_terminal(std::string_view token);

} // namespace gramlearn
