#include "gramlearn/grammar.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace gramlearn {

std::string serialize(const Grammar& g)
{
    std::string out = "start: " + g.start().text() + "\n";
    for (const auto& r : g.rules()) {
        out += r.lhs.text();
        out += " ->";
        for (const auto& s : r.rhs) {
            out += ' ';
            out += s.to_string();
        }
        out += '\n';
    }
    return out;
}

namespace {

class LineParser
{
public:
    LineParser(std::string_view line, std::size_t lineno) : line_(line), lineno_(lineno) {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw GrammarError("line " + std::to_string(lineno_) + ": " + what);
    }

    void skip_space()
    {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
        if (pos_ < line_.size() && line_[pos_] == '#')
            pos_ = line_.size();
    }

    bool done()
    {
        skip_space();
        return pos_ >= line_.size();
    }

    bool consume(std::string_view lit)
    {
        skip_space();
        if (line_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    std::string identifier()
    {
        skip_space();
        std::size_t begin = pos_;
        while (pos_ < line_.size()
               && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_'))
            ++pos_;
        std::string id(line_.substr(begin, pos_ - begin));
        if (!is_valid_label(id))
            fail("expected a nonterminal label");
        return id;
    }

    Symbol symbol()
    {
        skip_space();
        const char c = line_[pos_];
        if (c == '"')
            return Symbol::terminal(quoted());
        if (c == '<') {
            const auto close = line_.find('>', pos_);
            if (close == std::string_view::npos)
                fail("unterminated token class");
            auto name = line_.substr(pos_ + 1, close - pos_ - 1);
            auto cls = class_from_name(name);
            if (!cls)
                fail("unknown token class <" + std::string(name) + ">");
            pos_ = close + 1;
            return Symbol::token_class(*cls);
        }
        return Symbol::nonterminal(identifier());
    }

private:
    static int hex_value(char c)
    {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    }

    std::string quoted()
    {
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= line_.size())
                fail("unterminated string literal");
            char c = line_[pos_++];
            if (c == '"')
                break;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= line_.size())
                fail("dangling escape");
            char e = line_[pos_++];
            switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'x': {
                if (pos_ + 2 > line_.size())
                    fail("malformed \\x escape");
                int hi = hex_value(line_[pos_]);
                int lo = hex_value(line_[pos_ + 1]);
                if (hi < 0 || lo < 0)
                    fail("malformed \\x escape");
                out += static_cast<char>(hi * 16 + lo);
                pos_ += 2;
                break;
            }
            default: fail(std::string("unknown escape \\") + e);
            }
        }
        if (out.empty())
            fail("empty terminal");
        return out;
    }

    std::string_view line_;
    std::size_t lineno_;
    std::size_t pos_ = 0;
};

} // namespace

Grammar deserialize(std::string_view text)
{
    std::optional<Symbol> start;
    std::vector<Rule> rules;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos = eol + 1;
        ++lineno;

        LineParser p(line, lineno);
        if (p.done())
            continue;
        if (p.consume("start:")) {
            if (start)
                p.fail("duplicate start declaration");
            start = Symbol::nonterminal(p.identifier());
            if (!p.done())
                p.fail("trailing text after start declaration");
            continue;
        }
        Rule r{Symbol::nonterminal(p.identifier()), {}};
        if (!p.consume("->"))
            p.fail("expected '->'");
        while (!p.done())
            r.rhs.push_back(p.symbol());
        if (r.rhs.empty())
            p.fail("empty right-hand side");
        rules.push_back(std::move(r));
    }
    if (!start)
        throw GrammarError("missing start declaration");
    return Grammar(*start, std::move(rules));
}

Grammar load_grammar(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw GrammarError("cannot open grammar file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

void save_grammar(const Grammar& g, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write grammar file '" + path + "'");
    out << serialize(g);
}

} // namespace gramlearn
