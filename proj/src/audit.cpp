#include "gramlearn/audit.hpp"
#include "gramlearn/symbol.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gramlearn {

std::size_t CheckRecord::rejected() const
{
    std::size_t n = 0;
    for (const auto& c : candidates)
        n += c.accepted ? 0 : 1;
    return n;
}

std::uint64_t AuditLog::begin_check(std::string kind, std::string replacer, std::string replacee, int level)
{
    CheckRecord r;
    r.id = checks_.size();
    r.kind = std::move(kind);
    r.replacer = std::move(replacer);
    r.replacee = std::move(replacee);
    r.level = level;
    checks_.push_back(std::move(r));
    return checks_.back().id;
}

void AuditLog::record_candidate(std::uint64_t check, std::string text, bool accepted)
{
    checks_.at(check).candidates.push_back({std::move(text), accepted});
}

void AuditLog::end_check(std::uint64_t check, bool passed)
{
    checks_.at(check).passed = passed;
}

void AuditLog::record_merge(std::string a, std::string b, std::string into, std::vector<std::uint64_t> checks)
{
    merges_.push_back({std::move(a), std::move(b), std::move(into), std::move(checks)});
}

std::size_t AuditLog::distinct_candidates() const
{
    std::set<std::string> seen;
    for (const auto& c : checks_) {
        for (const auto& cand : c.candidates)
            seen.insert(cand.text);
    }
    return seen.size();
}

void AuditLog::write(std::ostream& os) const
{
    for (const auto& c : checks_) {
        os << "check\t" << c.id << '\t' << c.kind << '\t' << c.replacer << '\t' << c.replacee << '\t' << c.level
           << '\t' << c.candidates.size() << '\t' << c.rejected() << '\t' << (c.passed ? "pass" : "fail") << '\n';
        for (const auto& cand : c.candidates)
            os << "cand\t" << c.id << '\t' << (cand.accepted ? "accept" : "reject") << '\t'
               << quote_terminal(cand.text) << '\n';
    }
    for (const auto& m : merges_) {
        os << "merge\t" << m.a << '\t' << m.b << '\t' << m.into << '\t';
        for (std::size_t i = 0; i < m.checks.size(); ++i)
            os << (i ? "," : "") << m.checks[i];
        os << '\n';
    }
}

void AuditLog::write(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write audit log '" + path + "'");
    write(out);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        out.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
        if (tab == std::string::npos)
            break;
        pos = tab + 1;
    }
    return out;
}

std::string unquote(const std::string& q)
{
    if (q.size() < 2 || q.front() != '"' || q.back() != '"')
        throw Error("audit log: malformed candidate " + q);
    std::string out;
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        if (q[i] != '\\') {
            out += q[i];
            continue;
        }
        char e = q[++i];
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'x':
            out += static_cast<char>(std::stoi(q.substr(i + 1, 2), nullptr, 16));
            i += 2;
            break;
        default: out += e;
        }
    }
    return out;
}

} // namespace

AuditLog AuditLog::read(std::istream& is)
{
    AuditLog log;
    std::map<std::uint64_t, std::size_t> index;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        auto f = split_tabs(line);
        if (f[0] == "check" && f.size() == 9) {
            CheckRecord r;
            r.id = std::stoull(f[1]);
            r.kind = f[2];
            r.replacer = f[3];
            r.replacee = f[4];
            r.level = std::stoi(f[5]);
            r.passed = f[8] == "pass";
            index[r.id] = log.checks_.size();
            log.checks_.push_back(std::move(r));
        } else if (f[0] == "cand" && f.size() == 4) {
            log.checks_.at(index.at(std::stoull(f[1]))).candidates.push_back({unquote(f[3]), f[2] == "accept"});
        } else if (f[0] == "merge" && f.size() == 5) {
            MergeRecord m{f[1], f[2], f[3], {}};
            std::stringstream ids(f[4]);
            std::string id;
            while (std::getline(ids, id, ','))
                m.checks.push_back(std::stoull(id));
            log.merges_.push_back(std::move(m));
        } else {
            throw Error("audit log: malformed line: " + line);
        }
    }
    return log;
}

bool merges_are_sound(const AuditLog& log)
{
    std::map<std::uint64_t, const CheckRecord*> by_id;
    for (const auto& c : log.checks())
        by_id[c.id] = &c;
    for (const auto& m : log.merges()) {
        for (auto id : m.checks) {
            auto it = by_id.find(id);
            if (it == by_id.end() || !it->second->passed || it->second->rejected() != 0)
                return false;
        }
    }
    return true;
}

} // namespace gramlearn
