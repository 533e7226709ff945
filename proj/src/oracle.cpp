#include "gramlearn/oracle.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace gramlearn {

CommandOracle::CommandOracle(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout)
{
    if (command_.empty())
        throw Error("oracle command is empty");
}

bool CommandOracle::evaluate(const std::string& input)
{
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path()
                          / ("gramlearn-" + std::to_string(::getpid()) + "-" + std::to_string(counter_.fetch_add(1)) + ".in");
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            return false;
        out.write(input.data(), static_cast<std::streamsize>(input.size()));
    }

    const std::string script = command_ + " \"$1\"";
    const pid_t pid = ::fork();
    if (pid < 0) {
        fs::remove(path);
        return false;
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        const std::string p = path.string();
        ::execl("/bin/sh", "sh", "-c", script.c_str(), "sh", p.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);

    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    int status = 0;
    bool finished = false;
    auto pause = std::chrono::microseconds(200);
    while (true) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            finished = true;
            break;
        }
        if (r < 0)
            break;
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            ++timeouts_;
            break;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::microseconds(20000));
    }
    std::error_code ec;
    fs::remove(path, ec);
    return finished && WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

GrammarOracle::GrammarOracle(Grammar golden) : golden_(std::move(golden)), recognizer_(golden_) {}

std::unique_ptr<Oracle> make_oracle(const OracleConfig& cfg)
{
    if (cfg.kind == OracleConfig::Kind::Command)
        return std::make_unique<CommandOracle>(cfg.command, cfg.timeout);
    return std::make_unique<GrammarOracle>(load_grammar(cfg.grammar_path));
}

OracleClient::OracleClient(std::unique_ptr<Oracle> oracle, std::optional<std::uint64_t> budget)
    : oracle_(std::move(oracle)), budget_(budget)
{
    if (!oracle_)
        throw Error("oracle client needs an oracle");
}

bool OracleClient::query(const std::string& input)
{
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(input); it != memo_.end()) {
            ++stats_.cache_hits;
            return it->second;
        }
        if (budget_ && stats_.total_queries + in_flight_ >= *budget_)
            throw OracleBudgetExhausted("oracle query budget of " + std::to_string(*budget_) + " exhausted");
        ++in_flight_;
    }
    // The external evaluation runs unlocked so concurrent callers can overlap.
    const auto t0 = std::chrono::steady_clock::now();
    const bool verdict = oracle_->evaluate(input);
    const auto elapsed = std::chrono::steady_clock::now() - t0;

    std::lock_guard lock(mutex_);
    --in_flight_;
    ++stats_.total_queries;
    stats_.wall_time += elapsed;
    stats_.timeouts = oracle_->timeouts();
    // First answer wins so a flaky oracle still looks pure within one run.
    return memo_.emplace(input, verdict).first->second;
}

bool OracleClient::cached(const std::string& input) const
{
    std::lock_guard lock(mutex_);
    return memo_.count(input) != 0;
}

OracleStats OracleClient::stats() const
{
    std::lock_guard lock(mutex_);
    return stats_;
}

} // namespace gramlearn
