#include "gramlearn/audit.hpp"
#include "gramlearn/eval.hpp"
#include "gramlearn/grammar.hpp"
#include "gramlearn/learner.hpp"
#include "gramlearn/oracle.hpp"
#include "gramlearn/recognizer.hpp"
#include "gramlearn/sampler.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace gramlearn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitNotMember = 3;

std::string read_file(const fs::path& p, bool keep_trailing_newline)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    if (!keep_trailing_newline && !s.empty() && s.back() == '\n') {
        s.pop_back();
        if (!s.empty() && s.back() == '\r')
            s.pop_back();
    }
    return s;
}

/// Regular files of a directory in name order, one example each.
std::vector<std::string> read_examples(const fs::path& dir, bool keep_trailing_newline)
{
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file())
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> out;
    out.reserve(files.size());
    for (const auto& f : files)
        out.push_back(read_file(f, keep_trailing_newline));
    return out;
}

/// A directory of example files, or a file with one string per line.
std::vector<std::string> read_test_set(const fs::path& p, bool keep_trailing_newline)
{
    if (fs::is_directory(p))
        return read_examples(p, keep_trailing_newline);
    std::ifstream in(p);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

std::string escape_line(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
}

struct OracleFlags
{
    std::string command;
    std::string golden;
    double timeout_s = 10.0;
    std::optional<std::uint64_t> budget;

    OracleConfig config() const
    {
        OracleConfig cfg;
        if (!command.empty()) {
            cfg.kind = OracleConfig::Kind::Command;
            cfg.command = command;
        } else {
            cfg.kind = OracleConfig::Kind::GoldenGrammar;
            cfg.grammar_path = golden;
        }
        cfg.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_s * 1000));
        cfg.budget = budget;
        return cfg;
    }
};

void add_oracle_flags(CLI::App* cmd, OracleFlags& f)
{
    auto* oracle = cmd->add_option("--oracle", f.command, "Shell command judging a candidate file; exit 0 means valid");
    auto* golden = cmd->add_option("--golden", f.golden, "Golden grammar used as the oracle")
                       ->check(CLI::ExistingFile);
    oracle->excludes(golden);
    cmd->add_option("--oracle-timeout", f.timeout_s, "Seconds before an oracle call counts as invalid")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Learn context-free grammars from examples and a membership oracle"};
    app.require_subcommand(1);

    // learn
    auto* learn_cmd = app.add_subcommand("learn", "Learn a grammar from an examples directory");
    std::string examples_dir;
    std::string out_path;
    std::string report_path;
    std::string audit_path;
    std::string bubbles_path;
    std::string trees_path;
    std::string preset;
    std::uint64_t seed = 0;
    bool char_level = false;
    bool keep_newline = false;
    std::uint64_t budget = 0;
    OracleFlags learn_oracle;
    LearnerConfig cfg;
    learn_cmd->add_option("--examples", examples_dir, "Directory with one example per file")
        ->required()
        ->check(CLI::ExistingDirectory);
    add_oracle_flags(learn_cmd, learn_oracle);
    learn_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    learn_cmd->add_option("--top-n", cfg.scoring.top_n, "Bubbles kept per round")->capture_default_str();
    learn_cmd->add_option("--sample-p", cfg.sampling.p, "Replacee and replacer strings sampled per check")
        ->capture_default_str();
    learn_cmd->add_option("--context-k", cfg.scoring.context_k, "Context width")->capture_default_str();
    auto* mls = learn_cmd->add_option("--max-len-start", cfg.scoring.max_len_start, "Shortest bubble length bound")
                    ->capture_default_str();
    auto* mle = learn_cmd->add_option("--max-len-end", cfg.scoring.max_len_end, "Longest bubble length bound")
                    ->capture_default_str();
    learn_cmd->add_option("--preset", preset, "Parameter preset")->check(CLI::IsMember({"large"}));
    learn_cmd->add_flag("--char-level", char_level, "One leaf per character; no token expansion");
    learn_cmd->add_flag("--strict-holes", cfg.sampling.strict_holes, "Fill each hole with its own replacer string");
    learn_cmd->add_option("--token-expand-samples", cfg.token_expand_samples, "Class strings tried per expansion")
        ->capture_default_str();
    auto* budget_opt = learn_cmd->add_option("--query-budget", budget, "Maximum distinct oracle queries");
    learn_cmd->add_option("--audit-log", audit_path, "Write the merge audit log here");
    learn_cmd->add_option("--dump-bubbles", bubbles_path, "Write every scored bubble list here");
    learn_cmd->add_option("--dump-trees", trees_path, "Write the final trees here");
    learn_cmd->add_flag("--keep-trailing-newline", keep_newline, "Keep a final newline in example files");
    learn_cmd->add_option("-o,--out", out_path, "Grammar output file")->required();
    learn_cmd->add_option("--report", report_path, "JSON run report output file");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Print random strings of a grammar");
    std::string sample_grammar;
    std::size_t sample_n = 10;
    std::uint64_t sample_seed = 0;
    sample_cmd->add_option("grammar", sample_grammar, "Grammar file")->required()->check(CLI::ExistingFile);
    sample_cmd->add_option("-n", sample_n, "Number of strings")->capture_default_str();
    sample_cmd->add_option("--seed", sample_seed, "First seed; string i uses seed + i")->capture_default_str();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Recall, precision and F1 of a mined grammar");
    std::string eval_grammar;
    std::string test_path;
    std::size_t test_n = 1000;
    std::size_t eval_samples = 1000;
    std::uint64_t eval_seed = 0;
    bool eval_keep_newline = false;
    OracleFlags eval_oracle;
    eval_cmd->add_option("grammar", eval_grammar, "Mined grammar file")->required()->check(CLI::ExistingFile);
    add_oracle_flags(eval_cmd, eval_oracle);
    auto* test_opt = eval_cmd->add_option("--test", test_path, "Test directory, or file with one string per line")
                         ->check(CLI::ExistingPath);
    auto* test_n_opt = eval_cmd->add_option("--test-n", test_n, "Test strings sampled from --golden")
                           ->capture_default_str();
    test_opt->excludes(test_n_opt);
    eval_cmd->add_option("--samples", eval_samples, "Strings sampled from the mined grammar")->capture_default_str();
    eval_cmd->add_option("--seed", eval_seed, "Random seed")->capture_default_str();
    eval_cmd->add_flag("--keep-trailing-newline", eval_keep_newline, "Keep a final newline in test files");

    // parse
    auto* parse_cmd = app.add_subcommand("parse", "Exit 0 iff the input is in the grammar's language");
    std::string parse_grammar;
    std::string parse_input;
    bool parse_keep_newline = false;
    parse_cmd->add_option("grammar", parse_grammar, "Grammar file")->required()->check(CLI::ExistingFile);
    parse_cmd->add_option("input", parse_input, "Input file")->required()->check(CLI::ExistingFile);
    parse_cmd->add_flag("--keep-trailing-newline", parse_keep_newline, "Keep a final newline in the input");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*learn_cmd) {
            if (learn_oracle.command.empty() && learn_oracle.golden.empty())
                throw Error("learn needs --oracle or --golden");
            if (preset == "large") {
                if (!*mls)
                    cfg.scoring.max_len_start = 6;
                if (!*mle)
                    cfg.scoring.max_len_end = 20;
            }
            if (*budget_opt)
                learn_oracle.budget = budget;
            cfg.pretokenize = !char_level;
            cfg.rng_seed = seed;
            cfg.validate();

            const auto examples = read_examples(examples_dir, keep_newline);
            OracleClient oracle(make_oracle(learn_oracle.config()), learn_oracle.budget);
            AuditLog audit;
            std::ofstream bubble_log;
            LearnHooks hooks;
            if (!audit_path.empty())
                hooks.audit = &audit;
            if (!bubbles_path.empty()) {
                bubble_log.open(bubbles_path);
                if (!bubble_log)
                    throw Error("cannot write " + bubbles_path);
                hooks.bubble_log = &bubble_log;
            }

            const RunReport report = learn(examples, oracle, cfg, hooks);
            save_grammar(report.grammar, out_path);
            if (!report_path.empty())
                write_text(report_path, report_json(report) + "\n");
            if (!audit_path.empty())
                audit.write(audit_path);
            if (!trees_path.empty())
                write_text(trees_path, dump_trees(report.trees));
            if (report.status == "budget_exhausted") {
                std::cerr << "oracle query budget exhausted; wrote the partial grammar to " << out_path << "\n";
                return kExitBudget;
            }
            return kExitOk;
        }
        if (*sample_cmd) {
            const Grammar g = load_grammar(sample_grammar);
            const Sampler sampler(g);
            for (std::size_t i = 0; i < sample_n; ++i) {
                Rng rng(sample_seed + i);
                std::cout << escape_line(sampler.sample(rng, kDefaultDepthCutoff)) << '\n';
            }
            return kExitOk;
        }
        if (*eval_cmd) {
            if (eval_oracle.command.empty() && eval_oracle.golden.empty())
                throw Error("eval needs --oracle or --golden");
            const Grammar mined = load_grammar(eval_grammar);
            std::vector<std::string> test_set;
            if (!test_path.empty()) {
                test_set = read_test_set(test_path, eval_keep_newline);
            } else {
                if (eval_oracle.golden.empty())
                    throw Error("--test-n needs --golden; use --test with --oracle");
                test_set = generate_test_set(load_grammar(eval_oracle.golden), test_n, eval_seed);
            }
            OracleClient oracle(make_oracle(eval_oracle.config()));
            const EvalReport r = evaluate(mined, test_set, oracle, eval_samples, eval_seed);
            std::cerr << eval_table(r);
            std::cout << eval_json(r) << '\n';
            return kExitOk;
        }
        if (*parse_cmd) {
            const Grammar g = load_grammar(parse_grammar);
            const bool member = membership(g, read_file(parse_input, parse_keep_newline));
            return member ? kExitOk : kExitNotMember;
        }
    } catch (const OracleBudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
