#include "gramlearn/learner.hpp"

#include "gramlearn/sampler.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>

namespace gramlearn {

void LearnerConfig::validate() const
{
    scoring.validate();
    sampling.validate();
    if (token_expand_samples < 1)
        throw Error("token_expand_samples must be at least 1");
}

namespace {

using Clock = std::chrono::steady_clock;

enum class RunClass { Lower, Upper, Space, Digit, Other };

RunClass run_class(unsigned char c)
{
    if (c >= 'a' && c <= 'z')
        return RunClass::Lower;
    if (c >= 'A' && c <= 'Z')
        return RunClass::Upper;
    if (c >= '0' && c <= '9')
        return RunClass::Digit;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v')
        return RunClass::Space;
    return RunClass::Other;
}

} // namespace

std::vector<std::string> pretokenize(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const RunClass cls = run_class(static_cast<unsigned char>(s[i]));
        std::size_t j = i + 1;
        if (cls != RunClass::Other) {
            while (j < s.size() && run_class(static_cast<unsigned char>(s[j])) == cls)
                ++j;
        }
        out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

AcceptResult accept_bubble(const TreeSet& original, const BubbledTrees& bubbled, const LearnerConfig& cfg,
                           MergeContext& ctx)
{
    const TreeSet& bt = bubbled.trees;
    if (bubbled.label2) {
        const int level = cfg.sampling.level1_for_2bubbles ? 1 : 0;
        Verdict v = merges(bt, bubbled.label1, *bubbled.label2, ctx, level);
        if (!v)
            return {false, original, {}};
        auto m = merge_labels(bt, bubbled.label1, *bubbled.label2);
        if (ctx.audit)
            ctx.audit->record_merge(bubbled.label1.text(), bubbled.label2->text(), m.into.text(), v.checks);
        return {true, std::move(m.trees), m.into.text()};
    }

    const Symbol& ts1 = bubbled.label1;
    const auto contexts = label_contexts(bt, cfg.scoring.context_k);
    const auto& own = contexts.at(ts1);
    std::vector<std::pair<Rational, Symbol>> order;
    for (const auto& label : nonterminal_labels(bt)) {
        if (label != ts1)
            order.emplace_back(set_context_sim(own, contexts.at(label)), label);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    for (const auto& [sim, label] : order) {
        Verdict v = merges(bt, label, ts1, ctx);
        if (!v)
            continue;
        auto m = merge_labels(bt, label, ts1);
        if (ctx.audit)
            ctx.audit->record_merge(label.text(), ts1.text(), m.into.text(), v.checks);
        return {true, std::move(m.trees), m.into.text()};
    }
    for (const auto& [sim, label] : order) {
        if (!is_character_nonterminal(bt, label))
            continue;
        if (auto merged = partial_merge(bt, ts1, label, ctx))
            return {true, std::move(*merged), ts1 == bt.start ? ts1.text() : "partial:" + label.text()};
    }
    return {false, original, {}};
}

namespace {

std::vector<TokenClass> class_ladder(TokenClass base)
{
    switch (base) {
    case TokenClass::Lower:
        return {TokenClass::Lower, TokenClass::Letters, TokenClass::Alnum};
    case TokenClass::Upper:
        return {TokenClass::Upper, TokenClass::Letters, TokenClass::Alnum};
    case TokenClass::Digits:
        return {TokenClass::Digits, TokenClass::Alnum};
    case TokenClass::Whitespace:
        return {TokenClass::Whitespace};
    default:
        return {};
    }
}

bool is_token_node(const Node& n)
{
    return n.children().size() == 1 && n.children()[0]->is_leaf() && n.children()[0]->label().is_terminal();
}

/// The run class shared by every single-token expansion of `label`, if it
/// has any and they agree.
std::optional<TokenClass> uniform_class(const TreeSet& ts, const Symbol& label)
{
    std::optional<TokenClass> cls;
    bool ok = true;
    std::function<void(const Node&)> visit = [&](const Node& n) {
        if (n.is_leaf() || !ok)
            return;
        if (n.label() == label && is_token_node(n)) {
            const std::string& text = n.children()[0]->yield();
            std::optional<TokenClass> here;
            for (auto c : {TokenClass::Lower, TokenClass::Upper, TokenClass::Digits, TokenClass::Whitespace}) {
                if (class_matches(c, text))
                    here = c;
            }
            if (!here || (cls && *cls != *here))
                ok = false;
            cls = here;
            return;
        }
        for (const auto& c : n.children())
            visit(*c);
    };
    for (const auto& t : ts.trees)
        visit(*t);
    if (!ok)
        return std::nullopt;
    return cls;
}

NodePtr widen(const NodePtr& node, const Symbol& label, TokenClass cls)
{
    if (node->is_leaf())
        return node;
    if (node->label() == label && is_token_node(*node))
        return Node::internal(label, {Node::leaf(Symbol::token_class(cls), node->children()[0]->yield())});
    std::vector<NodePtr> kids;
    kids.reserve(node->children().size());
    bool changed = false;
    for (const auto& c : node->children()) {
        kids.push_back(widen(c, label, cls));
        changed = changed || kids.back() != c;
    }
    return changed ? Node::internal(node->label(), std::move(kids)) : node;
}

} // namespace

TreeSet expand_tokens(const TreeSet& ts, const LearnerConfig& cfg, MergeContext& ctx)
{
    TreeSet current = ts;
    for (const auto& label : nonterminal_labels(ts)) {
        const auto base = uniform_class(current, label);
        if (!base)
            continue;
        std::optional<TokenClass> widest;
        std::vector<std::uint64_t> checks;
        for (TokenClass cls : class_ladder(*base)) {
            const auto t0 = Clock::now();
            std::vector<std::string> fillers;
            for (std::size_t i = 0; i < cfg.token_expand_samples; ++i)
                fillers.push_back(sample_class(cls, ctx.rng));
            ctx.sampling_time += Clock::now() - t0;
            Verdict v = check_candidates(current, label, fillers, "expand", "<" + std::string(class_name(cls)) + ">",
                                         0, ctx);
            if (!v)
                break;
            widest = cls;
            checks.insert(checks.end(), v.checks.begin(), v.checks.end());
        }
        if (!widest)
            continue;
        TreeSet next = current;
        for (auto& t : next.trees)
            t = widen(t, label, *widest);
        if (ctx.audit) {
            ctx.audit->record_merge(label.text(), "<" + std::string(class_name(*widest)) + ">", label.text(),
                                    checks);
        }
        current = std::move(next);
    }
    return current;
}

namespace {

/// Rename fresh labels to t1, t2, ... in order of first appearance.
TreeSet renumber(const TreeSet& ts)
{
    std::map<Symbol, Symbol> mapping;
    std::size_t next = 1;
    std::function<void(const Node&)> visit = [&](const Node& n) {
        if (n.is_leaf())
            return;
        const std::string& text = n.label().text();
        const bool fresh = n.label() != ts.start && text.size() > 1 && text[0] == 't' &&
                           std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; });
        if (fresh && !mapping.count(n.label()))
            mapping.emplace(n.label(), Symbol::nonterminal("t" + std::to_string(next++)));
        for (const auto& c : n.children())
            visit(*c);
    };
    for (const auto& t : ts.trees)
        visit(*t);
    return relabel(ts, mapping);
}

} // namespace

RunReport learn(const std::vector<std::string>& examples, OracleClient& oracle, const LearnerConfig& cfg,
                const LearnHooks& hooks)
{
    cfg.validate();
    if (examples.empty())
        throw Error("no examples given");
    const auto start_time = Clock::now();
    const auto oracle_before = oracle.stats();

    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (examples[i].empty())
            throw Error("example " + std::to_string(i) + " is empty");
    }
    for (std::size_t i = 0; i < examples.size(); ++i) {
        std::uint64_t id = 0;
        if (hooks.audit)
            id = hooks.audit->begin_check("example", "-", "-", 0);
        const bool ok = oracle.query(examples[i]);
        if (hooks.audit) {
            hooks.audit->record_candidate(id, examples[i], ok);
            hooks.audit->end_check(id, ok);
        }
        if (!ok)
            throw Error("example " + std::to_string(i) + " is rejected by the oracle");
    }

    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(examples.size());
    for (const auto& e : examples) {
        if (cfg.pretokenize) {
            tokens.push_back(pretokenize(e));
        } else {
            std::vector<std::string> chars;
            for (char c : e)
                chars.emplace_back(1, c);
            tokens.push_back(std::move(chars));
        }
    }

    Rng rng(cfg.rng_seed);
    MergeContext ctx{oracle, cfg.sampling, rng, hooks.audit};
    std::chrono::nanoseconds scoring_time{0};

    TreeSet ts = naive_trees(tokens);
    RunReport report{.grammar = induced_grammar(ts),
                     .trees = ts,
                     .accepted_bubbles = {},
                     .oracle = {},
                     .phase_times = {}};
    auto update = [&](TreeSet next, const std::string& what) {
        if (hooks.on_update)
            hooks.on_update(ts, next, what);
        ts = std::move(next);
    };

    try {
        update(merge_all_valid(ts, ctx), "merge_all_valid");

        std::size_t max_len = cfg.scoring.max_len_start;
        while (max_len <= cfg.scoring.max_len_end) {
            ++report.iterations;
            const auto t0 = Clock::now();
            auto bubbles = score_bubbles(ts, max_len, cfg.scoring);
            if (hooks.bubble_log) {
                *hooks.bubble_log << "# iteration " << report.iterations << " max_len " << max_len << '\n';
                for (const auto& b : bubbles)
                    *hooks.bubble_log << b.to_string() << '\t' << b.similarity << '\t' << b.frequency << '\n';
            }
            rng.shuffle(bubbles);
            scoring_time += Clock::now() - t0;

            bool accepted = false;
            for (const auto& b : bubbles) {
                ++report.bubbles_tried;
                const auto t1 = Clock::now();
                BubbledTrees bubbled = apply_bubble(ts, b);
                scoring_time += Clock::now() - t1;
                auto result = accept_bubble(ts, bubbled, cfg, ctx);
                if (!result.accepted)
                    continue;
                report.accepted_bubbles.push_back({b, result.into});
                update(std::move(result.trees), "bubble " + b.to_string());
                accepted = true;
                break;
            }
            max_len = accepted ? cfg.scoring.max_len_start : max_len + 1;
        }

        if (cfg.pretokenize)
            update(expand_tokens(ts, cfg, ctx), "expand_tokens");
    } catch (const OracleBudgetExhausted&) {
        report.status = "budget_exhausted";
    }

    report.trees = renumber(ts);
    report.grammar = induced_grammar(report.trees);

    const auto oracle_after = oracle.stats();
    report.oracle.total_queries = oracle_after.total_queries - oracle_before.total_queries;
    report.oracle.cache_hits = oracle_after.cache_hits - oracle_before.cache_hits;
    report.oracle.wall_time = oracle_after.wall_time - oracle_before.wall_time;
    report.oracle.timeouts = oracle_after.timeouts - oracle_before.timeouts;

    report.wall_time = Clock::now() - start_time;
    report.phase_times["oracle"] = report.oracle.wall_time;
    report.phase_times["bubble_scoring"] = scoring_time;
    report.phase_times["candidate_sampling"] = ctx.sampling_time;
    const auto named = report.oracle.wall_time + scoring_time + ctx.sampling_time;
    report.phase_times["other"] = std::max(std::chrono::nanoseconds{0}, report.wall_time - named);
    return report;
}

std::string report_json(const RunReport& r)
{
    using nlohmann::json;
    auto seconds = [](std::chrono::nanoseconds d) { return std::chrono::duration<double>(d).count(); };
    json accepted = json::array();
    for (const auto& a : r.accepted_bubbles) {
        accepted.push_back({{"bubble", a.bubble.to_string()},
                            {"similarity", a.bubble.similarity.to_string()},
                            {"frequency", a.bubble.frequency.to_string()},
                            {"into", a.into}});
    }
    json phases = json::object();
    for (const auto& [name, d] : r.phase_times)
        phases[name] = seconds(d);
    json j = {{"status", r.status},
              {"iterations", r.iterations},
              {"bubbles_tried", r.bubbles_tried},
              {"accepted_bubbles", accepted},
              {"oracle",
               {{"total_queries", r.oracle.total_queries},
                {"cache_hits", r.oracle.cache_hits},
                {"timeouts", r.oracle.timeouts},
                {"wall_time_s", seconds(r.oracle.wall_time)}}},
              {"wall_time_s", seconds(r.wall_time)},
              {"phase_times_s", phases},
              {"rules", r.grammar.rules().size()},
              {"nonterminals", r.grammar.nonterminals().size()}};
    return j.dump(2);
}

} // namespace gramlearn
