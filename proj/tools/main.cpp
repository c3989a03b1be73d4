#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seqrules/candgen.hpp"
#include "seqrules/codec.hpp"
#include "seqrules/core.hpp"
#include "seqrules/cover.hpp"
#include "seqrules/eval.hpp"
#include "seqrules/io.hpp"
#include "seqrules/miner.hpp"
#include "seqrules/synth.hpp"

using namespace seqrules;

namespace {

struct SharedOpts {
    SearchParams params;
    std::string best_window = "min-gaps";
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-gap", params.max_gap,
                        "gap budget ratio per pattern window")
            ->capture_default_str();
        cmd->add_option("--max-delay", params.max_delay,
                        "delay budget ratio between head and tail")
            ->capture_default_str();
        cmd->add_option("--alpha", params.alpha, "significance level")
            ->check(CLI::Range(1e-12, 1.0))
            ->capture_default_str();
        cmd->add_option("--best-window", best_window,
                        "tail window choice per trigger")
            ->check(CLI::IsMember({"min-gaps", "nearest"}))
            ->capture_default_str();
        cmd->add_option("--pass-cap", params.pass_cap, "maximum number of mining passes")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    }

    SearchParams resolve() const {
        SearchParams p = params;
        p.best_window = best_window == "nearest" ? SearchParams::BestWindow::Nearest
                                                 : SearchParams::BestWindow::MinGaps;
        return p;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

void write_mined_model(const std::string& path, const SequenceDatabase& db,
                       const MineResult& res, const SearchParams& params) {
    DbIndex idx(db);
    RuleCache cache(idx, params);
    std::vector<ModelEntryStats> stats;
    const std::size_t omega = db.alphabet.size();
    for (std::size_t x = 0; x < res.rules.extra_count(); ++x) {
        const Rule& r = res.rules.at(omega + x);
        const RuleStats& st = cache.stats(r);
        stats.push_back({st.support, st.confidence, res.cover.usage[omega + x]});
    }
    const ModelCost mc = model_length(res.rules);
    ModelFooter footer{mc.total, res.final_score - mc.total, res.final_score, res.null_score};
    auto out = open_out(path);
    write_model(out, db.alphabet, res.rules, &stats, &footer);
}

void print_summary(const MineResult& res, double seconds) {
    const double saved =
        res.null_score > 0 ? 100.0 * (1.0 - res.final_score / res.null_score) : 0.0;
    std::printf(
        "rules=%zu passes=%d candidates_tested=%lld updates=%zu total=%.3f null=%.3f "
        "saved=%.3f%% time=%.2fs\n",
        res.rules.extra_count(), res.passes, static_cast<long long>(res.candidates_tested),
        res.updates.size(), res.final_score, res.null_score, saved, seconds);
}

int cmd_mine(const std::string& db_path, const std::string& out_path, const SharedOpts& opts,
             bool trace, bool dump_candidates) {
    const SequenceDatabase db = read_database(db_path);
    const SearchParams params = opts.resolve();
    const auto t0 = std::chrono::steady_clock::now();
    MineResult res = mine(db, params, trace ? &std::cerr : nullptr,
                          dump_candidates ? &std::cerr : nullptr);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_mined_model(out_path, db, res, params);
    print_summary(res, secs);
    return 0;
}

int cmd_candidates(const std::string& db_path, const std::string& patterns_path,
                   const std::string& out_path, const SharedOpts& opts) {
    const SequenceDatabase db = read_database(db_path);
    const SearchParams params = opts.resolve();
    std::vector<Pattern> patterns;
    for (const auto& toks : read_patterns(patterns_path)) {
        Pattern p;
        for (const std::string& t : toks) {
            auto id = db.alphabet.find(t);
            if (!id)
                throw std::runtime_error("pattern token '" + t + "' not present in database");
            p.push_back(*id);
        }
        patterns.push_back(std::move(p));
    }
    const auto t0 = std::chrono::steady_clock::now();
    MineResult res = mine_from_patterns(db, patterns, params);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_mined_model(out_path, db, res, params);
    print_summary(res, secs);
    return 0;
}

int cmd_score(const std::string& db_path, const std::string& model_path,
              const SharedOpts& opts) {
    const SequenceDatabase db = read_database(db_path);
    const SearchParams params = opts.resolve();
    const RuleSet rules = doc_to_rules(read_model(model_path), db.alphabet);
    DbIndex idx(db);
    RuleCache cache(idx, params);
    const Score s = score_model(idx, rules, cache, params);
    const Score null_s = score_model(idx, RuleSet(db.alphabet.size()), cache, params);
    const double saved = 100.0 * (1.0 - s.total / null_s.total);
    std::printf("L_R\tL_D\ttotal\tnull\tsaved_percent\n");
    std::printf("%.6f\t%.6f\t%.6f\t%.6f\t%.4f\n", s.model.total, s.data.total, s.total,
                null_s.total, saved);
    return 0;
}

int cmd_cover(const std::string& db_path, const std::string& model_path,
              const SharedOpts& opts) {
    const SequenceDatabase db = read_database(db_path);
    const SearchParams params = opts.resolve();
    RuleSet rules(db.alphabet.size());
    if (!model_path.empty())
        rules = doc_to_rules(read_model(model_path), db.alphabet);
    DbIndex idx(db);
    RuleCache cache(idx, params);
    const Cover cov = cover(idx, rules, cache, params);
    std::printf("# seq\trule\ti\tj\tk\tl\n");
    for (const SelectedWindow& sw : cov.windows) {
        const Rule& r = rules.at(static_cast<std::size_t>(sw.rule_index));
        if (sw.win.head)
            std::printf("%d\t%s\t%u\t%u\t%u\t%u\n", sw.win.seq,
                        rule_to_string(r, db.alphabet).c_str(), sw.win.head->start,
                        sw.win.head->end, sw.win.k(), sw.win.l());
        else
            std::printf("%d\t%s\t-\t-\t%u\t%u\n", sw.win.seq,
                        rule_to_string(r, db.alphabet).c_str(), sw.win.k(), sw.win.l());
    }
    return 0;
}

int cmd_gen(const GenConfig& config, const std::string& prefix) {
    auto [db, truth] = generate(config);
    {
        auto out = open_out(prefix + ".db");
        write_database(out, db);
    }
    {
        auto out = open_out(prefix + ".truth");
        write_rule_lines(out, db.alphabet, truth.planted());
    }
    {
        auto out = open_out(prefix + ".config");
        out << "alphabet_size=" << config.alphabet_size << '\n'
            << "num_rules=" << config.num_rules << '\n'
            << "head_size=" << config.head_size << '\n'
            << "tail_size=" << config.tail_size << '\n'
            << "confidence=" << config.confidence << '\n'
            << "heads_as_patterns=" << (config.heads_as_patterns ? 1 : 0) << '\n'
            << "initial_length=" << config.initial_length << '\n'
            << "noise_fraction=" << config.noise_fraction << '\n'
            << "delay_prob=" << config.delay_prob << '\n'
            << "gap_prob=" << config.gap_prob << '\n'
            << "flip_prob=" << config.flip_prob << '\n'
            << "lex_order=" << (config.lex_order ? 1 : 0) << '\n'
            << "seed=" << config.seed << '\n';
    }
    std::printf("generated %zu events over %zu symbols, %zu planted rules\n",
                db.sequences[0].size(), db.alphabet.size(), truth.planted().size());
    return 0;
}

int cmd_eval(const std::string& mined_path, const std::string& truth_path,
             bool include_singletons) {
    Alphabet shared;
    const std::vector<Rule> truth = doc_rules_interning(read_model(truth_path), shared);
    const std::vector<Rule> mined = doc_rules_interning(read_model(mined_path), shared);
    const EvalReport rep = evaluate(truth, mined, !include_singletons);
    std::printf("%.6f\t%.6f\t%.6f\n", rep.recall, rep.precision, rep.f1);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mining succinct sequential rule sets from event sequences"};
    app.require_subcommand(1);

    SharedOpts opts;
    std::string db_path, out_path, model_path, patterns_path, mined_path, truth_path, prefix;
    bool trace = false;
    bool dump_candidates = false;
    bool include_singletons = false;
    GenConfig config;

    auto* mine_cmd = app.add_subcommand("mine", "mine a rule set from a database");
    mine_cmd->add_option("--db", db_path, "database file")->required();
    mine_cmd->add_option("--out", out_path, "output model file")->required();
    mine_cmd->add_flag("--trace", trace, "log accepted updates to stderr");
    mine_cmd->add_flag("--dump-candidates", dump_candidates,
                       "log every generated candidate with its p-value to stderr");
    opts.attach(mine_cmd);

    auto* cand_cmd =
        app.add_subcommand("candidates", "build a rule set from candidate patterns");
    cand_cmd->add_option("--db", db_path, "database file")->required();
    cand_cmd->add_option("--patterns", patterns_path, "pattern file, one per line")->required();
    cand_cmd->add_option("--out", out_path, "output model file")->required();
    opts.attach(cand_cmd);

    auto* score_cmd = app.add_subcommand("score", "score a model against a database");
    score_cmd->add_option("--db", db_path, "database file")->required();
    score_cmd->add_option("--model", model_path, "model file")->required();
    opts.attach(score_cmd);

    auto* cover_cmd = app.add_subcommand("cover", "print the greedy cover of a database");
    cover_cmd->add_option("--db", db_path, "database file")->required();
    cover_cmd->add_option("--model", model_path, "model file (default: singletons only)");
    opts.attach(cover_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic benchmark");
    gen_cmd->add_option("--out", prefix, "output file prefix")->required();
    gen_cmd->add_option("--alphabet-size", config.alphabet_size)->capture_default_str();
    gen_cmd->add_option("--num-rules", config.num_rules)->capture_default_str();
    gen_cmd->add_option("--head-size", config.head_size)->capture_default_str();
    gen_cmd->add_option("--tail-size", config.tail_size)->capture_default_str();
    gen_cmd->add_option("--confidence", config.confidence)->capture_default_str();
    gen_cmd->add_option("--heads-as-patterns", config.heads_as_patterns)
        ->capture_default_str();
    gen_cmd->add_option("--length", config.initial_length, "initial sequence length")
        ->capture_default_str();
    gen_cmd->add_option("--noise", config.noise_fraction, "background noise fraction")
        ->capture_default_str();
    gen_cmd->add_option("--delay-prob", config.delay_prob)->capture_default_str();
    gen_cmd->add_option("--gap-prob", config.gap_prob)->capture_default_str();
    gen_cmd->add_option("--flip-prob", config.flip_prob, "destructive noise rate")
        ->capture_default_str();
    gen_cmd->add_option("--lex-order", config.lex_order)->capture_default_str();
    opts.attach(gen_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "compare a mined model against ground truth");
    eval_cmd->add_option("--mined", mined_path, "mined model file")->required();
    eval_cmd->add_option("--truth", truth_path, "ground-truth rule file")->required();
    eval_cmd->add_flag("--include-singletons", include_singletons,
                       "keep singleton rules in the mined model");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(mine_cmd))
            return cmd_mine(db_path, out_path, opts, trace, dump_candidates);
        if (app.got_subcommand(cand_cmd))
            return cmd_candidates(db_path, patterns_path, out_path, opts);
        if (app.got_subcommand(score_cmd))
            return cmd_score(db_path, model_path, opts);
        if (app.got_subcommand(cover_cmd))
            return cmd_cover(db_path, model_path, opts);
        if (app.got_subcommand(gen_cmd)) {
            config.seed = opts.seed;
            return cmd_gen(config, prefix);
        }
        if (app.got_subcommand(eval_cmd))
            return cmd_eval(mined_path, truth_path, include_singletons);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
