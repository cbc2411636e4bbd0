#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "veriblock/config.hpp"
#include "veriblock/node.hpp"
#include "veriblock/sim.hpp"
#include "veriblock/trust.hpp"

namespace {

using namespace veriblock;

constexpr int kExitOk = 0;
constexpr int kExitCorrupt = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

nlohmann::json score_to_json(const ScoreResult& res) {
    return {{"algorithm_id", res.algorithm_id}, {"score", res.score},
            {"trusted", res.trusted},           {"total", res.total},
            {"verified", res.verified}};
}

int cmd_run_scenario(const std::string& config_path, const std::string& kind_name, std::uint64_t n,
                     std::uint64_t seed, const std::string& out_dir) {
    Config cfg;
    ScenarioSpec spec;
    try {
        cfg = Config::load(config_path);
        spec.kind = parse_scenario_kind(kind_name);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    spec.n_transactions = n;
    spec.seed = seed;
    spec.params = cfg.verification;
    spec.p_pass_filter = cfg.p_pass_filter;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    ContractParams cparams;
    cparams.dedup = cfg.dedup;
    Node node(cparams, cfg.block_interval_s, cfg.block_capacity);
    node.contracts().set_balance("consumer-0", 100);

    auto calls = generate_scenario(spec);
    SimTime last = 0;
    for (const auto& c : calls) {
        node.submit(c.sender, c.call, c.sim_time);
        last = c.sim_time;
    }
    node.flush(last);

    // Steps 6-10: the consumer pays for a score, each enabled trust provider
    // ingests the event list, the first one delivers and collects the escrow.
    node.submit("consumer-0", RequestTrustScoreCall{TrustScope::of_incident(1), 3}, last);
    node.flush(last);
    const TrustRequest* request = node.contracts().find_request(1);

    nlohmann::json scores = nlohmann::json::object();
    std::string evidence_csv;
    bool delivered = false;
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        const std::string& alg = cfg.algorithms[i];
        TrustProvider tp("trust-" + std::to_string(i + 1),
                         {alg, cfg.w_filtered, cfg.w_unfiltered}, cfg.verification,
                         cfg.threshold);
        tp.ingest(node.ledger().events_since(0));
        if (evidence_csv.empty()) evidence_csv = tp.db().export_csv();
        ScoreResult res;
        try {
            res = tp.score_scope(TrustScope::of_incident(1));
        } catch (const Error&) {
            continue;  // no reviews yet (n == 1)
        }
        scores[alg] = score_to_json(res);
        if (!delivered && request) {
            TrustScoreRecord rec = tp.serve_request(*request, last);
            node.submit(tp.account(),
                        DeliverTrustScoreCall{rec.request_id, rec.algorithm_id, rec.score,
                                              rec.trusted, rec.total_reviews,
                                              rec.verified_feedback},
                        last);
            node.flush(last);
            delivered = true;
        }
    }

    nlohmann::json out;
    out["kind"] = scenario_kind_name(spec.kind);
    out["n_transactions"] = spec.n_transactions;
    out["seed"] = spec.seed;
    out["scores"] = scores;
    if (const TrustScoreRecord* rec = node.contracts().find_record(1)) {
        out["delivered"] = {{"algorithm_id", rec->algorithm_id},
                            {"score", rec->score},
                            {"trusted", rec->trusted}};
    }

    std::ostringstream chain;
    node.ledger().dump_jsonl(chain);
    std::ostringstream chainbin;
    node.ledger().dump_binary(chainbin);

    auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
    if (!write_file(path("chain.jsonl"), chain.str()) ||
        !write_file(path("chain.bin"), chainbin.str()) ||
        !write_file(path("evidence.csv"), evidence_csv) ||
        !write_file(path("score.json"), out.dump(2) + "\n") ||
        !write_file(path("balances.csv"), node.contracts().balances_csv())) {
        std::cerr << "i/o error: cannot write to " << out_dir << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_run_experiment(const std::string& config_path, const std::string& out_dir) {
    Config cfg;
    try {
        cfg = Config::load(config_path);
        if (cfg.p_good.empty()) throw ConfigError("experiment.p_good must list at least one value");
        if (cfg.seeds.empty()) throw ConfigError("experiment.seeds must list at least one value");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    std::ostringstream summary;
    summary << "p_good,seed,final_alg1,final_alg2,final_alg3\n";
    for (double p : cfg.p_good) {
        for (std::uint64_t seed : cfg.seeds) {
            ExperimentConfig xc;
            xc.total = cfg.total;
            xc.step = cfg.step;
            xc.seed = seed;
            xc.p_pass_filter = cfg.p_pass_filter;
            xc.params = cfg.verification;
            xc.threshold = cfg.threshold;
            xc.w_filtered = cfg.w_filtered;
            xc.w_unfiltered = cfg.w_unfiltered;
            xc.block_interval_s = cfg.block_interval_s;
            ExperimentSeries series = run_incremental_experiment(p, xc);

            char name[64];
            std::snprintf(name, sizeof name, "series_p%d_s%llu.csv",
                          static_cast<int>(std::lround(p * 100.0)),
                          static_cast<unsigned long long>(seed));
            auto file = (std::filesystem::path(out_dir) / name).string();
            if (!write_file(file, series.to_csv())) {
                std::cerr << "i/o error: cannot write " << file << "\n";
                return kExitIo;
            }
            const ExperimentRow& final_row = series.rows.back();
            char line[160];
            std::snprintf(line, sizeof line, "%.2f,%llu,%.6f,%.6f,%.6f\n", p,
                          static_cast<unsigned long long>(seed), final_row.score_alg1,
                          final_row.score_alg2, final_row.score_alg3);
            summary << line;
        }
    }
    auto summary_path = (std::filesystem::path(out_dir) / "summary.csv").string();
    if (!write_file(summary_path, summary.str())) {
        std::cerr << "i/o error: cannot write " << summary_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_verify_chain(const std::string& dump_path) {
    std::ifstream in(dump_path, std::ios::binary);
    if (!in) {
        std::cerr << "i/o error: cannot read " << dump_path << "\n";
        return kExitIo;
    }
    std::vector<Block> blocks;
    try {
        blocks = Ledger::load_binary(in);
    } catch (const std::exception& e) {
        std::cerr << "i/o error: unparseable dump: " << e.what() << "\n";
        return kExitIo;
    }
    std::int64_t bad = -1;
    if (Ledger::verify_blocks(blocks, &bad)) {
        std::cout << "chain ok: " << blocks.size() << " blocks\n";
        return kExitOk;
    }
    std::cout << "chain corrupt: first bad height " << bad << "\n";
    return kExitCorrupt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"veriblock: deterministic trust-management ledger simulator"};
    app.require_subcommand(1);

    std::string config_path = "veriblock.conf";
    std::string kind = "all-supporting";
    std::uint64_t n = 11;
    std::uint64_t seed = 42;
    std::string out = "out";
    std::string dump_path;

    auto* scen = app.add_subcommand("run-scenario", "Run one batch scenario end to end");
    scen->add_option("--config", config_path, "Config file path");
    scen->add_option("--kind", kind, "all-supporting | all-opposing | random-split");
    scen->add_option("--n", n, "Transactions in the batch (1 incident + n-1 reviews)");
    scen->add_option("--seed", seed, "RNG seed");
    scen->add_option("--out", out, "Output directory");

    auto* exp = app.add_subcommand("run-experiment", "Run the incremental-evidence sweep");
    exp->add_option("--config", config_path, "Config file path");
    exp->add_option("--out", out, "Output directory");

    auto* ver = app.add_subcommand("verify-chain", "Verify a binary chain dump");
    ver->add_option("dump", dump_path, "Chain dump path")->required();

    CLI11_PARSE(app, argc, argv);

    if (scen->parsed()) return cmd_run_scenario(config_path, kind, n, seed, out);
    if (exp->parsed()) return cmd_run_experiment(config_path, out);
    return cmd_verify_chain(dump_path);
}
