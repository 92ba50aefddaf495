/****************************************************************************
command line front end: run / verify / attack / stats

exit codes: 0 accepted, 1 protocol reject, 2 usage or IO error
*****************************************************************************/
#include <CLI11.hpp>

#include "ace/harness.hpp"

#include <iostream>

using namespace ace;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << text;
}

void print_verdict(const Verdict& v) {
    std::cout << (v.accept ? "ACCEPT" : "REJECT") << ": " << v.reason << "\n";
    if (v.blamed) std::cout << "blamed: " << actor_name(*v.blamed) << "\n";
}

std::string metrics_csv(const ElectionConfig& cfg, const RunOutcome& out) {
    CsvTable csv({"seed", "n_v", "n_t", "k", "board_entries", "voter_msgs_total", "tallier_msgs",
                  "designated_msgs", "sync_messages", "poio_count", "double_vote_attempts",
                  "double_vote_rejected", "accept", "winner_published", "winner"});
    uint64_t voter_total = 0;
    for (uint32_t m : out.metrics.voter_msgs) voter_total += m;
    csv.row({double(cfg.seed), double(cfg.n_v), double(cfg.n_t), double(cfg.strategy.k),
             double(out.metrics.board_entries), double(voter_total),
             double(out.metrics.tallier_msgs), double(out.metrics.designated_msgs),
             double(out.metrics.sync_messages), double(out.metrics.poio_count),
             double(out.metrics.double_vote_attempts), double(out.metrics.double_vote_rejected),
             out.metrics.verdict.accept ? 1.0 : 0.0, out.metrics.winner ? 1.0 : 0.0,
             double(out.metrics.winner.value_or(0))});
    return csv.str();
}

int report_run(const ElectionConfig& cfg, const RunOutcome& out, const std::string& out_path) {
    if (!out_path.empty()) {
        save_transcript(out.transcript, out_path);
        emit(metrics_csv(cfg, out), out_path + ".metrics.csv");
        std::cout << "transcript: " << out_path << "\n";
    }
    if (out.metrics.winner) std::cout << "winner: " << *out.metrics.winner << "\n";
    for (const std::string& d : out.metrics.detections) std::cout << "detection: " << d << "\n";
    print_verdict(out.metrics.verdict);
    return out.metrics.verdict.accept ? 0 : 1;
}

const std::map<std::string, TallierPolicy> kTallierScenarios = {
    {"always_swap_commitment", TallierPolicy::always_swap_commitment},
    {"wrong_audit_reveal", TallierPolicy::wrong_audit_reveal},
    {"wrong_aggregate", TallierPolicy::wrong_aggregate},
    {"silent", TallierPolicy::silent},
};
const std::map<std::string, VoterPolicy> kVoterScenarios = {
    {"invalid_vote_garbage_proof", VoterPolicy::invalid_vote_garbage_proof},
    {"wrong_opening", VoterPolicy::wrong_opening},
    {"double_vote_attempt", VoterPolicy::double_vote_attempt},
};
const std::map<std::string, DesignatedPolicy> kDesignatedScenarios = {
    {"wrong_winner", DesignatedPolicy::wrong_winner},
    {"wrong_rtilde", DesignatedPolicy::wrong_rtilde},
};

std::optional<Mutation> mutation_by_name(const std::string& name) {
    for (Mutation m : kAllMutations)
        if (name == mutation_name(m)) return m;
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"audit-cast election toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, scenario, transcript_path;
    uint64_t seed = 1;
    uint32_t k = 0;
    uint64_t trials = 0;

    CLI::App* run = app.add_subcommand("run", "simulate an election and judge the transcript");
    run->add_option("--config", config_path, "INI election/adversary configuration")->required();
    run->add_option("--out", out_path, "transcript output path");
    run->add_option("--seed", seed, "override the configured seed");

    CLI::App* verify = app.add_subcommand("verify", "judge a persisted transcript");
    verify->add_option("transcript", transcript_path, "board file written by run")->required();

    CLI::App* attack =
        app.add_subcommand("attack", "run an adversary policy or transcript mutation");
    attack->add_option("--scenario", scenario, "policy or mutation name")->required();
    attack->add_option("--config", config_path, "optional INI base configuration");
    attack->add_option("--seed", seed, "seed for the attacked run");
    attack->add_option("--k", k, "audit rounds before cast");
    attack->add_option("--out", out_path, "transcript output path");

    CLI::App* stats =
        app.add_subcommand("stats", "soundness, forgery and complexity experiments");
    stats->add_option("--scenario", scenario, "soundness | forgery | complexity");
    stats->add_option("--k", k, "audit rounds before cast");
    stats->add_option("--trials", trials, "experiment repetitions");
    stats->add_option("--seed", seed, "experiment seed");
    stats->add_option("--out", out_path, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            auto [cfg, adv] = parse_config(slurp(config_path));
            if (run->count("--seed")) cfg.seed = seed;
            return report_run(cfg, run_election(cfg, adv), out_path);
        }

        if (*verify) {
            Transcript t = Board::load(transcript_path);
            Verdict v = judge_verify(t);
            print_verdict(v);
            return v.accept ? 0 : 1;
        }

        if (*attack) {
            ElectionConfig cfg;
            AdversaryConfig adv;
            if (!config_path.empty()) std::tie(cfg, adv) = parse_config(slurp(config_path));
            else {
                cfg.backend = Backend::tiny_test;
                cfg.n_v = 4;
                cfg.n_t = 2;
                cfg.n_choices = 2;
                cfg.strategy = AuditStrategy::fixed(2);
            }
            if (attack->count("--seed")) cfg.seed = seed;
            if (attack->count("--k")) cfg.strategy = AuditStrategy::fixed(k);

            if (std::optional<Mutation> m = mutation_by_name(scenario)) {
                RunOutcome honest = run_election(cfg, AdversaryConfig{});
                if (!honest.metrics.verdict.accept)
                    throw std::runtime_error("honest baseline run was rejected");
                GroupParams pp = derive_params(cfg.backend, cfg.n_choices, cfg.domain_tag);
                Transcript mutated = apply_mutation(pp, honest.transcript, *m);
                if (!out_path.empty()) save_transcript(mutated, out_path);
                Verdict v = judge_verify(mutated);
                std::cout << "mutation: " << scenario << "\n";
                print_verdict(v);
                return v.accept ? 0 : 1;
            }
            if (auto it = kTallierScenarios.find(scenario); it != kTallierScenarios.end()) {
                adv.corrupted_talliers = {0};
                adv.tallier_policy = it->second;
            } else if (auto iv = kVoterScenarios.find(scenario); iv != kVoterScenarios.end()) {
                adv.corrupted_voters = {0};
                adv.voter_policy = iv->second;
            } else if (auto id = kDesignatedScenarios.find(scenario);
                       id != kDesignatedScenarios.end()) {
                adv.designated_policy = id->second;
            } else {
                std::cerr << "unknown scenario: " << scenario << "\n";
                return 2;
            }
            std::cout << "scenario: " << scenario << "\n";
            return report_run(cfg, run_election(cfg, adv), out_path);
        }

        if (*stats) {
            if (scenario.empty()) scenario = "soundness";
            if (scenario == "soundness") {
                if (trials == 0) trials = 20000;
                CsvTable csv({"k", "trials", "detected", "undetected", "undetected_rate"});
                std::vector<uint32_t> ks;
                if (stats->count("--k")) ks.push_back(k);
                else
                    for (uint32_t kk = 1; kk <= 6; ++kk) ks.push_back(kk);
                for (uint32_t kk : ks) {
                    SoundnessStats s = audit_soundness_experiment(kk, trials, seed);
                    csv.row({double(kk), double(s.trials), double(s.detected),
                             double(s.undetected), s.undetected_rate()});
                }
                emit(csv.str(), out_path);
                return 0;
            }
            if (scenario == "forgery") {
                if (trials == 0) trials = 200;
                CsvTable csv({"n_t", "trials", "corrupt_trapdoor", "forged", "rate"});
                for (int corrupt : {0, 1}) {
                    ForgeryStats s = receipt_forgery_experiment(3, trials, seed, corrupt != 0);
                    csv.row({3.0, double(s.trials), double(corrupt), double(s.forged), s.rate()});
                }
                emit(csv.str(), out_path);
                return 0;
            }
            if (scenario == "complexity") {
                if (k == 0) k = 2;
                auto [rows, csv] = complexity_probe(k, seed);
                (void)rows;
                emit(csv, out_path);
                return 0;
            }
            std::cerr << "unknown stats scenario: " << scenario << "\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
