#include <catch2/catch_amalgamated.hpp>

#include "ace/harness.hpp"

#include <cstdio>

using namespace ace;

namespace {

ElectionConfig tiny_config(uint32_t n_v, uint32_t n_t, uint32_t k, uint64_t seed) {
    ElectionConfig cfg;
    cfg.backend = Backend::tiny_test;
    cfg.n_v = n_v;
    cfg.n_t = n_t;
    cfg.n_choices = 2;
    cfg.strategy = AuditStrategy::fixed(k);
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("plaintext oracle on worked examples") {
    OracleResult r = plaintext_oracle({0, 1, 0}, 2);
    CHECK(r.tally == std::vector<uint64_t>{2, 1});
    CHECK(r.winner == 0);
    OracleResult empty = plaintext_oracle({}, 2);
    CHECK(empty.tally == std::vector<uint64_t>{0, 0});
    CHECK(empty.winner == 0);
    // ties resolve to the lowest index
    CHECK(plaintext_oracle({0, 1}, 3).winner == 0);
    CHECK_THROWS_AS(plaintext_oracle({5}, 2), std::invalid_argument);
}

TEST_CASE("honest runs are accepted and reproduce the plaintext tally") {
    for (uint64_t seed : {1ull, 7ull, 42ull}) {
        RunOutcome out = run_election(tiny_config(5, 2, 2, seed), AdversaryConfig{});
        INFO("seed " << seed << ": " << out.metrics.verdict.reason);
        CHECK(out.metrics.verdict.accept);
        OracleResult oracle = plaintext_oracle(out.choices, 2);
        CHECK(out.metrics.protocol_tally == oracle.tally);
        CHECK(out.metrics.winner == oracle.winner);
        CHECK(out.oracle_tally == oracle.tally);  // every voter was accepted
        CHECK(out.metrics.poio_count == 0);
        CHECK(out.metrics.detections.empty());
    }
}

TEST_CASE("runs are deterministic in the seed") {
    ElectionConfig cfg = tiny_config(4, 2, 2, 9);
    auto persist = [&](const RunOutcome& out, const std::string& path) {
        GroupParams pp = derive_params(cfg.backend, cfg.n_choices, cfg.domain_tag);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        for (const BoardEntry& e : out.transcript.entries) f << to_base64(e.encode()) << "\n";
    };
    RunOutcome a = run_election(cfg, AdversaryConfig{});
    RunOutcome b = run_election(cfg, AdversaryConfig{});
    persist(a, "det_a.tmp");
    persist(b, "det_b.tmp");
    std::ifstream fa("det_a.tmp"), fb("det_b.tmp");
    std::string sa((std::istreambuf_iterator<char>(fa)), {});
    std::string sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
    CHECK_FALSE(sa.empty());
    cfg.seed = 10;
    RunOutcome c = run_election(cfg, AdversaryConfig{});
    persist(c, "det_c.tmp");
    std::ifstream fc("det_c.tmp");
    std::string sc((std::istreambuf_iterator<char>(fc)), {});
    CHECK(sa != sc);
    std::remove("det_a.tmp");
    std::remove("det_b.tmp");
    std::remove("det_c.tmp");
}

TEST_CASE("per-ballot message count is 2k*n_t + n_t for fixed-k voters") {
    for (uint32_t k : {1u, 3u}) {
        for (uint32_t n_t : {1u, 2u, 4u}) {
            RunOutcome out = run_election(tiny_config(3, n_t, k, 5), AdversaryConfig{});
            REQUIRE(out.metrics.verdict.accept);
            for (uint32_t msgs : out.metrics.voter_msgs) {
                CHECK(msgs == 2 * k * n_t + n_t);
                CHECK(msgs <= 3 * k * n_t + n_t);
            }
            CHECK(out.metrics.sync_messages == n_t * (n_t - 1));
        }
    }
}

TEST_CASE("geometric strategy needs two rounds on average at p = 1/2") {
    Rng rng(123);
    AuditStrategy strat = AuditStrategy::geometric(0.5);
    double sum = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum += sample_rounds(strat, rng);
    double mean = sum / n;
    CHECK(mean > 1.9);
    CHECK(mean < 2.1);

    // a geometric election still completes and verifies
    ElectionConfig cfg = tiny_config(4, 2, 1, 77);
    cfg.strategy = AuditStrategy::geometric(0.5);
    RunOutcome out = run_election(cfg, AdversaryConfig{});
    INFO(out.metrics.verdict.reason);
    CHECK(out.metrics.verdict.accept);
    CHECK(out.metrics.protocol_tally == plaintext_oracle(out.choices, 2).tally);
}

TEST_CASE("double vote attempts are rejected and the first vote stands") {
    AdversaryConfig adv;
    adv.corrupted_voters = {1};
    adv.voter_policy = VoterPolicy::double_vote_attempt;
    RunOutcome out = run_election(tiny_config(4, 2, 2, 13), adv);
    INFO(out.metrics.verdict.reason);
    CHECK(out.metrics.verdict.accept);
    CHECK(out.metrics.double_vote_attempts == 2);
    CHECK(out.metrics.double_vote_rejected == 2);
    // the first cast of the double voter is still counted
    CHECK(out.metrics.protocol_tally == plaintext_oracle(out.choices, 2).tally);
}

TEST_CASE("every mutation class is rejected with the right blame") {
    ElectionConfig cfg;
    cfg.backend = Backend::production;
    cfg.n_v = 3;
    cfg.n_t = 2;
    cfg.n_choices = 2;
    cfg.strategy = AuditStrategy::fixed(2);
    cfg.seed = 21;
    GroupParams pp = derive_params(cfg.backend, cfg.n_choices, cfg.domain_tag);
    RunOutcome out = run_election(cfg, AdversaryConfig{});
    REQUIRE(out.metrics.verdict.accept);

    struct Expect {
        Mutation m;
        std::optional<ActorId::Role> blamed;
    };
    std::vector<Expect> cases = {
        {Mutation::flip_winner, ActorId::Role::designated},
        {Mutation::alter_blinded_commitment, ActorId::Role::tallier},
        {Mutation::drop_validity_signature, ActorId::Role::tallier},
        {Mutation::duplicate_cast, ActorId::Role::voter},
        {Mutation::swap_rtilde_total, ActorId::Role::designated},
        {Mutation::corrupt_proof_vote, ActorId::Role::tallier},
        {Mutation::corrupt_proof_result, ActorId::Role::designated},
        {Mutation::break_hash_chain, std::nullopt},
    };
    for (const Expect& c : cases) {
        Verdict v = mutate_and_judge(pp, out.transcript, c.m);
        INFO(mutation_name(c.m) << ": " << v.reason);
        CHECK_FALSE(v.accept);
        if (c.blamed) {
            REQUIRE(v.blamed.has_value());
            CHECK(v.blamed->role == *c.blamed);
        } else {
            CHECK_FALSE(v.blamed.has_value());
            CHECK(v.reason.rfind("integrity", 0) == 0);
        }
    }
    // no false rejects on the untouched transcript
    CHECK(judge_verify(out.transcript).accept);
}

TEST_CASE("adversary policies end in valid blame or leave the tally untouched") {
    SECTION("commitment swapping tallier is caught at the first audit") {
        AdversaryConfig adv;
        adv.corrupted_talliers = {0};
        adv.tallier_policy = TallierPolicy::always_swap_commitment;
        RunOutcome out = run_election(tiny_config(4, 2, 2, 31), adv);
        REQUIRE_FALSE(out.metrics.verdict.accept);
        REQUIRE(out.metrics.verdict.blamed.has_value());
        CHECK(out.metrics.verdict.blamed->role == ActorId::Role::tallier);
        CHECK(out.metrics.verdict.blamed->index == 0);
        CHECK(out.metrics.poio_count > 0);
    }
    SECTION("wrong audit reveal") {
        AdversaryConfig adv;
        adv.corrupted_talliers = {1};
        adv.tallier_policy = TallierPolicy::wrong_audit_reveal;
        RunOutcome out = run_election(tiny_config(4, 2, 2, 32), adv);
        REQUIRE_FALSE(out.metrics.verdict.accept);
        REQUIRE(out.metrics.verdict.blamed.has_value());
        CHECK(out.metrics.verdict.blamed->role == ActorId::Role::tallier);
        CHECK(out.metrics.verdict.blamed->index == 1);
    }
    SECTION("wrong aggregate") {
        AdversaryConfig adv;
        adv.corrupted_talliers = {0};
        adv.tallier_policy = TallierPolicy::wrong_aggregate;
        RunOutcome out = run_election(tiny_config(4, 2, 2, 33), adv);
        REQUIRE_FALSE(out.metrics.verdict.accept);
        REQUIRE(out.metrics.verdict.blamed.has_value());
        CHECK(out.metrics.verdict.blamed->role == ActorId::Role::tallier);
        CHECK(out.metrics.verdict.blamed->index == 0);
    }
    SECTION("silent tallier") {
        AdversaryConfig adv;
        adv.corrupted_talliers = {1};
        adv.tallier_policy = TallierPolicy::silent;
        RunOutcome out = run_election(tiny_config(3, 2, 2, 34), adv);
        REQUIRE_FALSE(out.metrics.verdict.accept);
        REQUIRE(out.metrics.verdict.blamed.has_value());
        CHECK(out.metrics.verdict.blamed->role == ActorId::Role::tallier);
        CHECK(out.metrics.verdict.blamed->index == 1);
    }
    SECTION("garbage vote proof voter is excluded without stopping the election") {
        AdversaryConfig adv;
        adv.corrupted_voters = {0};
        adv.voter_policy = VoterPolicy::invalid_vote_garbage_proof;
        RunOutcome out = run_election(tiny_config(4, 2, 2, 35), adv);
        INFO(out.metrics.verdict.reason);
        CHECK(out.metrics.verdict.accept);
        // voter 0's vote is not in the tally
        std::vector<uint32_t> rest(out.choices.begin() + 1, out.choices.end());
        CHECK(out.metrics.protocol_tally == plaintext_oracle(rest, 2).tally);
    }
    SECTION("wrong opening voter is excluded without stopping the election") {
        AdversaryConfig adv;
        adv.corrupted_voters = {0};
        adv.voter_policy = VoterPolicy::wrong_opening;
        RunOutcome out = run_election(tiny_config(4, 2, 2, 36), adv);
        INFO(out.metrics.verdict.reason);
        CHECK(out.metrics.verdict.accept);
        std::vector<uint32_t> rest(out.choices.begin() + 1, out.choices.end());
        CHECK(out.metrics.protocol_tally == plaintext_oracle(rest, 2).tally);
        CHECK(out.metrics.poio_count > 0);
    }
    SECTION("designated misbehavior is blamed on the designated tallier") {
        for (DesignatedPolicy policy : {DesignatedPolicy::wrong_winner,
                                        DesignatedPolicy::wrong_rtilde}) {
            AdversaryConfig adv;
            adv.designated_policy = policy;
            RunOutcome out = run_election(tiny_config(4, 2, 2, 37), adv);
            INFO(policy_name(policy) << ": " << out.metrics.verdict.reason);
            REQUIRE_FALSE(out.metrics.verdict.accept);
            REQUIRE(out.metrics.verdict.blamed.has_value());
            CHECK(out.metrics.verdict.blamed->role == ActorId::Role::designated);
        }
    }
}

TEST_CASE("audit soundness experiment matches the sequential-test analysis") {
    SoundnessStats certain = audit_soundness_experiment(1, 500, 1, 1.0);
    CHECK(certain.undetected_rate() == 1.0);
    SoundnessStats k2 = audit_soundness_experiment(2, 20000, 2);
    CHECK(k2.undetected_rate() > 0.23);
    CHECK(k2.undetected_rate() < 0.27);
    CHECK(k2.detected + k2.undetected + k2.clean == k2.trials);
}

TEST_CASE("receipt forgery succeeds with the trapdoor and fails without it") {
    ForgeryStats with = receipt_forgery_experiment(3, 300, 11);
    CHECK(with.rate() == 1.0);
    ForgeryStats without = receipt_forgery_experiment(3, 1000, 12, true);
    CHECK(without.rate() < 0.01);
}

TEST_CASE("observables never leak an honest share encoding") {
    ElectionConfig cfg;
    cfg.backend = Backend::production;
    cfg.n_v = 3;
    cfg.n_t = 2;
    cfg.n_choices = 2;
    cfg.strategy = AuditStrategy::fixed(2);
    cfg.seed = 99;
    RunOutcome out = run_election(cfg, AdversaryConfig{});
    REQUIRE(out.metrics.verdict.accept);
    REQUIRE_FALSE(out.secret_blobs.empty());
    for (const Bytes& secret : out.secret_blobs) {
        auto it = std::search(out.observables.begin(), out.observables.end(), secret.begin(),
                              secret.end());
        CHECK(it == out.observables.end());
    }
}

TEST_CASE("config files parse, validate and digest canonically") {
    std::string text =
        "# sample\n"
        "[election]\n"
        "backend = tiny_test\n"
        "n_v = 4\n"
        "n_t = 2\n"
        "n_choices = 2\n"
        "strategy = fixed\n"
        "k = 3\n"
        "seed = 17\n"
        "weights = 0.5, 0.5\n"
        "\n"
        "[adversary]\n"
        "talliers = 0\n"
        "tallier_policy = wrong_audit_reveal\n";
    auto [cfg, adv] = parse_config(text);
    CHECK(cfg.n_v == 4);
    CHECK(cfg.strategy.k == 3);
    CHECK(cfg.weights == std::vector<double>{0.5, 0.5});
    CHECK(adv.corrupted_talliers == std::set<uint32_t>{0});
    CHECK(adv.tallier_policy == TallierPolicy::wrong_audit_reveal);
    CHECK(config_digest(cfg, adv) == config_digest(cfg, adv));
    AdversaryConfig other = adv;
    other.tallier_policy = TallierPolicy::silent;
    CHECK(config_digest(cfg, adv) != config_digest(cfg, other));

    CHECK_THROWS_AS(parse_config("[election]\nbackend = tiny_test\nn_v = 20\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[election]\nn_choices = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[election]\nweights = 0.9, 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[adversary]\ntallier_policy = nonsense\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[election]\nbroken line\n"), ConfigError);
}

TEST_CASE("complexity probe reports exact linear growth in n_t") {
    auto [rows, csv] = complexity_probe(2, 3);
    REQUIRE(rows.size() == 4);
    for (const ProbeRow& row : rows) {
        CHECK(row.voter_msgs == 2 * row.k * row.n_t + row.n_t);
        CHECK(row.voter_msgs <= row.bound);
        CHECK(row.voter_msgs % row.n_t == 0);
        CHECK(row.voter_msgs / row.n_t == 2 * row.k + 1);
    }
    CHECK(csv.rfind("n_t,k,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
