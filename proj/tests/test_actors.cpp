#include <catch2/catch_amalgamated.hpp>

#include "ace/actors.hpp"

using namespace ace;

namespace {

struct Env {
    GroupParams pp;
    ElectionContext ctx;
    PhaseSchedule sched{1, 200, 220, 240};
    Rng rng{11};
    KeyPair ec_key;
    std::vector<VoterState> voters;
    std::vector<TallierState> talliers;
    Rng des_rng{777};
    KeyPair des_key;
    Board board;
    ParamsRecordData roll;

    Env(uint32_t n_v, uint32_t n_t, uint32_t k)
        : pp(derive_params(Backend::tiny_test, 2, to_bytes("ace-v1"))),
          ctx(make_context(pp, to_bytes("eid"), n_v, n_t)),
          ec_key(keygen(pp, rng)),
          des_key(keygen(pp, des_rng)),
          board(pp, sched, ec_key, Rng(5)) {
        for (uint32_t v = 0; v < n_v; ++v) {
            VoterState st;
            st.id = v;
            st.strategy = AuditStrategy::fixed(k);
            st.rng = Rng(100 + v);
            st.key = keygen(pp, st.rng);
            st.vote.coords = v % 2 == 0 ? std::vector<Bigint>{1, 0} : std::vector<Bigint>{0, 1};
            voters.push_back(std::move(st));
        }
        for (uint32_t j = 0; j < n_t; ++j) {
            TallierState st;
            st.id = j;
            st.rng = Rng(500 + j);
            st.key = keygen(pp, st.rng);
            talliers.push_back(std::move(st));
        }
        roll.backend = pp.backend;
        roll.n_choices = 2;
        roll.domain_tag = pp.domain_tag;
        roll.params_hash = pp.params_hash;
        roll.n_v = n_v;
        roll.n_t = n_t;
        roll.election_id = ctx.election_id;
        roll.schedule = sched;
        roll.ec_pk = pp.enc_element(ec_key.pk);
        for (const VoterState& v : voters) roll.voter_pks.push_back(pp.enc_element(v.key.pk));
        for (const TallierState& t : talliers) roll.tallier_pks.push_back(pp.enc_element(t.key.pk));
        roll.designated_pk = pp.enc_element(des_key.pk);
        Rng ec_rng(99);
        board.append_signed(EntryKind::params_record, roll.encode(),
                            ActorId{ActorId::Role::ec, 0}, ec_key, ec_rng);
        board.advance(1);
    }

    Decision step(uint32_t v) {
        VoterState& st = voters[v];
        VoterRoundOut out = voter_prepare_round(st, ctx);
        for (uint32_t j = 0; j < ctx.n_t; ++j)
            REQUIRE(tallier_on_commitment(talliers[j], ctx, out.msgs[j], out.proof_vote, st.key.pk,
                                          board));
        std::optional<Decision> dec = voter_decide(st, ctx, board);
        REQUIRE(dec.has_value());
        if (*dec == Decision::audit) {
            std::vector<std::optional<RevealMsg>> reveals(ctx.n_t);
            for (uint32_t j = 0; j < ctx.n_t; ++j)
                reveals[j] = tallier_on_audit(talliers[j], ctx, v, board);
            AuditOutcome ao = voter_check_audit(st, ctx, reveals, board);
            REQUIRE(ao.ok);
        } else {
            board.append_signed(EntryKind::cast_final, CastFinalData{v, st.cast_round}.encode(),
                                ActorId{ActorId::Role::voter, v}, st.key, st.rng);
            for (OpeningMsg& m : voter_open(st, ctx))
                REQUIRE_FALSE(
                    tallier_on_cast_and_opening(talliers[m.tallier], ctx, m, st.key.pk, board));
        }
        return *dec;
    }

    DesignatedResult finish() {
        board.advance(sched.tally_start);
        for (TallierState& t : talliers) tallier_mark_missing_openings(t, board);
        talliers_sync_validate(talliers, ctx, board);
        board.advance(sched.result_start);
        std::vector<AggregateMsg> aggs;
        for (TallierState& t : talliers)
            aggs.push_back(tallier_sign_aggregate(t, ctx, tallier_aggregate(t, ctx)));
        DesignatedResult res = designated_check_and_reconstruct(ctx, aggs, board);
        if (res.ok) designated_publish_result(ctx, res, des_key, des_rng, board);
        board.advance(sched.verification_start);
        return res;
    }
};

}  // namespace

TEST_CASE("PoIO inequality on worked small-group values") {
    GroupParams pp = derive_params(Backend::tiny_test, 2, to_bytes("ace-v1"));
    // rerand(6, 2) = 6 * 3^2 mod 23 = 8, so a published 1 does not open
    CHECK(poio_inequality_holds(pp, 6, 1, 2));
    // rerand(6, 3) = 6 * 27 mod 23 = 1, a correct reveal
    CHECK_FALSE(poio_inequality_holds(pp, 6, 1, 3));
}

TEST_CASE("voter round shape and lifecycle guards") {
    Env env(1, 3, 4);
    VoterState& st = env.voters[0];
    CHECK_THROWS_AS(voter_open(st, env.ctx), std::logic_error);

    VoterRoundOut out = voter_prepare_round(st, env.ctx);
    CHECK(out.msgs.size() == 3);
    CHECK(st.round == 1);
    CHECK_FALSE(out.proof_vote.empty());
    for (uint32_t j = 0; j < 3; ++j) {
        CHECK(out.msgs[j].tallier == j);
        CHECK(out.msgs[j].round == 1);
        CHECK(verify_sig(env.pp, st.key.pk,
                         msg::commit_body(env.pp, env.ctx.election_id, 0, j, 1, out.msgs[j].c),
                         out.msgs[j].sig));
    }

    // a forged commit signature is dropped without a board entry
    CommitMsg bad = out.msgs[0];
    bad.sig.response = env.pp.add_q(bad.sig.response, 1);
    CHECK_FALSE(tallier_on_commitment(env.talliers[0], env.ctx, bad, out.proof_vote, st.key.pk,
                                      env.board));
    CHECK(env.board.read(EntryKind::blinded_commitment).empty());

    // non-one-hot own vote is refused before anything leaves the voter
    VoterState cheat = env.voters[0];
    cheat.round = 0;
    cheat.vote.coords = {1, 1};
    CHECK_THROWS_AS(voter_prepare_round(cheat, env.ctx), std::invalid_argument);
}

TEST_CASE("fixed-k strategy audits k-1 rounds then casts") {
    Env env(1, 2, 4);
    std::vector<Decision> decisions;
    while (!env.voters[0].finalized) decisions.push_back(env.step(0));
    REQUIRE(decisions.size() == 4);
    CHECK(decisions[0] == Decision::audit);
    CHECK(decisions[1] == Decision::audit);
    CHECK(decisions[2] == Decision::audit);
    CHECK(decisions[3] == Decision::cast);
    CHECK(env.voters[0].cast_round == 4);
    // each audited round leaves one discard record per tallier
    CHECK(env.board.read(EntryKind::audit_discard).size() == 3 * 2);
    // every round published a fresh blinded commitment per tallier
    CHECK(env.board.read(EntryKind::blinded_commitment).size() == 4 * 2);

    Env quick(1, 1, 1);
    CHECK(quick.step(0) == Decision::cast);
    CHECK(quick.voters[0].cast_round == 1);
}

TEST_CASE("published blinding opens the true commitment and stays unique") {
    GroupParams pp = derive_params(Backend::production, 2, to_bytes("ace-v1"));
    ElectionContext ctx = make_context(pp, to_bytes("eid"), 1, 1);
    Rng rng(3);
    KeyPair ec = keygen(pp, rng);
    PhaseSchedule sched{1, 200, 220, 240};
    Board board(pp, sched, ec, Rng(4));
    ParamsRecordData roll;
    roll.backend = pp.backend;
    roll.n_choices = 2;
    roll.domain_tag = pp.domain_tag;
    roll.params_hash = pp.params_hash;
    roll.n_v = 1;
    roll.n_t = 1;
    roll.election_id = ctx.election_id;
    roll.schedule = sched;
    VoterState voter;
    voter.id = 0;
    voter.strategy = AuditStrategy::fixed(3);
    voter.rng = Rng(10);
    voter.key = keygen(pp, voter.rng);
    voter.vote.coords = {1, 0};
    TallierState tallier;
    tallier.id = 0;
    tallier.rng = Rng(20);
    tallier.key = keygen(pp, tallier.rng);
    roll.ec_pk = pp.enc_element(ec.pk);
    roll.voter_pks.push_back(pp.enc_element(voter.key.pk));
    roll.tallier_pks.push_back(pp.enc_element(tallier.key.pk));
    roll.designated_pk = pp.enc_element(ec.pk);
    Rng ec_rng(99);
    board.append_signed(EntryKind::params_record, roll.encode(), ActorId{ActorId::Role::ec, 0},
                        ec, ec_rng);
    board.advance(1);

    for (int round = 0; round < 3; ++round) {
        VoterRoundOut out = voter_prepare_round(voter, ctx);
        REQUIRE(tallier_on_commitment(tallier, ctx, out.msgs[0], out.proof_vote, voter.key.pk,
                                      board));
        const TallierState::Session& s = tallier.sessions.at(0);
        BlindedCommitmentData d = BlindedCommitmentData::decode(
            pp, board.read(EntryKind::blinded_commitment).back().payload);
        CHECK(d.c_tilde == rerand(pp, Commitment{s.c}, s.r_tilde).element);
        CHECK(derand(pp, Commitment{d.c_tilde}, s.r_tilde).element == out.msgs[0].c);
        if (round < 2) tallier_on_audit(tallier, ctx, 0, board);
    }
    std::set<Bigint> blindings(tallier.issued_blindings.begin(), tallier.issued_blindings.end());
    CHECK(blindings.size() == 3);
}

TEST_CASE("honest three-voter election is accepted with the right tally") {
    Env env(3, 2, 2);
    for (uint32_t v = 0; v < 3; ++v)
        while (!env.voters[v].finalized) env.step(v);
    DesignatedResult res = env.finish();
    REQUIRE(res.ok);
    REQUIRE(res.tally.size() == 2);
    CHECK(res.tally[0] == 2);
    CHECK(res.tally[1] == 1);

    auto records = env.board.read(EntryKind::result_record);
    REQUIRE(records.size() == 1);
    CHECK(ResultRecordData::decode(env.pp, records[0].payload).winner == 0);
    CHECK(env.board.read(EntryKind::vote_validity).size() == 3);

    Verdict verdict = judge_verify(env.board.transcript());
    INFO(verdict.reason);
    CHECK(verdict.accept);
}

TEST_CASE("wrong audit reveal yields a PoIO the judge upholds") {
    Env env(1, 2, 2);
    VoterState& st = env.voters[0];
    VoterRoundOut out = voter_prepare_round(st, env.ctx);
    for (uint32_t j = 0; j < 2; ++j)
        REQUIRE(tallier_on_commitment(env.talliers[j], env.ctx, out.msgs[j], out.proof_vote,
                                      st.key.pk, env.board));
    REQUIRE(voter_decide(st, env.ctx, env.board) == Decision::audit);

    std::vector<std::optional<RevealMsg>> reveals(2);
    reveals[0] = tallier_on_audit(env.talliers[0], env.ctx, 0, env.board);
    Bigint wrong = env.pp.add_q(env.talliers[1].sessions.at(0).r_tilde, 1);
    reveals[1] = tallier_on_audit(env.talliers[1], env.ctx, 0, env.board, &wrong);

    AuditOutcome ao = voter_check_audit(st, env.ctx, reveals, env.board);
    REQUIRE_FALSE(ao.ok);
    REQUIRE(ao.poio.has_value());
    CHECK(ao.poio->kind == PoioKind::bad_reveal);
    CHECK(ao.poio->tallier == 1);
    CHECK(verify_poio(env.pp, env.roll, env.ctx.election_id, *ao.poio, env.board.entries()));

    // the same evidence with a blinded commitment the board never carried
    PoioData dangling = *ao.poio;
    RevealMsg fake;
    fake.c_tilde = env.pp.mul(dangling.c_tilde, env.pp.h);
    dangling.tallier_sig_reveal = sign(
        env.pp, env.talliers[1].key,
        msg::reveal_body(env.pp, env.ctx.election_id, 0, 1, dangling.round, fake.c_tilde,
                         dangling.r_tilde),
        env.talliers[1].rng);
    dangling.c_tilde = fake.c_tilde;
    CHECK_FALSE(
        verify_poio(env.pp, env.roll, env.ctx.election_id, dangling, env.board.entries()));

    env.board.append_signed(EntryKind::poio, ao.poio->encode(env.pp),
                            ActorId{ActorId::Role::voter, 0}, st.key, st.rng);
    Verdict verdict = judge_verify(env.board.transcript());
    REQUIRE_FALSE(verdict.accept);
    REQUIRE(verdict.blamed.has_value());
    CHECK(verdict.blamed->role == ActorId::Role::tallier);
    CHECK(verdict.blamed->index == 1);
}

TEST_CASE("a silent tallier is blamed from the signed audit request") {
    Env env(1, 2, 2);
    VoterState& st = env.voters[0];
    PoioSilenceData s;
    s.voter = 0;
    s.tallier = 1;
    s.round = 1;
    s.voter_sig_request =
        sign(env.pp, st.key, msg::audit_req_body(env.ctx.election_id, 0, 1, 1), st.rng);
    env.board.append_signed(EntryKind::poio_silence, s.encode(env.pp),
                            ActorId{ActorId::Role::voter, 0}, st.key, st.rng);
    Verdict verdict = judge_verify(env.board.transcript());
    REQUIRE_FALSE(verdict.accept);
    REQUIRE(verdict.blamed.has_value());
    CHECK(verdict.blamed->role == ActorId::Role::tallier);
    CHECK(verdict.blamed->index == 1);
}

TEST_CASE("a bad opening excludes the voter and the election continues") {
    Env env(2, 1, 1);
    REQUIRE(env.step(0) == Decision::cast);  // voter 0 honest

    VoterState& st = env.voters[1];
    VoterRoundOut out = voter_prepare_round(st, env.ctx);
    REQUIRE(tallier_on_commitment(env.talliers[0], env.ctx, out.msgs[0], out.proof_vote,
                                  st.key.pk, env.board));
    REQUIRE(voter_decide(st, env.ctx, env.board) == Decision::cast);
    env.board.append_signed(EntryKind::cast_final, CastFinalData{1, st.cast_round}.encode(),
                            ActorId{ActorId::Role::voter, 1}, st.key, st.rng);
    OpeningMsg bad;
    bad.voter = 1;
    bad.tallier = 0;
    bad.round = st.cast_round;
    bad.coords = st.secrets.shares[0].coords;
    bad.coords[0] = env.pp.add_q(bad.coords[0], 1);
    bad.r = st.secrets.randomness[0];
    bad.sig = sign(env.pp, st.key,
                   msg::opening_body(env.pp, env.ctx.election_id, 1, 0, bad.round, bad.coords,
                                     bad.r),
                   st.rng);
    std::optional<PoioData> pd =
        tallier_on_cast_and_opening(env.talliers[0], env.ctx, bad, st.key.pk, env.board);
    REQUIRE(pd.has_value());
    CHECK(pd->kind == PoioKind::bad_opening);
    CHECK(verify_poio(env.pp, env.roll, env.ctx.election_id, *pd, env.board.entries()));
    env.board.append_signed(EntryKind::poio, pd->encode(env.pp),
                            ActorId{ActorId::Role::tallier, 0}, env.talliers[0].key,
                            env.talliers[0].rng);

    DesignatedResult res = env.finish();
    REQUIRE(res.ok);
    CHECK(res.tally[0] == 1);  // only voter 0 counted
    CHECK(res.tally[1] == 0);
    Verdict verdict = judge_verify(env.board.transcript());
    INFO(verdict.reason);
    CHECK(verdict.accept);
}
