/****************************************************************************
full-election simulator over the bulletin board, adversary policy
injection, plaintext oracle, soundness / forgery / complexity
experiments, and a transcript mutation tool for judge testing
*****************************************************************************/
#ifndef ACE_HARNESS_HPP_
#define ACE_HARNESS_HPP_

#include "ace/config.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace ace {

struct RunMetrics {
    std::vector<uint32_t> voter_msgs;  // per voter, over the whole run
    uint32_t tallier_msgs = 0;
    uint32_t designated_msgs = 0;
    uint32_t sync_messages = 0;
    uint32_t board_entries = 0;
    uint32_t poio_count = 0;
    uint32_t double_vote_attempts = 0;
    uint32_t double_vote_rejected = 0;
    std::vector<std::string> detections;
    Verdict verdict;
    std::optional<uint32_t> winner;           // as published on the board
    std::vector<uint64_t> protocol_tally;     // designated reconstruction T
    double elapsed_seconds = 0;
};

struct RunOutcome {
    Transcript transcript;
    RunMetrics metrics;
    std::vector<uint32_t> choices;        // sampled plaintext choices per voter
    std::vector<uint64_t> oracle_tally;   // over voters the protocol accepted
    uint32_t oracle_winner = 0;
    Bytes observables;                    // every public byte of the run
    std::vector<Bytes> secret_blobs;      // honest share/randomness encodings
};

struct OracleResult {
    std::vector<uint64_t> tally;
    uint32_t winner = 0;
};

inline OracleResult plaintext_oracle(const std::vector<uint32_t>& choices, uint32_t n_choices) {
    OracleResult r;
    r.tally.assign(n_choices, 0);
    for (uint32_t c : choices) {
        if (c >= n_choices) throw std::invalid_argument("plaintext_oracle: choice out of range");
        r.tally[c] += 1;
    }
    for (uint32_t k = 1; k < n_choices; ++k)
        if (r.tally[k] > r.tally[r.winner]) r.winner = k;
    return r;
}

namespace detail {

inline uint32_t sample_choice(Rng& rng, const ElectionConfig& cfg) {
    if (cfg.weights.empty())
        return rng.below(cfg.n_choices).convert_to<uint32_t>();
    double u = rng.uniform();
    double acc = 0;
    for (uint32_t i = 0; i < cfg.n_choices; ++i) {
        acc += cfg.weights[i];
        if (u < acc) return i;
    }
    return cfg.n_choices - 1;
}

// a two-hot vote with consistent shares but a garbage validity proof
inline VoterRoundOut malicious_prepare_round(VoterState& st, const ElectionContext& ctx) {
    st.round += 1;
    size_t n = ctx.pp.n_choices();
    BallotSecrets sec;
    sec.vote.coords.assign(n, 0);
    sec.vote.coords[0] = 1;
    sec.vote.coords[1] = 1;
    sec.shares.assign(ctx.n_t, VoteShare{std::vector<Bigint>(n, 0)});
    for (size_t k = 0; k < n; ++k) {
        Bigint acc = 0;
        for (uint32_t j = 0; j + 1 < ctx.n_t; ++j) {
            Bigint x = ctx.pp.random_scalar(st.rng);
            sec.shares[j].coords[k] = x;
            acc = ctx.pp.add_q(acc, x);
        }
        sec.shares[ctx.n_t - 1].coords[k] = ctx.pp.sub_q(sec.vote.coords[k], acc);
    }
    for (uint32_t j = 0; j < ctx.n_t; ++j) sec.randomness.push_back(ctx.pp.random_scalar(st.rng));
    st.secrets = std::move(sec);
    st.commitments.clear();
    st.commit_sigs.clear();
    for (uint32_t j = 0; j < ctx.n_t; ++j)
        st.commitments.push_back(comm_vec(ctx.pp, st.secrets.shares[j], st.secrets.randomness[j]));
    st.proof_vote = encode_proof_vote(ctx.pp, garbage_vote_proof(ctx.pp, st.rng));

    VoterRoundOut out;
    out.proof_vote = st.proof_vote;
    for (uint32_t j = 0; j < ctx.n_t; ++j) {
        CommitMsg m;
        m.voter = st.id;
        m.tallier = j;
        m.round = st.round;
        m.c = st.commitments[j].element;
        m.sig = sign(ctx.pp, st.key,
                     msg::commit_body(ctx.pp, ctx.election_id, st.id, j, st.round, m.c), st.rng);
        st.commit_sigs.push_back(m.sig);
        out.msgs.push_back(std::move(m));
    }
    return out;
}

// honest openings with the first coordinate of every share shifted by one
inline std::vector<OpeningMsg> corrupted_openings(VoterState& st, const ElectionContext& ctx) {
    if (!st.finalized) throw std::logic_error("corrupted_openings: no finalized CAST");
    std::vector<OpeningMsg> out;
    for (uint32_t j = 0; j < ctx.n_t; ++j) {
        OpeningMsg m;
        m.voter = st.id;
        m.tallier = j;
        m.round = st.cast_round;
        m.coords = st.secrets.shares[j].coords;
        m.coords[0] = ctx.pp.add_q(m.coords[0], 1);
        m.r = st.secrets.randomness[j];
        m.sig = sign(ctx.pp, st.key,
                     msg::opening_body(ctx.pp, ctx.election_id, st.id, j, st.cast_round, m.coords,
                                       m.r),
                     st.rng);
        out.push_back(std::move(m));
    }
    return out;
}

// substitution material guaranteed to differ from the voter's commitment
inline BallotSwap make_swap(const GroupParams& pp, TallierState& t, const Bigint& true_c) {
    BallotSwap sw;
    sw.share.coords.assign(pp.n_choices(), 0);
    sw.share.coords[0] = 1;
    sw.r = pp.random_scalar(t.rng);
    while (comm_vec(pp, sw.share, sw.r).element == true_c) sw.r = pp.add_q(sw.r, 1);
    return sw;
}

}  // namespace detail

inline RunOutcome run_election(const ElectionConfig& cfg, const AdversaryConfig& adv) {
    auto started = std::chrono::steady_clock::now();
    validate_config(cfg);
    GroupParams pp = derive_params(cfg.backend, cfg.n_choices, cfg.domain_tag);
    PhaseSchedule schedule = effective_schedule(cfg);
    ElectionContext ctx = make_context(pp, cfg.election_id, cfg.n_v, cfg.n_t);

    Rng master(cfg.seed);
    Rng ec_rng = master.fork(1);
    KeyPair ec_key = keygen(pp, ec_rng);

    RunOutcome out;
    out.metrics.voter_msgs.assign(cfg.n_v, 0);

    auto corrupted_tallier = [&](uint32_t j) {
        return adv.tallier_policy != TallierPolicy::honest && adv.corrupted_talliers.count(j) > 0;
    };
    auto corrupted_voter = [&](uint32_t v) {
        return adv.voter_policy != VoterPolicy::honest && adv.corrupted_voters.count(v) > 0;
    };

    std::vector<VoterState> voters;
    Rng vote_rng = master.fork(2);
    for (uint32_t v = 0; v < cfg.n_v; ++v) {
        VoterState st;
        st.id = v;
        st.strategy = cfg.strategy;
        st.rng = master.fork(1000 + v);
        st.key = keygen(pp, st.rng);
        uint32_t choice = detail::sample_choice(vote_rng, cfg);
        out.choices.push_back(choice);
        st.vote.coords.assign(cfg.n_choices, 0);
        st.vote.coords[choice] = 1;
        voters.push_back(std::move(st));
    }
    std::vector<TallierState> talliers;
    for (uint32_t j = 0; j < cfg.n_t; ++j) {
        TallierState st;
        st.id = j;
        st.rng = master.fork(2000 + j);
        st.key = keygen(pp, st.rng);
        talliers.push_back(std::move(st));
    }
    Rng des_rng = master.fork(3000);
    KeyPair des_key = keygen(pp, des_rng);

    Board board(pp, schedule, ec_key, master.fork(4));
    board.set_config_digest(config_digest(cfg, adv));
    ParamsRecordData roll;
    roll.backend = cfg.backend;
    roll.n_choices = cfg.n_choices;
    roll.domain_tag = cfg.domain_tag;
    roll.params_hash = pp.params_hash;
    roll.n_v = cfg.n_v;
    roll.n_t = cfg.n_t;
    roll.election_id = cfg.election_id;
    roll.schedule = schedule;
    roll.config_digest = config_digest(cfg, adv);
    roll.ec_pk = pp.enc_element(ec_key.pk);
    for (const VoterState& v : voters) roll.voter_pks.push_back(pp.enc_element(v.key.pk));
    for (const TallierState& t : talliers) roll.tallier_pks.push_back(pp.enc_element(t.key.pk));
    roll.designated_pk = pp.enc_element(des_key.pk);
    board.append_signed(EntryKind::params_record, roll.encode(), ActorId{ActorId::Role::ec, 0},
                        ec_key, ec_rng);

    // --- Voting: one atomic voter round per tick, shuffled sweep order ------
    uint64_t tick = schedule.voting_start;
    board.advance(tick);
    std::vector<char> stalled(cfg.n_v, 0);
    std::vector<uint32_t> order(cfg.n_v);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 sched_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);

    auto process_voter_round = [&](uint32_t v) {
        VoterState& st = voters[v];
        VoterRoundOut round_out = corrupted_voter(v) &&
                                          adv.voter_policy == VoterPolicy::invalid_vote_garbage_proof
                                      ? detail::malicious_prepare_round(st, ctx)
                                      : voter_prepare_round(st, ctx);
        out.metrics.voter_msgs[v] += cfg.n_t;
        for (uint32_t j = 0; j < cfg.n_t; ++j) {
            if (corrupted_tallier(j) && adv.tallier_policy == TallierPolicy::silent) continue;
            BallotSwap sw;
            const BallotSwap* swp = nullptr;
            if (corrupted_tallier(j) && adv.tallier_policy == TallierPolicy::always_swap_commitment) {
                sw = detail::make_swap(pp, talliers[j], round_out.msgs[j].c);
                swp = &sw;
            }
            if (tallier_on_commitment(talliers[j], ctx, round_out.msgs[j], round_out.proof_vote,
                                      st.key.pk, board, swp))
                out.metrics.tallier_msgs += 1;
        }
        uint32_t seen = 0;
        for (const BoardEntry& e : board.read(EntryKind::blinded_commitment, v))
            if (BlindedCommitmentData::decode(pp, e.payload).round == st.round) ++seen;
        out.metrics.voter_msgs[v] += cfg.n_t;  // audit requests or cast signals
        if (seen < cfg.n_t) {
            uint32_t missing = 0;
            for (uint32_t j = 0; j < cfg.n_t; ++j) {
                bool found = false;
                for (const BoardEntry& e : board.read(EntryKind::blinded_commitment, v)) {
                    BlindedCommitmentData d = BlindedCommitmentData::decode(pp, e.payload);
                    if (d.tallier == j && d.round == st.round) found = true;
                }
                if (!found) {
                    missing = j;
                    break;
                }
            }
            PoioSilenceData s;
            s.voter = v;
            s.tallier = missing;
            s.round = st.round;
            s.voter_sig_request = sign(
                pp, st.key, msg::audit_req_body(cfg.election_id, v, missing, st.round), st.rng);
            board.append_signed(EntryKind::poio_silence, s.encode(pp),
                                ActorId{ActorId::Role::voter, v}, st.key, st.rng);
            out.metrics.poio_count += 1;
            out.metrics.detections.push_back("poio_silence: tallier " + std::to_string(missing) +
                                             " ignored voter " + std::to_string(v));
            stalled[v] = 1;
            return;
        }
        std::optional<Decision> dec = voter_decide(st, ctx, board);
        if (!dec) {
            stalled[v] = 1;
            return;
        }
        if (*dec == Decision::audit) {
            std::vector<std::optional<RevealMsg>> reveals(cfg.n_t);
            for (uint32_t j = 0; j < cfg.n_t; ++j) {
                Bigint wrong;
                const Bigint* wrongp = nullptr;
                if (corrupted_tallier(j) && adv.tallier_policy == TallierPolicy::wrong_audit_reveal) {
                    wrong = pp.add_q(talliers[j].sessions.at(v).r_tilde, 1);
                    wrongp = &wrong;
                }
                reveals[j] = tallier_on_audit(talliers[j], ctx, v, board, wrongp);
                if (reveals[j]) out.metrics.tallier_msgs += 1;
            }
            AuditOutcome ao = voter_check_audit(st, ctx, reveals, board);
            if (!ao.ok) {
                if (ao.poio) {
                    board.append_signed(EntryKind::poio, ao.poio->encode(pp),
                                        ActorId{ActorId::Role::voter, v}, st.key, st.rng);
                    out.metrics.detections.push_back(
                        "poio bad_reveal: tallier " + std::to_string(ao.poio->tallier) +
                        " caught by voter " + std::to_string(v));
                } else if (ao.silence) {
                    board.append_signed(EntryKind::poio_silence, ao.silence->encode(pp),
                                        ActorId{ActorId::Role::voter, v}, st.key, st.rng);
                    out.metrics.detections.push_back("poio_silence: tallier " +
                                                     std::to_string(ao.silence->tallier));
                }
                out.metrics.poio_count += 1;
                stalled[v] = 1;
            }
            return;
        }
        // CAST
        board.append_signed(EntryKind::cast_final, CastFinalData{v, st.cast_round}.encode(),
                            ActorId{ActorId::Role::voter, v}, st.key, st.rng);
        if (corrupted_voter(v) && adv.voter_policy == VoterPolicy::double_vote_attempt) {
            out.metrics.double_vote_attempts += 1;
            try {
                board.append_signed(EntryKind::cast_final,
                                    CastFinalData{v, st.cast_round}.encode(),
                                    ActorId{ActorId::Role::voter, v}, st.key, st.rng);
            } catch (const BoardError& e) {
                if (e.code == BoardErrorCode::duplicate_vote) {
                    out.metrics.double_vote_rejected += 1;
                    out.metrics.detections.push_back("double vote rejected: voter " +
                                                     std::to_string(v));
                }
            }
            out.metrics.double_vote_attempts += 1;
            bool any_accepted = false;
            for (uint32_t j = 0; j < cfg.n_t; ++j) {
                CommitMsg m;
                m.voter = v;
                m.tallier = j;
                m.round = st.cast_round + 1;
                m.c = st.commitments[j].element;
                m.sig = sign(pp, st.key,
                             msg::commit_body(pp, cfg.election_id, v, j, m.round, m.c), st.rng);
                if (tallier_on_commitment(talliers[j], ctx, m, st.proof_vote, st.key.pk, board))
                    any_accepted = true;
            }
            if (!any_accepted) {
                out.metrics.double_vote_rejected += 1;
                out.metrics.detections.push_back("re-vote commitments refused: voter " +
                                                 std::to_string(v));
            }
        }
        std::vector<OpeningMsg> openings =
            corrupted_voter(v) && adv.voter_policy == VoterPolicy::wrong_opening
                ? detail::corrupted_openings(st, ctx)
                : voter_open(st, ctx);
        out.metrics.voter_msgs[v] += cfg.n_t;
        for (uint32_t j = 0; j < cfg.n_t; ++j) {
            if (corrupted_tallier(j) && adv.tallier_policy == TallierPolicy::silent) continue;
            std::optional<PoioData> pd =
                tallier_on_cast_and_opening(talliers[j], ctx, openings[j], st.key.pk, board);
            if (pd) {
                board.append_signed(EntryKind::poio, pd->encode(pp),
                                    ActorId{ActorId::Role::tallier, j}, talliers[j].key,
                                    talliers[j].rng);
                out.metrics.poio_count += 1;
                out.metrics.detections.push_back("poio bad_opening: voter " + std::to_string(v) +
                                                 " caught by tallier " + std::to_string(j));
            }
        }
    };

    uint64_t sweeps = 0;
    while (sweeps < 100000) {
        bool pending = false;
        for (uint32_t v = 0; v < cfg.n_v; ++v)
            if (!voters[v].finalized && !stalled[v]) pending = true;
        if (!pending) break;
        std::shuffle(order.begin(), order.end(), sched_rng);
        for (uint32_t v : order) {
            if (voters[v].finalized || stalled[v]) continue;
            if (tick + 1 >= schedule.tally_start) break;
            process_voter_round(v);
            board.advance(++tick);
        }
        if (tick + 1 >= schedule.tally_start) break;
        ++sweeps;
    }

    // --- Tally ----------------------------------------------------------------
    board.advance(schedule.tally_start);
    for (TallierState& t : talliers) tallier_mark_missing_openings(t, board);
    SyncValidateStats sync = talliers_sync_validate(talliers, ctx, board);
    out.metrics.sync_messages = sync.messages;
    out.metrics.tallier_msgs += sync.messages;

    // --- Result -----------------------------------------------------------------
    board.advance(schedule.result_start);
    std::vector<AggregateMsg> aggs;
    for (uint32_t j = 0; j < cfg.n_t; ++j) {
        if (corrupted_tallier(j) && adv.tallier_policy == TallierPolicy::silent) continue;
        TallierAggregate agg = tallier_aggregate(talliers[j], ctx);
        if (corrupted_tallier(j) && adv.tallier_policy == TallierPolicy::wrong_aggregate)
            agg.v_perp[0] = pp.add_q(agg.v_perp[0], 1);
        aggs.push_back(tallier_sign_aggregate(talliers[j], ctx, agg));
        out.metrics.tallier_msgs += 1;
    }
    DesignatedResult dres = designated_check_and_reconstruct(ctx, aggs, board);
    if (!dres.ok) {
        board.append_signed(EntryKind::poio, dres.blame->encode(pp),
                            ActorId{ActorId::Role::designated, 0}, des_key, des_rng);
        out.metrics.poio_count += 1;
        out.metrics.detections.push_back("poio bad_aggregate: tallier " +
                                         std::to_string(dres.blame->tallier));
    } else {
        for (const Bigint& x : dres.tally)
            out.metrics.protocol_tally.push_back(x.convert_to<uint64_t>());
        uint32_t true_winner = static_cast<uint32_t>(lowest_argmax(dres.tally));
        switch (adv.designated_policy) {
            case DesignatedPolicy::honest:
                designated_publish_result(ctx, dres, des_key, des_rng, board);
                out.metrics.winner = true_winner;
                break;
            case DesignatedPolicy::wrong_winner: {
                ResultRecordData d;
                d.winner = (true_winner + 1) % cfg.n_choices;
                d.r_tilde_perp = dres.rt_perp;
                d.proof_result =
                    encode_proof_result(pp, garbage_result_proof(pp, cfg.n_v, des_rng));
                board.append_signed(EntryKind::result_record, d.encode(pp),
                                    ActorId{ActorId::Role::designated, 0}, des_key, des_rng);
                out.metrics.winner = d.winner;
                break;
            }
            case DesignatedPolicy::wrong_rtilde: {
                ProofResult pr = prove_result(ctx.result_ctx, pp, dres.tally, dres.r_perp,
                                              dres.c_perp, true_winner, cfg.n_v, des_rng);
                ResultRecordData d;
                d.winner = true_winner;
                d.r_tilde_perp = pp.add_q(dres.rt_perp, 1);
                d.proof_result = encode_proof_result(pp, pr);
                board.append_signed(EntryKind::result_record, d.encode(pp),
                                    ActorId{ActorId::Role::designated, 0}, des_key, des_rng);
                out.metrics.winner = true_winner;
                break;
            }
        }
        out.metrics.designated_msgs += 1;
    }

    // --- Verification -------------------------------------------------------
    board.advance(schedule.verification_start);
    out.transcript = board.transcript();
    out.metrics.board_entries = static_cast<uint32_t>(out.transcript.entries.size());
    out.metrics.verdict = judge_verify(out.transcript);

    std::map<uint32_t, uint32_t> accepted = accepted_voters(pp, out.transcript.entries);
    out.oracle_tally.assign(cfg.n_choices, 0);
    for (const auto& [v, round] : accepted) out.oracle_tally[out.choices[v]] += 1;
    out.oracle_winner = 0;
    for (uint32_t k = 1; k < cfg.n_choices; ++k)
        if (out.oracle_tally[k] > out.oracle_tally[out.oracle_winner]) out.oracle_winner = k;

    for (const BoardEntry& e : out.transcript.entries) {
        Bytes enc = e.encode();
        out.observables.insert(out.observables.end(), enc.begin(), enc.end());
    }
    for (uint32_t v = 0; v < cfg.n_v; ++v) {
        if (corrupted_voter(v) || !voters[v].finalized) continue;
        for (uint32_t j = 0; j < cfg.n_t; ++j) {
            for (const Bigint& x : voters[v].secrets.shares[j].coords)
                out.secret_blobs.push_back(pp.enc_scalar(x));
            out.secret_blobs.push_back(pp.enc_scalar(voters[v].secrets.randomness[j]));
        }
    }
    out.metrics.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

// --- sequential audit soundness ----------------------------------------------

struct SoundnessStats {
    uint64_t trials = 0;
    uint64_t detected = 0;
    uint64_t undetected = 0;
    uint64_t clean = 0;

    double undetected_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(undetected) / static_cast<double>(trials);
    }
};

// per-trial: a tallier cheats each round with probability cheat_prob by
// substituting the share commitment; rounds 1..k-1 are audited, round k is
// cast, so the undetected corruption rate is cheat_prob-governed (2^-k at 0.5)
inline SoundnessStats audit_soundness_experiment(uint32_t k, uint64_t trials, uint64_t seed,
                                                 double cheat_prob = 0.5) {
    if (k < 1) throw std::invalid_argument("audit_soundness_experiment: k must be positive");
    GroupParams pp = derive_params(Backend::tiny_test, 2, to_bytes("ace-v1"));
    Rng rng(seed);
    SoundnessStats st;
    st.trials = trials;
    VoteShare share{std::vector<Bigint>{1, 0}};
    for (uint64_t trial = 0; trial < trials; ++trial) {
        bool caught = false;
        bool corrupted = false;
        for (uint32_t round = 1; round <= k && !caught; ++round) {
            Bigint r = pp.random_scalar(rng);
            Bigint c = comm_vec(pp, share, r).element;
            bool cheat = rng.coin(cheat_prob);
            Bigint rt = pp.random_scalar(rng);
            Bigint base = cheat ? pp.mul(c, pp.g_vec[1]) : c;
            Bigint ct = rerand(pp, Commitment{base}, rt).element;
            if (round < k) {
                if (poio_inequality_holds(pp, c, ct, rt)) caught = true;
            } else if (cheat) {
                corrupted = true;
            }
        }
        if (caught) st.detected += 1;
        else if (corrupted) st.undetected += 1;
        else st.clean += 1;
    }
    return st;
}

// --- receipt forgery ----------------------------------------------------------

struct ForgeryStats {
    uint64_t trials = 0;
    uint64_t forged = 0;

    double rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(forged) / static_cast<double>(trials);
    }
};

// one trial forges every share of a ballot: with the true trapdoor every
// forged witness opens the blinded commitment, with a corrupted table the
// forgery only survives by chance in the small group
inline ForgeryStats receipt_forgery_experiment(uint32_t n_t, uint64_t trials, uint64_t seed,
                                               bool corrupt_trapdoor = false) {
    GroupParams pp = derive_params(Backend::tiny_test, 2, to_bytes("ace-v1"));
    std::vector<Bigint> true_table = *pp.trapdoor;
    Rng rng(seed);
    ForgeryStats st;
    st.trials = trials;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        if (corrupt_trapdoor) {
            std::vector<Bigint> table;
            do {
                table.clear();
                for (size_t k = 0; k < pp.n_choices(); ++k) table.push_back(rng.below(pp.q));
            } while (table == true_table);
            pp.trapdoor = table;
        }
        uint32_t a = rng.below(2).convert_to<uint32_t>();
        VoteVector real_vote{std::vector<Bigint>(2, 0)};
        VoteVector fake_vote{std::vector<Bigint>(2, 0)};
        real_vote.coords[a] = 1;
        fake_vote.coords[1 - a] = 1;
        BallotSecrets real = share_vote(pp, real_vote, n_t, rng);
        BallotSecrets fake = share_vote(pp, fake_vote, n_t, rng);
        bool ok = true;
        for (uint32_t j = 0; j < n_t; ++j) {
            Bigint rt = pp.random_scalar(rng);
            Commitment c = comm_vec(pp, real.shares[j], real.randomness[j]);
            Commitment ct = rerand(pp, c, rt);
            Bigint forged = forge_rerand_witness(pp, ct, fake.shares[j], fake.randomness[j],
                                                 real.shares[j], real.randomness[j], rt);
            if (rerand(pp, comm_vec(pp, fake.shares[j], fake.randomness[j]), forged).element !=
                ct.element)
                ok = false;
        }
        if (ok) st.forged += 1;
    }
    return st;
}

// --- message complexity --------------------------------------------------------

struct ProbeRow {
    uint32_t n_t = 0;
    uint32_t k = 0;
    uint32_t voter_msgs = 0;   // per ballot
    uint32_t bound = 0;        // 3*k*n_t + n_t
    uint32_t tallier_msgs = 0;
    uint32_t board_entries = 0;
};

inline std::pair<std::vector<ProbeRow>, std::string> complexity_probe(uint32_t k, uint64_t seed) {
    std::vector<ProbeRow> rows;
    CsvTable csv({"n_t", "k", "voter_msgs_per_ballot", "bound", "tallier_msgs", "board_entries"});
    for (uint32_t n_t : {1u, 3u, 5u, 10u}) {
        ElectionConfig cfg;
        cfg.backend = Backend::tiny_test;
        cfg.n_v = 3;
        cfg.n_t = n_t;
        cfg.n_choices = 2;
        cfg.strategy = AuditStrategy::fixed(k);
        cfg.seed = seed;
        RunOutcome out = run_election(cfg, AdversaryConfig{});
        ProbeRow row;
        row.n_t = n_t;
        row.k = k;
        row.voter_msgs = out.metrics.voter_msgs[0];
        row.bound = 3 * k * n_t + n_t;
        row.tallier_msgs = out.metrics.tallier_msgs;
        row.board_entries = out.metrics.board_entries;
        rows.push_back(row);
        csv.row({double(row.n_t), double(row.k), double(row.voter_msgs), double(row.bound),
                 double(row.tallier_msgs), double(row.board_entries)});
    }
    return {rows, csv.str()};
}

// --- transcript mutation --------------------------------------------------------

enum class Mutation : uint8_t {
    flip_winner = 0,
    alter_blinded_commitment,
    drop_validity_signature,
    duplicate_cast,
    swap_rtilde_total,
    corrupt_proof_vote,
    corrupt_proof_result,
    break_hash_chain,
};

inline const char* mutation_name(Mutation m) {
    switch (m) {
        case Mutation::flip_winner: return "flip_winner";
        case Mutation::alter_blinded_commitment: return "alter_blinded_commitment";
        case Mutation::drop_validity_signature: return "drop_validity_signature";
        case Mutation::duplicate_cast: return "duplicate_cast";
        case Mutation::swap_rtilde_total: return "swap_rtilde_total";
        case Mutation::corrupt_proof_vote: return "corrupt_proof_vote";
        case Mutation::corrupt_proof_result: return "corrupt_proof_result";
        case Mutation::break_hash_chain: return "break_hash_chain";
    }
    return "?";
}

inline constexpr Mutation kAllMutations[] = {
    Mutation::flip_winner,          Mutation::alter_blinded_commitment,
    Mutation::drop_validity_signature, Mutation::duplicate_cast,
    Mutation::swap_rtilde_total,    Mutation::corrupt_proof_vote,
    Mutation::corrupt_proof_result, Mutation::break_hash_chain,
};

// recompute sequence numbers and the hash chain after a payload edit; the
// entry signatures are left untouched so blame lands on the original signer
inline void rechain(Transcript& t) {
    Bytes tip = board_genesis_hash();
    for (size_t i = 0; i < t.entries.size(); ++i) {
        t.entries[i].seq = static_cast<uint32_t>(i);
        t.entries[i].prev_hash = tip;
        tip = chain_hash(tip, t.entries[i]);
    }
}

inline Transcript apply_mutation(const GroupParams& pp, const Transcript& original, Mutation m) {
    Transcript t = original;
    auto find_idx = [&](EntryKind kind) -> size_t {
        for (size_t i = 0; i < t.entries.size(); ++i)
            if (t.entries[i].kind == kind) return i;
        throw std::logic_error(std::string("apply_mutation: transcript has no target for ") +
                               mutation_name(m));
    };
    switch (m) {
        case Mutation::flip_winner: {
            size_t i = find_idx(EntryKind::result_record);
            ResultRecordData d = ResultRecordData::decode(pp, t.entries[i].payload);
            d.winner = (d.winner + 1) % static_cast<uint32_t>(pp.n_choices());
            t.entries[i].payload = d.encode(pp);
            rechain(t);
            break;
        }
        case Mutation::alter_blinded_commitment: {
            size_t i = find_idx(EntryKind::blinded_commitment);
            BlindedCommitmentData d = BlindedCommitmentData::decode(pp, t.entries[i].payload);
            d.c_tilde = pp.mul(d.c_tilde, pp.h);
            t.entries[i].payload = d.encode(pp);
            rechain(t);
            break;
        }
        case Mutation::drop_validity_signature: {
            size_t i = find_idx(EntryKind::vote_validity);
            VoteValidityData d = VoteValidityData::decode(pp, t.entries[i].payload);
            if (d.sigs.empty()) throw std::logic_error("apply_mutation: empty signature multiset");
            d.sigs.pop_back();
            t.entries[i].payload = d.encode(pp);
            rechain(t);
            break;
        }
        case Mutation::duplicate_cast: {
            size_t i = find_idx(EntryKind::cast_final);
            t.entries.insert(t.entries.begin() + static_cast<long>(i) + 1, t.entries[i]);
            rechain(t);
            break;
        }
        case Mutation::swap_rtilde_total: {
            size_t i = find_idx(EntryKind::result_record);
            ResultRecordData d = ResultRecordData::decode(pp, t.entries[i].payload);
            d.r_tilde_perp = pp.add_q(d.r_tilde_perp, 1);
            t.entries[i].payload = d.encode(pp);
            rechain(t);
            break;
        }
        case Mutation::corrupt_proof_vote: {
            size_t i = find_idx(EntryKind::vote_validity);
            VoteValidityData d = VoteValidityData::decode(pp, t.entries[i].payload);
            d.proof_vote.back() ^= 0x01;
            t.entries[i].payload = d.encode(pp);
            rechain(t);
            break;
        }
        case Mutation::corrupt_proof_result: {
            size_t i = find_idx(EntryKind::result_record);
            ResultRecordData d = ResultRecordData::decode(pp, t.entries[i].payload);
            d.proof_result.back() ^= 0x01;
            t.entries[i].payload = d.encode(pp);
            rechain(t);
            break;
        }
        case Mutation::break_hash_chain: {
            size_t i = t.entries.size() / 2;
            if (i == 0) i = t.entries.size() - 1;
            t.entries[i].prev_hash[0] ^= 0x01;
            break;
        }
    }
    return t;
}

inline Verdict mutate_and_judge(const GroupParams& pp, const Transcript& t, Mutation m) {
    return judge_verify(apply_mutation(pp, t, m));
}

}  // namespace ace

#endif  // ACE_HARNESS_HPP_
