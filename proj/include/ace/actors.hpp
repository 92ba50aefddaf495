/****************************************************************************
voter / tallier / designated-tallier state machines, the typed messages
they exchange, dispute evidence construction and checking, and the
public judge over a finished transcript
*****************************************************************************/
#ifndef ACE_ACTORS_HPP_
#define ACE_ACTORS_HPP_

#include "ace/board.hpp"

namespace ace {

struct ElectionContext {
    GroupParams pp;
    Bytes election_id;
    NizkContext vote_ctx;
    NizkContext result_ctx;
    uint32_t n_v = 0;
    uint32_t n_t = 1;
};

inline ElectionContext make_context(const GroupParams& pp, Bytes election_id, uint32_t n_v,
                                    uint32_t n_t) {
    ElectionContext ctx;
    ctx.pp = pp;
    ctx.election_id = std::move(election_id);
    ctx.vote_ctx = nizk_setup(pp, Relation::vote).first;
    ctx.result_ctx = nizk_setup(pp, Relation::result).first;
    ctx.n_v = n_v;
    ctx.n_t = n_t;
    return ctx;
}

// --- canonical message bodies ----------------------------------------------

namespace msg {

inline Bytes commit_body(const GroupParams& pp, const Bytes& election_id, uint32_t voter,
                         uint32_t tallier, uint32_t round, const Bigint& c) {
    ByteWriter w;
    w.blob(to_bytes("ace-commit"));
    w.blob(election_id);
    w.u32(voter);
    w.u32(tallier);
    w.u32(round);
    w.raw(pp.enc_element(c));
    return w.take();
}

inline Bytes reveal_body(const GroupParams& pp, const Bytes& election_id, uint32_t voter,
                         uint32_t tallier, uint32_t round, const Bigint& c_tilde,
                         const Bigint& r_tilde) {
    ByteWriter w;
    w.blob(to_bytes("ace-reveal"));
    w.blob(election_id);
    w.u32(voter);
    w.u32(tallier);
    w.u32(round);
    w.raw(pp.enc_element(c_tilde));
    w.raw(pp.enc_scalar(r_tilde));
    return w.take();
}

inline Bytes opening_body(const GroupParams& pp, const Bytes& election_id, uint32_t voter,
                          uint32_t tallier, uint32_t round, const std::vector<Bigint>& coords,
                          const Bigint& r) {
    ByteWriter w;
    w.blob(to_bytes("ace-opening"));
    w.blob(election_id);
    w.u32(voter);
    w.u32(tallier);
    w.u32(round);
    w.u32(static_cast<uint32_t>(coords.size()));
    for (const Bigint& x : coords) w.raw(pp.enc_scalar(x));
    w.raw(pp.enc_scalar(r));
    return w.take();
}

inline Bytes audit_req_body(const Bytes& election_id, uint32_t voter, uint32_t tallier,
                            uint32_t round) {
    ByteWriter w;
    w.blob(to_bytes("ace-audit-req"));
    w.blob(election_id);
    w.u32(voter);
    w.u32(tallier);
    w.u32(round);
    return w.take();
}

inline Bytes aggregate_body(const GroupParams& pp, const Bytes& election_id, uint32_t tallier,
                            const std::vector<Bigint>& v_perp, const Bigint& r_perp,
                            const Bigint& rt_perp) {
    ByteWriter w;
    w.blob(to_bytes("ace-aggregate"));
    w.blob(election_id);
    w.u32(tallier);
    w.u32(static_cast<uint32_t>(v_perp.size()));
    for (const Bigint& x : v_perp) w.raw(pp.enc_scalar(x));
    w.raw(pp.enc_scalar(r_perp));
    w.raw(pp.enc_scalar(rt_perp));
    return w.take();
}

}  // namespace msg

struct CommitMsg {
    uint32_t voter = 0;
    uint32_t tallier = 0;
    uint32_t round = 0;
    Bigint c;
    Signature sig;
};

struct RevealMsg {
    uint32_t voter = 0;
    uint32_t tallier = 0;
    uint32_t round = 0;
    Bigint c_tilde;
    Bigint r_tilde;
    Signature sig;
};

struct OpeningMsg {
    uint32_t voter = 0;
    uint32_t tallier = 0;
    uint32_t round = 0;
    std::vector<Bigint> coords;
    Bigint r;
    Signature sig;
};

struct AggregateMsg {
    uint32_t tallier = 0;
    std::vector<Bigint> v_perp;
    Bigint r_perp;
    Bigint rt_perp;
    Signature sig;
};

enum class Decision : uint8_t { audit = 0, cast = 1 };

// --- voter ------------------------------------------------------------------

struct AuditStrategy {
    enum class Kind : uint8_t { fixed_k, geometric };
    Kind kind = Kind::fixed_k;
    uint32_t k = 1;   // fixed_k: audits = k-1, cast on round k
    double p = 0.5;   // geometric: per-round cast probability

    static AuditStrategy fixed(uint32_t k) {
        AuditStrategy s;
        s.kind = Kind::fixed_k;
        s.k = k;
        return s;
    }
    static AuditStrategy geometric(double p) {
        AuditStrategy s;
        s.kind = Kind::geometric;
        s.p = p;
        return s;
    }
};

// number of rounds until CAST under the strategy (support >= 1)
inline uint32_t sample_rounds(const AuditStrategy& strategy, Rng& rng) {
    if (strategy.kind == AuditStrategy::Kind::fixed_k) return strategy.k;
    uint32_t k = 1;
    while (!rng.coin(strategy.p)) ++k;
    return k;
}

struct VoterState {
    uint32_t id = 0;
    VoteVector vote;
    AuditStrategy strategy;
    KeyPair key;
    Rng rng{0};
    uint32_t round = 0;  // 1-based after the first prepare
    BallotSecrets secrets;
    std::vector<Commitment> commitments;  // c^{(j)} for the current round
    std::vector<Signature> commit_sigs;
    Bytes proof_vote;  // encoded ProofVote for the current round
    bool finalized = false;
    uint32_t cast_round = 0;
};

struct VoterRoundOut {
    std::vector<CommitMsg> msgs;
    Bytes proof_vote;
};

// fresh secrets, commitments and validity proof every round
inline VoterRoundOut voter_prepare_round(VoterState& st, const ElectionContext& ctx) {
    if (st.finalized) throw std::logic_error("voter_prepare_round: vote already finalized");
    if (!is_one_hot(ctx.pp, st.vote))
        throw std::invalid_argument("voter_prepare_round: own vote is not a valid choice");
    st.round += 1;
    st.secrets = share_vote(ctx.pp, st.vote, ctx.n_t, st.rng);
    st.commitments.clear();
    st.commit_sigs.clear();
    for (uint32_t j = 0; j < ctx.n_t; ++j)
        st.commitments.push_back(comm_vec(ctx.pp, st.secrets.shares[j], st.secrets.randomness[j]));
    ProofVote pr = prove_vote(ctx.vote_ctx, ctx.pp, st.secrets, st.commitments, st.id,
                              ctx.election_id, st.rng);
    st.proof_vote = encode_proof_vote(ctx.pp, pr);

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

// no decision until all n_t blinded commitments for this round are on the board
inline std::optional<Decision> voter_decide(VoterState& st, const ElectionContext& ctx,
                                            const Board& board) {
    uint32_t seen = 0;
    for (const BoardEntry& e : board.entries()) {
        if (e.kind != EntryKind::blinded_commitment) continue;
        BlindedCommitmentData d = BlindedCommitmentData::decode(ctx.pp, e.payload);
        if (d.voter == st.id && d.round == st.round) ++seen;
    }
    if (seen < ctx.n_t) return std::nullopt;
    bool cast_now;
    if (st.strategy.kind == AuditStrategy::Kind::fixed_k)
        cast_now = st.round >= st.strategy.k;
    else
        cast_now = st.rng.coin(st.strategy.p);
    if (cast_now) {
        st.finalized = true;
        st.cast_round = st.round;
        return Decision::cast;
    }
    return Decision::audit;
}

struct AuditOutcome {
    bool ok = true;
    std::optional<PoioData> poio;           // bad_reveal evidence, first failing tallier
    std::optional<PoioSilenceData> silence;  // unanswered signed audit request
};

// checks c^{(j)} = derand(board c~, revealed r~) for every tallier
inline AuditOutcome voter_check_audit(VoterState& st, const ElectionContext& ctx,
                                      const std::vector<std::optional<RevealMsg>>& reveals,
                                      const Board& board) {
    AuditOutcome out;
    for (uint32_t j = 0; j < ctx.n_t; ++j) {
        if (j >= reveals.size() || !reveals[j]) {
            out.ok = false;
            PoioSilenceData s;
            s.voter = st.id;
            s.tallier = j;
            s.round = st.round;
            s.voter_sig_request = sign(
                ctx.pp, st.key, msg::audit_req_body(ctx.election_id, st.id, j, st.round), st.rng);
            out.silence = s;
            return out;
        }
        const RevealMsg& rv = *reveals[j];
        std::optional<Bigint> board_ct;
        for (const BoardEntry& e : board.entries()) {
            if (e.kind != EntryKind::blinded_commitment) continue;
            BlindedCommitmentData d = BlindedCommitmentData::decode(ctx.pp, e.payload);
            if (d.voter == st.id && d.tallier == j && d.round == st.round) board_ct = d.c_tilde;
        }
        if (!board_ct) continue;
        Commitment expected = rerand(ctx.pp, st.commitments[j], rv.r_tilde);
        if (expected.element != *board_ct) {
            out.ok = false;
            PoioData p;
            p.kind = PoioKind::bad_reveal;
            p.voter = st.id;
            p.tallier = j;
            p.round = st.round;
            p.commitment = st.commitments[j].element;
            p.voter_sig_commit = st.commit_sigs[j];
            p.c_tilde = *board_ct;
            p.r_tilde = rv.r_tilde;
            p.tallier_sig_reveal = rv.sig;
            out.poio = std::move(p);
            return out;
        }
    }
    return out;
}

inline std::vector<OpeningMsg> voter_open(VoterState& st, const ElectionContext& ctx) {
    if (!st.finalized) throw std::logic_error("voter_open: no finalized CAST for this voter");
    std::vector<OpeningMsg> out;
    for (uint32_t j = 0; j < ctx.n_t; ++j) {
        OpeningMsg m;
        m.voter = st.id;
        m.tallier = j;
        m.round = st.cast_round;
        m.coords = st.secrets.shares[j].coords;
        m.r = st.secrets.randomness[j];
        m.sig = sign(ctx.pp, st.key,
                     msg::opening_body(ctx.pp, ctx.election_id, st.id, j, st.cast_round, m.coords,
                                       m.r),
                     st.rng);
        out.push_back(std::move(m));
    }
    return out;
}

// --- tallier ----------------------------------------------------------------

struct TallierState {
    uint32_t id = 0;
    KeyPair key;
    Rng rng{0};

    struct Session {
        uint32_t round = 0;
        Bigint c;             // received vote-share commitment
        Signature voter_sig;  // retained for PoIO_NIZKP blame
        Bigint r_tilde;
        Bigint c_tilde;
        Bytes proof_vote;
        bool finalized = false;
        bool opened = false;
        bool excluded = false;  // shares reset to zero by a validity test
        bool swapped = false;
        VoteShare share;
        Bigint r;
    };
    std::map<uint32_t, Session> sessions;  // one live session per voter
    std::set<std::pair<uint32_t, uint32_t>> seen_rounds;
    std::vector<Bigint> issued_blindings;  // uniqueness asserted in tests
};

// adversarial substitution material for the always_swap_commitment policy
struct BallotSwap {
    VoteShare share;
    Bigint r;
};

// verifies the voter signature, blinds the share commitment and publishes it
inline bool tallier_on_commitment(TallierState& st, const ElectionContext& ctx,
                                  const CommitMsg& m, const Bytes& proof_vote,
                                  const Bigint& voter_pk, Board& board,
                                  const BallotSwap* swap = nullptr) {
    if (!verify_sig(ctx.pp, voter_pk,
                    msg::commit_body(ctx.pp, ctx.election_id, m.voter, st.id, m.round, m.c), m.sig))
        return false;
    if (st.seen_rounds.count({m.voter, m.round})) return false;
    if (board.has_cast(m.voter)) return false;
    st.seen_rounds.insert({m.voter, m.round});

    TallierState::Session s;
    s.round = m.round;
    s.c = m.c;
    s.voter_sig = m.sig;
    s.proof_vote = proof_vote;
    s.r_tilde = ctx.pp.random_scalar(st.rng);
    Commitment base{m.c};
    if (swap) {
        s.swapped = true;
        s.share = swap->share;
        s.r = swap->r;
        base = comm_vec(ctx.pp, swap->share, swap->r);
    }
    s.c_tilde = rerand(ctx.pp, base, s.r_tilde).element;
    st.issued_blindings.push_back(s.r_tilde);

    board.append_signed(EntryKind::blinded_commitment,
                        BlindedCommitmentData{m.voter, st.id, m.round, s.c_tilde}.encode(ctx.pp),
                        ActorId{ActorId::Role::tallier, st.id}, st.key, st.rng);
    st.sessions[m.voter] = std::move(s);
    return true;
}

// reveal the blinding factor and discard the round's stored material
inline std::optional<RevealMsg> tallier_on_audit(TallierState& st, const ElectionContext& ctx,
                                                 uint32_t voter, Board& board,
                                                 const Bigint* wrong_r_tilde = nullptr) {
    auto it = st.sessions.find(voter);
    if (it == st.sessions.end() || it->second.finalized) return std::nullopt;
    RevealMsg rv;
    rv.voter = voter;
    rv.tallier = st.id;
    rv.round = it->second.round;
    rv.c_tilde = it->second.c_tilde;
    rv.r_tilde = wrong_r_tilde ? *wrong_r_tilde : it->second.r_tilde;
    rv.sig = sign(ctx.pp, st.key,
                  msg::reveal_body(ctx.pp, ctx.election_id, voter, st.id, rv.round, rv.c_tilde,
                                   rv.r_tilde),
                  st.rng);
    board.append_signed(EntryKind::audit_discard,
                        AuditDiscardData{voter, it->second.round, 0}.encode(),
                        ActorId{ActorId::Role::tallier, st.id}, st.key, st.rng);
    st.sessions.erase(it);
    return rv;
}

// validity test 3: the opening must match the stored commitment exactly
inline std::optional<PoioData> tallier_on_cast_and_opening(TallierState& st,
                                                           const ElectionContext& ctx,
                                                           const OpeningMsg& opening,
                                                           const Bigint& voter_pk,
                                                           const Board& board) {
    auto it = st.sessions.find(opening.voter);
    if (it == st.sessions.end() || it->second.round != opening.round)
        throw std::invalid_argument("tallier_on_cast_and_opening: unknown voter/round");
    if (!board.has_cast(opening.voter))
        throw std::logic_error("tallier_on_cast_and_opening: no CastFinal on board");
    TallierState::Session& s = it->second;
    s.finalized = true;
    if (!verify_sig(ctx.pp, voter_pk,
                    msg::opening_body(ctx.pp, ctx.election_id, opening.voter, st.id, opening.round,
                                      opening.coords, opening.r),
                    opening.sig)) {
        s.excluded = true;
        return std::nullopt;  // unauthenticated opening: treated as missing
    }
    if (s.swapped) {
        s.opened = true;  // the cheat keeps its own substituted (share, r)
        return std::nullopt;
    }
    if (comm_vec(ctx.pp, VoteShare{opening.coords}, opening.r).element != s.c) {
        s.excluded = true;
        PoioData p;
        p.kind = PoioKind::bad_opening;
        p.voter = opening.voter;
        p.tallier = st.id;
        p.round = opening.round;
        p.commitment = s.c;
        p.voter_sig_commit = s.voter_sig;
        p.opening_coords = opening.coords;
        p.opening_r = opening.r;
        p.voter_sig_opening = opening.sig;
        return p;
    }
    s.opened = true;
    s.share = VoteShare{opening.coords};
    s.r = opening.r;
    return std::nullopt;
}

// flag voters whose opening never arrived by the deadline
inline void tallier_mark_missing_openings(TallierState& st, const Board& board) {
    for (auto& [voter, s] : st.sessions) {
        if (board.has_cast(voter) && !s.opened) s.excluded = true;
    }
}

struct SyncValidateStats {
    uint32_t accepted = 0;
    uint32_t rejected = 0;
    uint32_t messages = 0;  // inter-tallier exchanges during synchronization
};

// talliers pool their received commitments, verify each voter's proof
// against the aggregate, and publish either the validity record with the
// full signature multiset or a deterministic-blame dispute record
inline SyncValidateStats talliers_sync_validate(std::vector<TallierState>& talliers,
                                                const ElectionContext& ctx, Board& board) {
    SyncValidateStats stats;
    // one batched share-exchange message per ordered tallier pair
    stats.messages = ctx.n_t * (ctx.n_t - 1);
    std::vector<uint32_t> cast_voters;
    for (const BoardEntry& e : board.read(EntryKind::cast_final))
        cast_voters.push_back(CastFinalData::decode(e.payload).voter);

    for (uint32_t voter : cast_voters) {
        bool complete = true;
        bool any_excluded = false;
        for (TallierState& t : talliers) {
            auto it = t.sessions.find(voter);
            if (it == t.sessions.end() || !it->second.finalized) complete = false;
            else if (it->second.excluded) any_excluded = true;
        }
        // opening-stage exclusions already carry their own dispute evidence
        if (!complete || any_excluded) continue;

        uint32_t round = talliers[0].sessions[voter].round;
        Bigint aggregate = 1;
        for (TallierState& t : talliers)
            aggregate = ctx.pp.mul(aggregate, t.sessions[voter].c);
        Bytes proof = talliers[0].sessions[voter].proof_vote;

        bool proof_ok = false;
        try {
            ProofVote pr = decode_proof_vote(ctx.pp, proof);
            proof_ok = verify_vote(ctx.vote_ctx, ctx.pp, Commitment{aggregate}, pr, voter,
                                   ctx.election_id);
        } catch (const std::exception&) {
            proof_ok = false;
        }

        if (proof_ok) {
            VoteValidityData d;
            d.voter = voter;
            d.accepted = 1;
            d.round = round;
            d.aggregate = aggregate;
            d.proof_vote = proof;
            Bytes message = d.message(ctx.pp, ctx.election_id);
            for (TallierState& t : talliers)
                d.sigs.emplace_back(t.id, sign(ctx.pp, t.key, message, t.rng));
            board.append_signed(EntryKind::vote_validity, d.encode(ctx.pp),
                                ActorId{ActorId::Role::tallier, talliers[0].id}, talliers[0].key,
                                talliers[0].rng);
            stats.accepted += 1;
        } else {
            PoioNizkData d;
            d.voter = voter;
            d.round = round;
            d.proof_vote = proof;
            for (TallierState& t : talliers) {
                PoioNizkData::SignedShare s;
                s.tallier = t.id;
                s.commitment = t.sessions[voter].c;
                s.voter_sig = t.sessions[voter].voter_sig;
                d.shares.push_back(std::move(s));
            }
            board.append_signed(EntryKind::poio_nizk, d.encode(ctx.pp),
                                ActorId{ActorId::Role::tallier, talliers[0].id}, talliers[0].key,
                                talliers[0].rng);
            for (TallierState& t : talliers) t.sessions[voter].excluded = true;
            stats.rejected += 1;
        }
    }
    return stats;
}

struct TallierAggregate {
    std::vector<Bigint> v_perp;
    Bigint r_perp = 0;
    Bigint rt_perp = 0;
};

// sums over accepted (finalized, opened, non-excluded) voters only, mod q
inline TallierAggregate tallier_aggregate(const TallierState& st, const ElectionContext& ctx) {
    TallierAggregate agg;
    agg.v_perp.assign(ctx.pp.n_choices(), 0);
    for (const auto& [voter, s] : st.sessions) {
        if (!s.finalized || !s.opened || s.excluded) continue;
        for (size_t k = 0; k < agg.v_perp.size(); ++k)
            agg.v_perp[k] = ctx.pp.add_q(agg.v_perp[k], s.share.coords[k]);
        agg.r_perp = ctx.pp.add_q(agg.r_perp, s.r);
        agg.rt_perp = ctx.pp.add_q(agg.rt_perp, s.r_tilde);
    }
    return agg;
}

inline AggregateMsg tallier_sign_aggregate(TallierState& st, const ElectionContext& ctx,
                                           const TallierAggregate& agg) {
    AggregateMsg m;
    m.tallier = st.id;
    m.v_perp = agg.v_perp;
    m.r_perp = agg.r_perp;
    m.rt_perp = agg.rt_perp;
    m.sig = sign(ctx.pp, st.key,
                 msg::aggregate_body(ctx.pp, ctx.election_id, st.id, m.v_perp, m.r_perp, m.rt_perp),
                 st.rng);
    return m;
}

// --- designated tallier -----------------------------------------------------

// accepted voters and their finalized rounds, recomputed from public data
inline std::map<uint32_t, uint32_t> accepted_voters(const GroupParams& pp,
                                                    const std::vector<BoardEntry>& entries) {
    std::map<uint32_t, uint32_t> cast_round;
    for (const BoardEntry& e : entries)
        if (e.kind == EntryKind::cast_final) {
            CastFinalData d = CastFinalData::decode(e.payload);
            cast_round.emplace(d.voter, d.round);
        }
    std::map<uint32_t, uint32_t> out;
    for (const BoardEntry& e : entries)
        if (e.kind == EntryKind::vote_validity) {
            VoteValidityData d = VoteValidityData::decode(pp, e.payload);
            auto it = cast_round.find(d.voter);
            if (d.accepted && it != cast_round.end()) out[d.voter] = it->second;
        }
    return out;
}

// Pi_i c~_i^{(j)} over accepted voters' finalized rounds
inline Bigint blinded_product(const GroupParams& pp, const std::vector<BoardEntry>& entries,
                              uint32_t tallier, const std::map<uint32_t, uint32_t>& accepted) {
    Bigint prod = 1;
    for (const BoardEntry& e : entries) {
        if (e.kind != EntryKind::blinded_commitment) continue;
        BlindedCommitmentData d = BlindedCommitmentData::decode(pp, e.payload);
        auto it = accepted.find(d.voter);
        if (d.tallier == tallier && it != accepted.end() && it->second == d.round)
            prod = pp.mul(prod, d.c_tilde);
    }
    return prod;
}

struct DesignatedResult {
    bool ok = false;
    std::optional<PoioData> blame;  // bad_aggregate naming the failing tallier
    std::vector<Bigint> tally;      // T
    Bigint rt_perp = 0;             // r~_perp
    Bigint r_perp = 0;              // Sigma_j r_perp^{(j)}, opening of c_perp
    Commitment c_perp{1};
};

// per-tallier consistency check, then reconstruction of (T, r~_perp, c_perp)
inline DesignatedResult designated_check_and_reconstruct(const ElectionContext& ctx,
                                                         const std::vector<AggregateMsg>& aggs,
                                                         const Board& board) {
    DesignatedResult res;
    std::map<uint32_t, uint32_t> accepted = accepted_voters(ctx.pp, board.entries());
    res.tally.assign(ctx.pp.n_choices(), 0);
    Bigint blinded_total = 1;
    for (const AggregateMsg& m : aggs) {
        Bigint prod = blinded_product(ctx.pp, board.entries(), m.tallier, accepted);
        Bigint expected =
            comm_vec(ctx.pp, VoteShare{m.v_perp}, ctx.pp.add_q(m.r_perp, m.rt_perp)).element;
        if (prod != expected) {
            PoioData p;
            p.kind = PoioKind::bad_aggregate;
            p.tallier = m.tallier;
            p.v_perp = m.v_perp;
            p.r_perp = m.r_perp;
            p.rt_perp = m.rt_perp;
            p.tallier_sig_aggregate = m.sig;
            res.blame = std::move(p);
            return res;
        }
        blinded_total = ctx.pp.mul(blinded_total, prod);
        for (size_t k = 0; k < res.tally.size(); ++k)
            res.tally[k] = ctx.pp.add_q(res.tally[k], m.v_perp[k]);
        res.r_perp = ctx.pp.add_q(res.r_perp, m.r_perp);
        res.rt_perp = ctx.pp.add_q(res.rt_perp, m.rt_perp);
    }
    res.c_perp = derand(ctx.pp, Commitment{blinded_total}, res.rt_perp);
    res.ok = true;
    return res;
}

inline void designated_publish_result(const ElectionContext& ctx, const DesignatedResult& res,
                                      const KeyPair& key, Rng& rng, Board& board) {
    if (!res.ok) throw std::logic_error("designated_publish_result: reconstruction failed");
    size_t winner = lowest_argmax(res.tally);
    ProofResult pr = prove_result(ctx.result_ctx, ctx.pp, res.tally, res.r_perp, res.c_perp,
                                  winner, ctx.n_v, rng);
    ResultRecordData d;
    d.winner = static_cast<uint32_t>(winner);
    d.r_tilde_perp = res.rt_perp;
    d.proof_result = encode_proof_result(ctx.pp, pr);
    board.append_signed(EntryKind::result_record, d.encode(ctx.pp),
                        ActorId{ActorId::Role::designated, 0}, key, rng);
}

// --- disputes ---------------------------------------------------------------

// Def. PoIO inequality: the reveal fails to open the blinded commitment
inline bool poio_inequality_holds(const GroupParams& pp, const Bigint& c, const Bigint& c_tilde,
                                  const Bigint& r_tilde) {
    return rerand(pp, Commitment{c}, r_tilde).element != c_tilde;
}

inline Bigint roll_pk(const ParamsRecordData& roll, ActorId a) {
    const Bytes* b = nullptr;
    switch (a.role) {
        case ActorId::Role::ec: b = &roll.ec_pk; break;
        case ActorId::Role::voter:
            if (a.index >= roll.voter_pks.size()) return 0;
            b = &roll.voter_pks[a.index];
            break;
        case ActorId::Role::tallier:
            if (a.index >= roll.tallier_pks.size()) return 0;
            b = &roll.tallier_pks[a.index];
            break;
        case ActorId::Role::designated: b = &roll.designated_pk; break;
    }
    return decode_bigint(b->data(), b->size());
}

inline bool verify_poio(const GroupParams& pp, const ParamsRecordData& roll, const Bytes& election_id,
                        const PoioData& poio, const std::vector<BoardEntry>& entries) {
    Bigint voter_pk = roll_pk(roll, ActorId{ActorId::Role::voter, poio.voter});
    Bigint tallier_pk = roll_pk(roll, ActorId{ActorId::Role::tallier, poio.tallier});
    switch (poio.kind) {
        case PoioKind::bad_reveal: {
            if (!verify_sig(pp, voter_pk,
                            msg::commit_body(pp, election_id, poio.voter, poio.tallier, poio.round,
                                             poio.commitment),
                            poio.voter_sig_commit))
                return false;
            if (!verify_sig(pp, tallier_pk,
                            msg::reveal_body(pp, election_id, poio.voter, poio.tallier, poio.round,
                                             poio.c_tilde, poio.r_tilde),
                            poio.tallier_sig_reveal))
                return false;
            bool on_board = false;
            for (const BoardEntry& e : entries) {
                if (e.kind != EntryKind::blinded_commitment) continue;
                BlindedCommitmentData d = BlindedCommitmentData::decode(pp, e.payload);
                if (d.voter == poio.voter && d.tallier == poio.tallier && d.round == poio.round &&
                    d.c_tilde == poio.c_tilde)
                    on_board = true;
            }
            if (!on_board) return false;
            return poio_inequality_holds(pp, poio.commitment, poio.c_tilde, poio.r_tilde);
        }
        case PoioKind::bad_opening: {
            if (!verify_sig(pp, voter_pk,
                            msg::commit_body(pp, election_id, poio.voter, poio.tallier, poio.round,
                                             poio.commitment),
                            poio.voter_sig_commit))
                return false;
            if (!verify_sig(pp, voter_pk,
                            msg::opening_body(pp, election_id, poio.voter, poio.tallier, poio.round,
                                              poio.opening_coords, poio.opening_r),
                            poio.voter_sig_opening))
                return false;
            if (poio.opening_coords.size() != pp.n_choices()) return true;
            return comm_vec(pp, VoteShare{poio.opening_coords}, poio.opening_r).element !=
                   poio.commitment;
        }
        case PoioKind::bad_aggregate: {
            if (!verify_sig(pp, tallier_pk,
                            msg::aggregate_body(pp, election_id, poio.tallier, poio.v_perp,
                                                poio.r_perp, poio.rt_perp),
                            poio.tallier_sig_aggregate))
                return false;
            if (poio.v_perp.size() != pp.n_choices()) return true;
            std::map<uint32_t, uint32_t> accepted = accepted_voters(pp, entries);
            Bigint prod = blinded_product(pp, entries, poio.tallier, accepted);
            Bigint expected =
                comm_vec(pp, VoteShare{poio.v_perp}, pp.add_q(poio.r_perp, poio.rt_perp)).element;
            return prod != expected;
        }
    }
    return false;
}

// --- judge ------------------------------------------------------------------

struct Verdict {
    bool accept = false;
    std::string reason;
    std::optional<ActorId> blamed;

    static Verdict ok() { return Verdict{true, "accept", std::nullopt}; }
    static Verdict fail(std::string reason, std::optional<ActorId> who = std::nullopt) {
        return Verdict{false, std::move(reason), who};
    }
};

// public verification from transcript data only; rejects name the earliest
// violated rule and the blamed party
inline Verdict judge_verify(const Transcript& t) {
    if (t.entries.empty() || t.entries[0].kind != EntryKind::params_record)
        return Verdict::fail("integrity: transcript does not start with a params record");
    ParamsRecordData roll;
    GroupParams pp;
    try {
        roll = ParamsRecordData::decode(t.entries[0].payload);
        pp = derive_params(roll.backend, roll.n_choices, roll.domain_tag);
    } catch (const std::exception& ex) {
        return Verdict::fail(std::string("integrity: malformed params record: ") + ex.what());
    }
    if (pp.params_hash != roll.params_hash || pp.params_hash != t.params_hash)
        return Verdict::fail("integrity: params hash mismatch", ActorId{ActorId::Role::ec, 0});

    // hash chain and dense sequence numbers
    Bytes tip = board_genesis_hash();
    for (size_t i = 0; i < t.entries.size(); ++i) {
        const BoardEntry& e = t.entries[i];
        if (e.seq != i || e.prev_hash != tip)
            return Verdict::fail("integrity: hash chain broken at entry " + std::to_string(i));
        tip = chain_hash(tip, e);
    }

    // per-entry signature, phase legality, tick monotonicity
    uint64_t last_tick = 0;
    for (const BoardEntry& e : t.entries) {
        if (e.tick < last_tick)
            return Verdict::fail("integrity: ticks move backwards at entry " +
                                 std::to_string(e.seq));
        last_tick = e.tick;
        if (e.phase != roll.schedule.phase_at(e.tick))
            return Verdict::fail("phase: entry " + std::to_string(e.seq) +
                                     " recorded in the wrong phase",
                                 e.appender);
        Bigint pk = roll_pk(roll, e.appender);
        if (pk == 0 || !verify_sig(pp, pk, e.body(), e.sig))
            return Verdict::fail("signature: entry " + std::to_string(e.seq) + " by " +
                                     actor_name(e.appender) + " does not verify",
                                 e.appender);
        bool legal = false;
        switch (e.kind) {
            case EntryKind::params_record: legal = e.phase == Phase::Setup && e.seq == 0; break;
            case EntryKind::phase_marker: legal = true; break;
            case EntryKind::blinded_commitment:
            case EntryKind::cast_final:
            case EntryKind::poio_silence: legal = e.phase == Phase::Voting; break;
            case EntryKind::audit_discard:
                legal = e.phase == Phase::Voting ||
                        (e.phase == Phase::Tally && e.appender.role == ActorId::Role::ec);
                break;
            case EntryKind::vote_validity:
            case EntryKind::poio_nizk: legal = e.phase == Phase::Tally; break;
            case EntryKind::poio:
                legal = e.phase == Phase::Voting || e.phase == Phase::Tally ||
                        e.phase == Phase::Result;
                break;
            case EntryKind::result_record: legal = e.phase == Phase::Result; break;
        }
        if (!legal)
            return Verdict::fail("phase: entry " + std::to_string(e.seq) +
                                     " kind illegal in phase " + phase_name(e.phase),
                                 e.appender);
    }

    // S1: at most one CastFinal per voter
    std::map<uint32_t, uint32_t> cast_round;
    for (const BoardEntry& e : t.entries) {
        if (e.kind != EntryKind::cast_final) continue;
        CastFinalData d = CastFinalData::decode(e.payload);
        if (cast_round.count(d.voter))
            return Verdict::fail("S1: duplicate CastFinal for voter " + std::to_string(d.voter),
                                 ActorId{ActorId::Role::voter, d.voter});
        cast_round[d.voter] = d.round;
    }

    // dispute records and their deterministic blame
    std::set<uint32_t> disputed_voters;
    for (const BoardEntry& e : t.entries) {
        if (e.kind == EntryKind::poio) {
            PoioData p = PoioData::decode(pp, e.payload);
            if (!verify_poio(pp, roll, roll.election_id, p, t.entries)) continue;
            if (p.kind == PoioKind::bad_opening) {
                disputed_voters.insert(p.voter);
                continue;  // voter excluded, election continues
            }
            return Verdict::fail("PoIO: valid proof of incorrect opening against tallier " +
                                     std::to_string(p.tallier),
                                 ActorId{ActorId::Role::tallier, p.tallier});
        }
        if (e.kind == EntryKind::poio_silence) {
            PoioSilenceData s = PoioSilenceData::decode(pp, e.payload);
            Bigint vpk = roll_pk(roll, ActorId{ActorId::Role::voter, s.voter});
            if (!verify_sig(pp, vpk,
                            msg::audit_req_body(roll.election_id, s.voter, s.tallier, s.round),
                            s.voter_sig_request))
                continue;
            return Verdict::fail("PoIO: tallier " + std::to_string(s.tallier) +
                                     " silent on a signed audit request",
                                 ActorId{ActorId::Role::tallier, s.tallier});
        }
        if (e.kind == EntryKind::poio_nizk) {
            PoioNizkData d = PoioNizkData::decode(pp, e.payload);
            if (d.shares.size() != roll.n_t)
                return Verdict::fail("PoIO_NIZKP: incomplete share set for voter " +
                                         std::to_string(d.voter),
                                     e.appender);
            for (const auto& s : d.shares) {
                Bigint vpk = roll_pk(roll, ActorId{ActorId::Role::voter, d.voter});
                if (!verify_sig(pp, vpk,
                                msg::commit_body(pp, roll.election_id, d.voter, s.tallier, d.round,
                                                 s.commitment),
                                s.voter_sig))
                    return Verdict::fail("PoIO_NIZKP: tallier " + std::to_string(s.tallier) +
                                             " lacks a voter signature for its share",
                                         ActorId{ActorId::Role::tallier, s.tallier});
            }
            Bigint aggregate = 1;
            for (const auto& s : d.shares) aggregate = pp.mul(aggregate, s.commitment);
            bool proof_ok = false;
            try {
                NizkContext vctx = nizk_setup(pp, Relation::vote).first;
                ProofVote pr = decode_proof_vote(pp, d.proof_vote);
                proof_ok =
                    verify_vote(vctx, pp, Commitment{aggregate}, pr, d.voter, roll.election_id);
            } catch (const std::exception&) {
                proof_ok = false;
            }
            if (proof_ok)
                return Verdict::fail("PoIO_NIZKP: dispute against voter " +
                                         std::to_string(d.voter) + " with a valid proof",
                                     e.appender);
            disputed_voters.insert(d.voter);  // voter flagged malicious, excluded
        }
    }

    // validity records: full signature multiset and an accepting proof
    NizkContext vctx = nizk_setup(pp, Relation::vote).first;
    std::map<uint32_t, uint32_t> accepted;
    for (const BoardEntry& e : t.entries) {
        if (e.kind != EntryKind::vote_validity) continue;
        VoteValidityData d;
        try {
            d = VoteValidityData::decode(pp, e.payload);
        } catch (const std::exception&) {
            return Verdict::fail("validity: malformed record at entry " + std::to_string(e.seq),
                                 e.appender);
        }
        if (!d.accepted) continue;
        if (disputed_voters.count(d.voter))
            return Verdict::fail("validity: accepted record for disputed voter " +
                                     std::to_string(d.voter),
                                 e.appender);
        if (!cast_round.count(d.voter) || cast_round[d.voter] != d.round)
            return Verdict::fail("validity: record without matching CastFinal for voter " +
                                     std::to_string(d.voter),
                                 e.appender);
        std::set<uint32_t> signers;
        Bytes message = d.message(pp, roll.election_id);
        for (const auto& [j, sig] : d.sigs) {
            Bigint tpk = roll_pk(roll, ActorId{ActorId::Role::tallier, j});
            if (tpk == 0 || !verify_sig(pp, tpk, message, sig))
                return Verdict::fail("validity: bad tallier signature in the multiset for voter " +
                                         std::to_string(d.voter),
                                     ActorId{ActorId::Role::tallier, j});
            signers.insert(j);
        }
        if (signers.size() != roll.n_t)
            return Verdict::fail("validity: signature multiset incomplete for voter " +
                                     std::to_string(d.voter),
                                 e.appender);
        uint32_t seen = 0;
        for (const BoardEntry& b : t.entries) {
            if (b.kind != EntryKind::blinded_commitment) continue;
            BlindedCommitmentData bc = BlindedCommitmentData::decode(pp, b.payload);
            if (bc.voter == d.voter && bc.round == d.round) ++seen;
        }
        if (seen != roll.n_t)
            return Verdict::fail("validity: voter " + std::to_string(d.voter) +
                                     " lacks n_t blinded commitments",
                                 e.appender);
        bool proof_ok = false;
        try {
            ProofVote pr = decode_proof_vote(pp, d.proof_vote);
            proof_ok = verify_vote(vctx, pp, Commitment{d.aggregate}, pr, d.voter,
                                   roll.election_id);
        } catch (const std::exception&) {
            proof_ok = false;
        }
        if (!proof_ok)
            return Verdict::fail("validity: vote proof for voter " + std::to_string(d.voter) +
                                     " does not verify",
                                 e.appender);
        accepted[d.voter] = d.round;
    }

    // result record: recompute c_perp from board data only, then verify
    const BoardEntry* result = nullptr;
    for (const BoardEntry& e : t.entries)
        if (e.kind == EntryKind::result_record) {
            if (result)
                return Verdict::fail("result: more than one result record",
                                     ActorId{ActorId::Role::designated, 0});
            result = &e;
        }
    if (!result)
        return Verdict::fail("result: no result record on the board",
                             ActorId{ActorId::Role::designated, 0});
    ResultRecordData rd;
    try {
        rd = ResultRecordData::decode(pp, result->payload);
    } catch (const std::exception&) {
        return Verdict::fail("result: malformed result record",
                             ActorId{ActorId::Role::designated, 0});
    }
    Bigint blinded_total = 1;
    for (uint32_t j = 0; j < roll.n_t; ++j)
        blinded_total = pp.mul(blinded_total, blinded_product(pp, t.entries, j, accepted));
    Commitment c_perp = derand(pp, Commitment{blinded_total}, rd.r_tilde_perp);
    bool ok = false;
    try {
        NizkContext rctx = nizk_setup(pp, Relation::result).first;
        ProofResult pr = decode_proof_result(pp, rd.proof_result);
        ok = verify_result(rctx, pp, c_perp, rd.winner, pr, roll.n_v);
    } catch (const std::exception&) {
        ok = false;
    }
    if (!ok)
        return Verdict::fail("result: result proof does not verify against the recomputed tally commitment",
                             ActorId{ActorId::Role::designated, 0});
    return Verdict::ok();
}

}  // namespace ace

#endif  // ACE_ACTORS_HPP_
