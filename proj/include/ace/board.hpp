/****************************************************************************
append-only public bulletin board: hash-chained signed entries,
tick-driven phase enforcement, duplicate-vote rejection, and a
line-delimited persistence format consumed by the standalone verifier
*****************************************************************************/
#ifndef ACE_BOARD_HPP_
#define ACE_BOARD_HPP_

#include "ace/proofs.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ace {

enum class Phase : uint8_t { Setup = 0, Voting = 1, Tally = 2, Result = 3, Verification = 4 };

inline const char* phase_name(Phase ph) {
    switch (ph) {
        case Phase::Setup: return "Setup";
        case Phase::Voting: return "Voting";
        case Phase::Tally: return "Tally";
        case Phase::Result: return "Result";
        case Phase::Verification: return "Verification";
    }
    return "?";
}

struct PhaseSchedule {
    uint64_t voting_start = 1;
    uint64_t tally_start = 100;
    uint64_t result_start = 120;
    uint64_t verification_start = 140;

    Phase phase_at(uint64_t tick) const {
        if (tick < voting_start) return Phase::Setup;
        if (tick < tally_start) return Phase::Voting;
        if (tick < result_start) return Phase::Tally;
        if (tick < verification_start) return Phase::Result;
        return Phase::Verification;
    }
};

struct ActorId {
    enum class Role : uint8_t { ec = 0, voter = 1, tallier = 2, designated = 3 };
    Role role = Role::ec;
    uint32_t index = 0;

    bool operator==(const ActorId& o) const { return role == o.role && index == o.index; }
    bool operator<(const ActorId& o) const {
        return role != o.role ? role < o.role : index < o.index;
    }
};

inline std::string actor_name(const ActorId& a) {
    switch (a.role) {
        case ActorId::Role::ec: return "EC";
        case ActorId::Role::voter: return "voter " + std::to_string(a.index);
        case ActorId::Role::tallier: return "tallier " + std::to_string(a.index);
        case ActorId::Role::designated: return "T_des";
    }
    return "?";
}

enum class EntryKind : uint8_t {
    params_record = 0,
    phase_marker = 1,
    blinded_commitment = 2,
    audit_discard = 3,
    cast_final = 4,
    vote_validity = 5,
    poio = 6,
    poio_nizk = 7,
    poio_silence = 8,
    result_record = 9,
};

enum class PoioKind : uint8_t { bad_reveal = 0, bad_opening = 1, bad_aggregate = 2 };

struct BoardEntry {
    uint32_t seq = 0;
    uint64_t tick = 0;
    Phase phase = Phase::Setup;
    ActorId appender;
    EntryKind kind = EntryKind::params_record;
    Bytes payload;
    Bytes prev_hash;
    Signature sig;

    Bytes body() const {
        ByteWriter w;
        w.u8(static_cast<uint8_t>(kind));
        w.blob(payload);
        w.u64(tick);
        w.u8(static_cast<uint8_t>(phase));
        w.u8(static_cast<uint8_t>(appender.role));
        w.u32(appender.index);
        return w.take();
    }

    Bytes encode() const {
        ByteWriter w;
        w.u32(seq);
        w.u64(tick);
        w.u8(static_cast<uint8_t>(phase));
        w.u8(static_cast<uint8_t>(appender.role));
        w.u32(appender.index);
        w.u8(static_cast<uint8_t>(kind));
        w.blob(payload);
        w.blob(prev_hash);
        w.blob(encode_bigint_flex(sig.challenge));
        w.blob(encode_bigint_flex(sig.response));
        return w.take();
    }

    static Bytes encode_bigint_flex(const Bigint& v) {
        size_t width = v == 0 ? 1 : (boost::multiprecision::msb(v) + 8) / 8;
        return encode_bigint(v, width);
    }

    static BoardEntry decode(const Bytes& data) {
        ByteReader r(data);
        BoardEntry e;
        e.seq = r.u32();
        e.tick = r.u64();
        e.phase = static_cast<Phase>(r.u8());
        e.appender.role = static_cast<ActorId::Role>(r.u8());
        e.appender.index = r.u32();
        e.kind = static_cast<EntryKind>(r.u8());
        e.payload = r.blob();
        e.prev_hash = r.blob();
        Bytes c = r.blob();
        Bytes z = r.blob();
        e.sig.challenge = decode_bigint(c.data(), c.size());
        e.sig.response = decode_bigint(z.data(), z.size());
        if (!r.done()) throw std::invalid_argument("BoardEntry::decode: trailing bytes");
        return e;
    }
};

// --- payloads ---------------------------------------------------------------

struct ParamsRecordData {
    Backend backend = Backend::tiny_test;
    uint32_t n_choices = 2;
    Bytes domain_tag;
    Bytes params_hash;
    uint32_t n_v = 0;
    uint32_t n_t = 0;
    Bytes election_id;
    PhaseSchedule schedule;
    Bytes config_digest;
    Bytes ec_pk;
    std::vector<Bytes> voter_pks;
    std::vector<Bytes> tallier_pks;
    Bytes designated_pk;

    Bytes encode() const {
        ByteWriter w;
        w.u8(static_cast<uint8_t>(backend));
        w.u32(n_choices);
        w.blob(domain_tag);
        w.blob(params_hash);
        w.u32(n_v);
        w.u32(n_t);
        w.blob(election_id);
        w.u64(schedule.voting_start);
        w.u64(schedule.tally_start);
        w.u64(schedule.result_start);
        w.u64(schedule.verification_start);
        w.blob(config_digest);
        w.blob(ec_pk);
        w.u32(static_cast<uint32_t>(voter_pks.size()));
        for (const Bytes& pk : voter_pks) w.blob(pk);
        w.u32(static_cast<uint32_t>(tallier_pks.size()));
        for (const Bytes& pk : tallier_pks) w.blob(pk);
        w.blob(designated_pk);
        return w.take();
    }

    static ParamsRecordData decode(const Bytes& data) {
        ByteReader r(data);
        ParamsRecordData d;
        d.backend = static_cast<Backend>(r.u8());
        d.n_choices = r.u32();
        d.domain_tag = r.blob();
        d.params_hash = r.blob();
        d.n_v = r.u32();
        d.n_t = r.u32();
        d.election_id = r.blob();
        d.schedule.voting_start = r.u64();
        d.schedule.tally_start = r.u64();
        d.schedule.result_start = r.u64();
        d.schedule.verification_start = r.u64();
        d.config_digest = r.blob();
        d.ec_pk = r.blob();
        uint32_t nv = r.u32();
        for (uint32_t i = 0; i < nv; ++i) d.voter_pks.push_back(r.blob());
        uint32_t nt = r.u32();
        for (uint32_t i = 0; i < nt; ++i) d.tallier_pks.push_back(r.blob());
        d.designated_pk = r.blob();
        return d;
    }
};

struct PhaseMarkerData {
    Phase phase = Phase::Setup;
    uint64_t tick = 0;

    Bytes encode() const {
        ByteWriter w;
        w.u8(static_cast<uint8_t>(phase));
        w.u64(tick);
        return w.take();
    }
    static PhaseMarkerData decode(const Bytes& data) {
        ByteReader r(data);
        PhaseMarkerData d;
        d.phase = static_cast<Phase>(r.u8());
        d.tick = r.u64();
        return d;
    }
};

struct BlindedCommitmentData {
    uint32_t voter = 0;
    uint32_t tallier = 0;
    uint32_t round = 0;
    Bigint c_tilde;

    Bytes encode(const GroupParams& pp) const {
        ByteWriter w;
        w.u32(voter);
        w.u32(tallier);
        w.u32(round);
        w.raw(pp.enc_element(c_tilde));
        return w.take();
    }
    static BlindedCommitmentData decode(const GroupParams& pp, const Bytes& data) {
        ByteReader r(data);
        BlindedCommitmentData d;
        d.voter = r.u32();
        d.tallier = r.u32();
        d.round = r.u32();
        Bytes e = r.raw(pp.element_bytes);
        d.c_tilde = decode_bigint(e.data(), e.size());
        return d;
    }
};

struct AuditDiscardData {
    uint32_t voter = 0;
    uint32_t round = 0;
    uint8_t forced = 0;  // 1 when closed by the board at the phase boundary

    Bytes encode() const {
        ByteWriter w;
        w.u32(voter);
        w.u32(round);
        w.u8(forced);
        return w.take();
    }
    static AuditDiscardData decode(const Bytes& data) {
        ByteReader r(data);
        AuditDiscardData d;
        d.voter = r.u32();
        d.round = r.u32();
        d.forced = r.u8();
        return d;
    }
};

struct CastFinalData {
    uint32_t voter = 0;
    uint32_t round = 0;

    Bytes encode() const {
        ByteWriter w;
        w.u32(voter);
        w.u32(round);
        return w.take();
    }
    static CastFinalData decode(const Bytes& data) {
        ByteReader r(data);
        CastFinalData d;
        d.voter = r.u32();
        d.round = r.u32();
        return d;
    }
};

struct VoteValidityData {
    uint32_t voter = 0;
    uint8_t accepted = 0;
    uint32_t round = 0;
    Bigint aggregate;                                   // c_i = Pi_j c_i^{(j)}
    Bytes proof_vote;                                   // encoded ProofVote
    std::vector<std::pair<uint32_t, Signature>> sigs;   // all-signers multiset

    Bytes message(const GroupParams& pp, const Bytes& election_id) const {
        ByteWriter w;
        w.blob(to_bytes("ace-validity"));
        w.blob(election_id);
        w.u32(voter);
        w.u8(accepted);
        w.u32(round);
        w.raw(pp.enc_element(aggregate));
        w.blob(proof_vote);
        return w.take();
    }

    Bytes encode(const GroupParams& pp) const {
        ByteWriter w;
        w.u32(voter);
        w.u8(accepted);
        w.u32(round);
        w.raw(pp.enc_element(aggregate));
        w.blob(proof_vote);
        w.u32(static_cast<uint32_t>(sigs.size()));
        for (const auto& [j, sig] : sigs) {
            w.u32(j);
            w.raw(pp.enc_scalar(sig.challenge));
            w.raw(pp.enc_scalar(sig.response));
        }
        return w.take();
    }
    static VoteValidityData decode(const GroupParams& pp, const Bytes& data) {
        ByteReader r(data);
        VoteValidityData d;
        d.voter = r.u32();
        d.accepted = r.u8();
        d.round = r.u32();
        Bytes e = r.raw(pp.element_bytes);
        d.aggregate = decode_bigint(e.data(), e.size());
        d.proof_vote = r.blob();
        uint32_t n = r.u32();
        for (uint32_t i = 0; i < n; ++i) {
            uint32_t j = r.u32();
            Bytes c = r.raw(pp.scalar_bytes);
            Bytes z = r.raw(pp.scalar_bytes);
            d.sigs.emplace_back(j, Signature{decode_bigint(c.data(), c.size()),
                                             decode_bigint(z.data(), z.size())});
        }
        return d;
    }
};

struct PoioData {
    PoioKind kind = PoioKind::bad_reveal;
    uint32_t voter = 0;
    uint32_t tallier = 0;
    uint32_t round = 0;

    // bad_reveal / bad_opening evidence
    Bigint commitment;          // c_i^{(j)} as signed by the voter
    Signature voter_sig_commit;
    Bigint c_tilde;             // bad_reveal only, must match the board entry
    Bigint r_tilde;             // bad_reveal: revealed blinding factor
    Signature tallier_sig_reveal;
    std::vector<Bigint> opening_coords;  // bad_opening: claimed share
    Bigint opening_r;
    Signature voter_sig_opening;

    // bad_aggregate evidence
    std::vector<Bigint> v_perp;
    Bigint r_perp;
    Bigint rt_perp;
    Signature tallier_sig_aggregate;

    Bytes encode(const GroupParams& pp) const {
        ByteWriter w;
        w.u8(static_cast<uint8_t>(kind));
        w.u32(voter);
        w.u32(tallier);
        w.u32(round);
        auto put_sig = [&](const Signature& s) {
            w.raw(pp.enc_scalar(s.challenge));
            w.raw(pp.enc_scalar(s.response));
        };
        w.raw(pp.enc_element(commitment == 0 ? Bigint(1) : commitment));
        put_sig(voter_sig_commit);
        w.raw(pp.enc_element(c_tilde == 0 ? Bigint(1) : c_tilde));
        w.raw(pp.enc_scalar(r_tilde));
        put_sig(tallier_sig_reveal);
        w.u32(static_cast<uint32_t>(opening_coords.size()));
        for (const Bigint& x : opening_coords) w.raw(pp.enc_scalar(x));
        w.raw(pp.enc_scalar(opening_r));
        put_sig(voter_sig_opening);
        w.u32(static_cast<uint32_t>(v_perp.size()));
        for (const Bigint& x : v_perp) w.raw(pp.enc_scalar(x));
        w.raw(pp.enc_scalar(r_perp));
        w.raw(pp.enc_scalar(rt_perp));
        put_sig(tallier_sig_aggregate);
        return w.take();
    }
    static PoioData decode(const GroupParams& pp, const Bytes& data) {
        ByteReader r(data);
        PoioData d;
        d.kind = static_cast<PoioKind>(r.u8());
        d.voter = r.u32();
        d.tallier = r.u32();
        d.round = r.u32();
        auto elem = [&] {
            Bytes b = r.raw(pp.element_bytes);
            return decode_bigint(b.data(), b.size());
        };
        auto scal = [&] {
            Bytes b = r.raw(pp.scalar_bytes);
            return decode_bigint(b.data(), b.size());
        };
        auto get_sig = [&] { return Signature{scal(), scal()}; };
        d.commitment = elem();
        d.voter_sig_commit = get_sig();
        d.c_tilde = elem();
        d.r_tilde = scal();
        d.tallier_sig_reveal = get_sig();
        uint32_t no = r.u32();
        for (uint32_t i = 0; i < no; ++i) d.opening_coords.push_back(scal());
        d.opening_r = scal();
        d.voter_sig_opening = get_sig();
        uint32_t nv = r.u32();
        for (uint32_t i = 0; i < nv; ++i) d.v_perp.push_back(scal());
        d.r_perp = scal();
        d.rt_perp = scal();
        d.tallier_sig_aggregate = get_sig();
        return d;
    }
};

struct PoioNizkData {
    uint32_t voter = 0;
    uint32_t round = 0;
    Bytes proof_vote;  // the rejected ProofVote
    struct SignedShare {
        uint32_t tallier = 0;
        Bigint commitment;
        Signature voter_sig;
    };
    std::vector<SignedShare> shares;

    Bytes encode(const GroupParams& pp) const {
        ByteWriter w;
        w.u32(voter);
        w.u32(round);
        w.blob(proof_vote);
        w.u32(static_cast<uint32_t>(shares.size()));
        for (const SignedShare& s : shares) {
            w.u32(s.tallier);
            w.raw(pp.enc_element(s.commitment));
            w.raw(pp.enc_scalar(s.voter_sig.challenge));
            w.raw(pp.enc_scalar(s.voter_sig.response));
        }
        return w.take();
    }
    static PoioNizkData decode(const GroupParams& pp, const Bytes& data) {
        ByteReader r(data);
        PoioNizkData d;
        d.voter = r.u32();
        d.round = r.u32();
        d.proof_vote = r.blob();
        uint32_t n = r.u32();
        for (uint32_t i = 0; i < n; ++i) {
            SignedShare s;
            s.tallier = r.u32();
            Bytes e = r.raw(pp.element_bytes);
            s.commitment = decode_bigint(e.data(), e.size());
            Bytes c = r.raw(pp.scalar_bytes);
            Bytes z = r.raw(pp.scalar_bytes);
            s.voter_sig = Signature{decode_bigint(c.data(), c.size()),
                                    decode_bigint(z.data(), z.size())};
            d.shares.push_back(std::move(s));
        }
        return d;
    }
};

struct PoioSilenceData {
    uint32_t voter = 0;
    uint32_t tallier = 0;
    uint32_t round = 0;
    Signature voter_sig_request;  // the unanswered signed audit request

    Bytes encode(const GroupParams& pp) const {
        ByteWriter w;
        w.u32(voter);
        w.u32(tallier);
        w.u32(round);
        w.raw(pp.enc_scalar(voter_sig_request.challenge));
        w.raw(pp.enc_scalar(voter_sig_request.response));
        return w.take();
    }
    static PoioSilenceData decode(const GroupParams& pp, const Bytes& data) {
        ByteReader r(data);
        PoioSilenceData d;
        d.voter = r.u32();
        d.tallier = r.u32();
        d.round = r.u32();
        Bytes c = r.raw(pp.scalar_bytes);
        Bytes z = r.raw(pp.scalar_bytes);
        d.voter_sig_request = Signature{decode_bigint(c.data(), c.size()),
                                        decode_bigint(z.data(), z.size())};
        return d;
    }
};

struct ResultRecordData {
    uint32_t winner = 0;
    Bigint r_tilde_perp;
    Bytes proof_result;  // encoded ProofResult

    Bytes encode(const GroupParams& pp) const {
        ByteWriter w;
        w.u32(winner);
        w.raw(pp.enc_scalar(r_tilde_perp));
        w.blob(proof_result);
        return w.take();
    }
    static ResultRecordData decode(const GroupParams& pp, const Bytes& data) {
        ByteReader r(data);
        ResultRecordData d;
        d.winner = r.u32();
        Bytes s = r.raw(pp.scalar_bytes);
        d.r_tilde_perp = decode_bigint(s.data(), s.size());
        d.proof_result = r.blob();
        return d;
    }
};

// --- board ------------------------------------------------------------------

enum class BoardErrorCode {
    wrong_phase,
    bad_signature,
    duplicate_vote,
    ticks_backwards,
    integrity,
    unknown_actor,
};

struct BoardError : std::runtime_error {
    BoardErrorCode code;
    BoardError(BoardErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct Transcript {
    Bytes params_hash;
    Bytes config_digest;
    std::vector<BoardEntry> entries;

    const BoardEntry* find_first(EntryKind kind) const {
        for (const BoardEntry& e : entries)
            if (e.kind == kind) return &e;
        return nullptr;
    }
};

inline Bytes board_genesis_hash() {
    return sha256(to_bytes("ace-board-genesis"));
}

inline Bytes chain_hash(const Bytes& prev, const BoardEntry& e) {
    ByteWriter w;
    w.blob(prev);
    w.blob(e.body());
    w.blob(BoardEntry::encode_bigint_flex(e.sig.challenge));
    w.blob(BoardEntry::encode_bigint_flex(e.sig.response));
    return sha256(w.bytes());
}

inline void save_transcript(const Transcript& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_transcript: cannot open " + path);
    out << "ACE-BOARD v1 " << to_hex(t.params_hash) << " " << to_hex(t.config_digest) << "\n";
    Bytes tip = board_genesis_hash();
    for (const BoardEntry& e : t.entries) {
        out << to_base64(e.encode()) << "\n";
        tip = chain_hash(tip, e);
    }
    out << "ACE-TIP " << to_hex(tip) << "\n";
}

class Board {
  public:
    Board(GroupParams pp, PhaseSchedule schedule, KeyPair ec_key, Rng ec_rng)
        : pp_(std::move(pp)),
          schedule_(schedule),
          ec_key_(ec_key),
          ec_rng_(ec_rng),
          chain_tip_(board_genesis_hash()) {}

    const GroupParams& params() const { return pp_; }
    uint64_t tick() const { return tick_; }
    Phase phase() const { return phase_; }
    const std::vector<BoardEntry>& entries() const { return entries_; }

    // sign-and-append convenience used by all honest actors
    uint32_t append_signed(EntryKind kind, const Bytes& payload, ActorId appender,
                           const KeyPair& key, Rng& rng) {
        BoardEntry e;
        e.tick = tick_;
        e.phase = phase_;
        e.appender = appender;
        e.kind = kind;
        e.payload = payload;
        e.sig = sign(pp_, key, e.body(), rng);
        return append(e);
    }

    uint32_t append(BoardEntry e) {
        e.seq = static_cast<uint32_t>(entries_.size());
        e.tick = tick_;
        e.phase = phase_;
        e.prev_hash = chain_tip_;
        validate(e);
        chain_tip_ = chain_hash(chain_tip_, e);
        apply(e);
        entries_.push_back(std::move(e));
        return static_cast<uint32_t>(entries_.size() - 1);
    }

    std::vector<BoardEntry> read(std::optional<EntryKind> kind = std::nullopt,
                                 std::optional<uint32_t> voter = std::nullopt) const {
        std::vector<BoardEntry> out;
        for (const BoardEntry& e : entries_) {
            if (kind && e.kind != *kind) continue;
            if (voter && entry_voter(e) != *voter) continue;
            out.push_back(e);
        }
        return out;
    }

    Phase advance(uint64_t now) {
        if (now < tick_)
            throw BoardError(BoardErrorCode::ticks_backwards, "advance: tick moved backwards");
        tick_ = now;
        Phase target = schedule_.phase_at(now);
        while (phase_ != target) {
            Phase next = static_cast<Phase>(static_cast<uint8_t>(phase_) + 1);
            phase_ = next;
            BoardEntry m;
            m.tick = tick_;
            m.phase = phase_;
            m.appender = ActorId{ActorId::Role::ec, 0};
            m.kind = EntryKind::phase_marker;
            m.payload = PhaseMarkerData{phase_, tick_}.encode();
            m.sig = sign(pp_, ec_key_, m.body(), ec_rng_);
            m.seq = static_cast<uint32_t>(entries_.size());
            m.prev_hash = chain_tip_;
            chain_tip_ = chain_hash(chain_tip_, m);
            entries_.push_back(std::move(m));
            if (phase_ == Phase::Tally) close_open_sessions();
        }
        return phase_;
    }

    bool has_cast(uint32_t voter) const { return cast_.count(voter) > 0; }

    Transcript transcript() const {
        Transcript t;
        t.params_hash = pp_.params_hash;
        t.config_digest = config_digest_;
        t.entries = entries_;
        return t;
    }

    void set_config_digest(Bytes digest) { config_digest_ = std::move(digest); }

    void persist(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("persist: cannot open " + path);
        out << "ACE-BOARD v1 " << to_hex(pp_.params_hash) << " " << to_hex(config_digest_) << "\n";
        for (const BoardEntry& e : entries_) out << to_base64(e.encode()) << "\n";
        out << "ACE-TIP " << to_hex(chain_tip_) << "\n";
    }

    static Transcript load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("load: cannot open " + path);
        std::string header;
        if (!std::getline(in, header)) throw std::runtime_error("load: empty file");
        std::istringstream hs(header);
        std::string magic, version, params_hex, config_hex;
        hs >> magic >> version >> params_hex >> config_hex;
        if (magic != "ACE-BOARD" || version != "v1")
            throw std::runtime_error("load: bad header");
        Transcript t;
        t.params_hash = from_hex(params_hex);
        t.config_digest = from_hex(config_hex);
        Bytes tip = board_genesis_hash();
        std::string line;
        uint32_t seq = 0;
        bool saw_trailer = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line.rfind("ACE-TIP ", 0) == 0) {
                if (from_hex(line.substr(8)) != tip)
                    throw std::runtime_error("load: chain tip trailer mismatch");
                saw_trailer = true;
                continue;
            }
            if (saw_trailer) throw std::runtime_error("load: entries after the trailer");
            BoardEntry e;
            try {
                e = BoardEntry::decode(from_base64(line));
            } catch (const std::exception& ex) {
                throw std::runtime_error(std::string("load: corrupt entry: ") + ex.what());
            }
            if (e.seq != seq++)
                throw std::runtime_error("load: sequence gap at entry " + std::to_string(e.seq));
            if (e.prev_hash != tip)
                throw std::runtime_error("load: hash chain mismatch at entry " +
                                         std::to_string(e.seq));
            tip = chain_hash(tip, e);
            t.entries.push_back(std::move(e));
        }
        if (!saw_trailer) throw std::runtime_error("load: missing chain tip trailer");
        return t;
    }

  private:
    static std::optional<uint32_t> entry_voter_opt(const BoardEntry& e) {
        switch (e.kind) {
            case EntryKind::blinded_commitment:
            case EntryKind::audit_discard:
            case EntryKind::cast_final:
            case EntryKind::vote_validity:
            case EntryKind::poio:
            case EntryKind::poio_nizk:
            case EntryKind::poio_silence: {
                ByteReader r(e.payload);
                if (e.kind == EntryKind::poio) {
                    r.u8();
                    return r.u32();
                }
                return r.u32();
            }
            default: return std::nullopt;
        }
    }
    static uint32_t entry_voter(const BoardEntry& e) {
        auto v = entry_voter_opt(e);
        return v ? *v : UINT32_MAX;
    }

    void validate(const BoardEntry& e) const {
        if (!kind_allowed(e.kind, phase_))
            throw BoardError(BoardErrorCode::wrong_phase,
                             std::string("append: ") + phase_name(phase_) + " phase does not admit this entry kind");
        const Bigint* pk = lookup_pk(e.appender);
        if (!pk) throw BoardError(BoardErrorCode::unknown_actor, "append: appender not on roll");
        if (!verify_sig(pp_, *pk, e.body(), e.sig))
            throw BoardError(BoardErrorCode::bad_signature, "append: entry signature invalid");
        if (e.kind == EntryKind::blinded_commitment || e.kind == EntryKind::cast_final) {
            auto voter = entry_voter_opt(e);
            if (voter && cast_.count(*voter))
                throw BoardError(BoardErrorCode::duplicate_vote,
                                 "append: voter " + std::to_string(*voter) + " already finalized a vote");
        }
        if (e.kind == EntryKind::blinded_commitment || e.kind == EntryKind::cast_final) {
            auto voter = entry_voter_opt(e);
            if (voter && roll_ && *voter >= roll_->voter_pks.size())
                throw BoardError(BoardErrorCode::unknown_actor, "append: voter not on roll");
        }
    }

    void apply(const BoardEntry& e) {
        if (e.kind == EntryKind::params_record) {
            roll_ = ParamsRecordData::decode(e.payload);
        } else if (e.kind == EntryKind::blinded_commitment) {
            BlindedCommitmentData d = BlindedCommitmentData::decode(pp_, e.payload);
            open_rounds_[d.voter].insert(d.round);
        } else if (e.kind == EntryKind::audit_discard) {
            AuditDiscardData d = AuditDiscardData::decode(e.payload);
            open_rounds_[d.voter].erase(d.round);
        } else if (e.kind == EntryKind::cast_final) {
            CastFinalData d = CastFinalData::decode(e.payload);
            cast_.insert(d.voter);
            open_rounds_[d.voter].clear();
        }
    }

    static bool kind_allowed(EntryKind kind, Phase ph) {
        switch (kind) {
            case EntryKind::params_record: return ph == Phase::Setup;
            case EntryKind::phase_marker: return true;
            case EntryKind::blinded_commitment:
            case EntryKind::cast_final:
            case EntryKind::poio_silence:
                return ph == Phase::Voting;
            case EntryKind::audit_discard: return ph == Phase::Voting || ph == Phase::Tally;
            case EntryKind::poio: return ph == Phase::Voting || ph == Phase::Tally || ph == Phase::Result;
            case EntryKind::vote_validity:
            case EntryKind::poio_nizk:
                return ph == Phase::Tally;
            case EntryKind::result_record: return ph == Phase::Result;
        }
        return false;
    }

    const Bigint* lookup_pk(const ActorId& a) const {
        auto decode_pk = [this](const Bytes& b) -> const Bigint* {
            pk_cache_.push_back(decode_bigint(b.data(), b.size()));
            return &pk_cache_.back();
        };
        switch (a.role) {
            case ActorId::Role::ec:
                pk_cache_.push_back(ec_key_.pk);
                return &pk_cache_.back();
            case ActorId::Role::voter:
                if (!roll_ || a.index >= roll_->voter_pks.size()) return nullptr;
                return decode_pk(roll_->voter_pks[a.index]);
            case ActorId::Role::tallier:
                if (!roll_ || a.index >= roll_->tallier_pks.size()) return nullptr;
                return decode_pk(roll_->tallier_pks[a.index]);
            case ActorId::Role::designated:
                if (!roll_) return nullptr;
                return decode_pk(roll_->designated_pk);
        }
        return nullptr;
    }

    // voters with a submitted round but neither CAST nor AUDIT closure at
    // the Voting->Tally boundary are force-discarded (treated as never cast)
    void close_open_sessions() {
        for (auto& [voter, rounds] : open_rounds_) {
            if (cast_.count(voter)) continue;
            for (uint32_t round : std::set<uint32_t>(rounds.begin(), rounds.end())) {
                BoardEntry d;
                d.tick = tick_;
                d.phase = phase_;
                d.appender = ActorId{ActorId::Role::ec, 0};
                d.kind = EntryKind::audit_discard;
                d.payload = AuditDiscardData{voter, round, 1}.encode();
                d.sig = sign(pp_, ec_key_, d.body(), ec_rng_);
                d.seq = static_cast<uint32_t>(entries_.size());
                d.prev_hash = chain_tip_;
                chain_tip_ = chain_hash(chain_tip_, d);
                entries_.push_back(std::move(d));
            }
            rounds.clear();
        }
    }

    GroupParams pp_;
    PhaseSchedule schedule_;
    KeyPair ec_key_;
    Rng ec_rng_;
    Bytes config_digest_;
    uint64_t tick_ = 0;
    Phase phase_ = Phase::Setup;
    std::vector<BoardEntry> entries_;
    Bytes chain_tip_;
    std::optional<ParamsRecordData> roll_;
    std::set<uint32_t> cast_;
    std::map<uint32_t, std::set<uint32_t>> open_rounds_;
    mutable std::vector<Bigint> pk_cache_;
};

}  // namespace ace

#endif  // ACE_BOARD_HPP_
