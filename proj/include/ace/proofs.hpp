/****************************************************************************
Fiat-Shamir sigma-protocol NIZKs for the two protocol relations:
  R_vote : an aggregate vector commitment opens to a one-hot ballot
  R_res  : a tally commitment opens to a vector whose lowest-index
           argmax is the declared winner (bit-decomposition ranges)
building blocks: Schnorr PoK over base h, disjunctive 0/1 proofs,
bit-decomposition range proofs, AND-composed linking proofs
*****************************************************************************/
#ifndef ACE_PROOFS_HPP_
#define ACE_PROOFS_HPP_

#include "ace/group.hpp"

namespace ace {

struct ProverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Relation : uint8_t { vote = 0, result = 1 };

// transparent setup: the context is just domain separation plus a
// binding to the group parameters
struct NizkContext {
    Relation relation;
    Bytes domain;
    Bytes params_hash;
};

inline std::pair<NizkContext, NizkContext> nizk_setup(const GroupParams& pp, Relation rel) {
    NizkContext ctx;
    ctx.relation = rel;
    ctx.domain = to_bytes(rel == Relation::vote ? "ace-nizk-vote" : "ace-nizk-result");
    ctx.params_hash = pp.params_hash;
    return {ctx, ctx};
}

// Schnorr PoK of x with S = h^x; challenge bound to an enclosing
// statement digest and a per-component label
struct SchnorrProof {
    Bigint commit;
    Bigint response;
};

// disjunctive proof that e = g^b h^s with b in {0,1}
struct BitProof {
    Bigint a0, a1;
    Bigint c0, c1;
    Bigint z0, z1;
};

struct RangeProof {
    std::vector<Bigint> bit_comms;  // C_i = g^{b_i} h^{w_i}
    std::vector<BitProof> bit_proofs;
    SchnorrProof recomposition;
};

// AND-composed Schnorr linking one vector commitment (bases h, g_vec)
// with per-coordinate commitments (bases g, h) over the same vector
struct LinkProof {
    Bigint commit_vec;               // over (h, g_vec)
    std::vector<Bigint> commit_coord;  // over (g, h), one per coordinate
    Bigint z_r;
    std::vector<Bigint> z_v;
    std::vector<Bigint> z_s;
};

struct ProofVote {
    std::vector<Bigint> aux;  // e_k = g^{v[k]} h^{s_k}
    std::vector<BitProof> bit_proofs;
    SchnorrProof sum_proof;  // Pi e_k / g opens to 0 over base h
    LinkProof link;
};

struct ProofResult {
    std::vector<Bigint> tally_comms;  // t_k = g^{T[k]} h^{u_k}
    LinkProof link;
    std::vector<RangeProof> ranges;  // for each k != w, ascending k
};

namespace sigma {

inline Bigint challenge(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                        const std::vector<Bigint>& elements) {
    ByteWriter w;
    w.blob(stmt);
    w.blob(to_bytes(label));
    for (const Bigint& e : elements) w.raw(pp.enc_element(e));
    return hash_to_scalar(pp, to_bytes("ace-sigma"), w.bytes());
}

inline SchnorrProof prove_dlog_h(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                                 const Bigint& statement_elem, const Bigint& witness, Rng& rng) {
    Bigint rho = pp.random_scalar(rng);
    SchnorrProof pr;
    pr.commit = pp.pow(pp.h, rho);
    Bigint x = challenge(pp, stmt, label, {statement_elem, pr.commit});
    pr.response = pp.add_q(rho, pp.mul_q(x, witness));
    return pr;
}

inline bool verify_dlog_h(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                          const Bigint& statement_elem, const SchnorrProof& pr) {
    if (!pp.in_group(statement_elem) || !pp.in_group(pr.commit)) return false;
    Bigint x = challenge(pp, stmt, label, {statement_elem, pr.commit});
    return pp.pow(pp.h, pr.response) == pp.mul(pr.commit, pp.pow(statement_elem, x));
}

// honest-verifier simulator: equations hold without the witness, the
// Fiat-Shamir hash of course does not (used by zero-knowledge tests)
inline SchnorrProof simulate_dlog_h(const GroupParams& pp, const Bigint& statement_elem,
                                    const Bigint& chosen_challenge, Rng& rng) {
    SchnorrProof pr;
    pr.response = pp.random_scalar(rng);
    pr.commit = pp.mul(pp.pow(pp.h, pr.response), pp.inv(pp.pow(statement_elem, chosen_challenge)));
    return pr;
}

inline bool dlog_h_equation_holds(const GroupParams& pp, const Bigint& statement_elem,
                                  const Bigint& x, const SchnorrProof& pr) {
    return pp.pow(pp.h, pr.response) == pp.mul(pr.commit, pp.pow(statement_elem, x));
}

inline BitProof prove_bit_core(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                               const Bigint& e, int bit, const Bigint& s, Rng& rng) {
    if (bit != 0 && bit != 1) throw ProverError("prove_bit: value not a bit");
    BitProof pr;
    Bigint e_over_g = pp.mul(e, pp.inv(pp.g));
    if (bit == 0) {
        // real branch 0 (e = h^s), simulated branch 1
        pr.c1 = pp.random_scalar(rng);
        pr.z1 = pp.random_scalar(rng);
        pr.a1 = pp.mul(pp.pow(pp.h, pr.z1), pp.inv(pp.pow(e_over_g, pr.c1)));
        Bigint rho = pp.random_scalar(rng);
        pr.a0 = pp.pow(pp.h, rho);
        Bigint x = challenge(pp, stmt, label, {e, pr.a0, pr.a1});
        pr.c0 = pp.sub_q(x, pr.c1);
        pr.z0 = pp.add_q(rho, pp.mul_q(pr.c0, s));
    } else {
        pr.c0 = pp.random_scalar(rng);
        pr.z0 = pp.random_scalar(rng);
        pr.a0 = pp.mul(pp.pow(pp.h, pr.z0), pp.inv(pp.pow(e, pr.c0)));
        Bigint rho = pp.random_scalar(rng);
        pr.a1 = pp.pow(pp.h, rho);
        Bigint x = challenge(pp, stmt, label, {e, pr.a0, pr.a1});
        pr.c1 = pp.sub_q(x, pr.c0);
        pr.z1 = pp.add_q(rho, pp.mul_q(pr.c1, s));
    }
    return pr;
}

inline bool verify_bit_core(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                            const Bigint& e, const BitProof& pr) {
    if (!pp.in_group(e) || !pp.in_group(pr.a0) || !pp.in_group(pr.a1)) return false;
    Bigint x = challenge(pp, stmt, label, {e, pr.a0, pr.a1});
    if (pp.add_q(pr.c0, pr.c1) != x) return false;
    Bigint e_over_g = pp.mul(e, pp.inv(pp.g));
    if (pp.pow(pp.h, pr.z0) != pp.mul(pr.a0, pp.pow(e, pr.c0))) return false;
    if (pp.pow(pp.h, pr.z1) != pp.mul(pr.a1, pp.pow(e_over_g, pr.c1))) return false;
    return true;
}

inline size_t range_bits(uint64_t bound) {
    size_t m = 0;
    while ((uint64_t(1) << m) < bound + 1) ++m;
    return m == 0 ? 1 : m;
}

inline RangeProof prove_range_core(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                                   const Bigint& commitment, const Bigint& value,
                                   const Bigint& randomness, uint64_t bound, Rng& rng) {
    if (value < 0 || value > bound) throw ProverError("prove_range: value out of range");
    size_t m = range_bits(bound);
    RangeProof pr;
    Bigint w_sum = 0;
    for (size_t i = 0; i < m; ++i) {
        int b = (((value >> i) & 1) != 0) ? 1 : 0;
        Bigint w_i = pp.random_scalar(rng);
        Bigint c_i = pp.mul(pp.pow(pp.g, b), pp.pow(pp.h, w_i));
        pr.bit_comms.push_back(c_i);
        pr.bit_proofs.push_back(
            prove_bit_core(pp, stmt, label + "/bit" + std::to_string(i), c_i, b, w_i, rng));
        w_sum = pp.add_q(w_sum, pp.mul_q(Bigint(1) << i, w_i));
    }
    // recomposition: commitment / Pi C_i^{2^i} = h^{randomness - sum 2^i w_i}
    Bigint acc = commitment;
    for (size_t i = 0; i < m; ++i)
        acc = pp.mul(acc, pp.inv(pp.pow(pr.bit_comms[i], Bigint(1) << i)));
    pr.recomposition =
        prove_dlog_h(pp, stmt, label + "/recomp", acc, pp.sub_q(randomness, w_sum), rng);
    return pr;
}

inline bool verify_range_core(const GroupParams& pp, const Bytes& stmt, const std::string& label,
                              const Bigint& commitment, uint64_t bound, const RangeProof& pr) {
    size_t m = range_bits(bound);
    if (pr.bit_comms.size() != m || pr.bit_proofs.size() != m) return false;
    for (size_t i = 0; i < m; ++i) {
        if (!verify_bit_core(pp, stmt, label + "/bit" + std::to_string(i), pr.bit_comms[i],
                             pr.bit_proofs[i]))
            return false;
    }
    Bigint acc = commitment;
    if (!pp.in_group(acc)) return false;
    for (size_t i = 0; i < m; ++i)
        acc = pp.mul(acc, pp.inv(pp.pow(pr.bit_comms[i], Bigint(1) << i)));
    return verify_dlog_h(pp, stmt, label + "/recomp", acc, pr.recomposition);
}

// link proof: c = h^r Pi g_k^{v_k}  and  e_k = g^{v_k} h^{s_k}  share v
inline LinkProof prove_link(const GroupParams& pp, const Bytes& stmt, const Bigint& c,
                            const std::vector<Bigint>& coord_comms, const std::vector<Bigint>& v,
                            const Bigint& r, const std::vector<Bigint>& s, Rng& rng) {
    size_t n = v.size();
    LinkProof pr;
    Bigint rho_r = pp.random_scalar(rng);
    std::vector<Bigint> rho_v(n), rho_s(n);
    Bigint a = pp.pow(pp.h, rho_r);
    for (size_t k = 0; k < n; ++k) {
        rho_v[k] = pp.random_scalar(rng);
        rho_s[k] = pp.random_scalar(rng);
        a = pp.mul(a, pp.pow(pp.g_vec[k], rho_v[k]));
        pr.commit_coord.push_back(pp.mul(pp.pow(pp.g, rho_v[k]), pp.pow(pp.h, rho_s[k])));
    }
    pr.commit_vec = a;
    std::vector<Bigint> bound = {c, pr.commit_vec};
    for (const Bigint& e : coord_comms) bound.push_back(e);
    for (const Bigint& e : pr.commit_coord) bound.push_back(e);
    Bigint x = challenge(pp, stmt, "link", bound);
    pr.z_r = pp.add_q(rho_r, pp.mul_q(x, r));
    for (size_t k = 0; k < n; ++k) {
        pr.z_v.push_back(pp.add_q(rho_v[k], pp.mul_q(x, v[k])));
        pr.z_s.push_back(pp.add_q(rho_s[k], pp.mul_q(x, s[k])));
    }
    return pr;
}

inline bool verify_link(const GroupParams& pp, const Bytes& stmt, const Bigint& c,
                        const std::vector<Bigint>& coord_comms, const LinkProof& pr) {
    size_t n = coord_comms.size();
    if (pr.commit_coord.size() != n || pr.z_v.size() != n || pr.z_s.size() != n) return false;
    if (!pp.in_group(c) || !pp.in_group(pr.commit_vec)) return false;
    std::vector<Bigint> bound = {c, pr.commit_vec};
    for (const Bigint& e : coord_comms) {
        if (!pp.in_group(e)) return false;
        bound.push_back(e);
    }
    for (const Bigint& e : pr.commit_coord) {
        if (!pp.in_group(e)) return false;
        bound.push_back(e);
    }
    Bigint x = challenge(pp, stmt, "link", bound);
    Bigint lhs = pp.pow(pp.h, pr.z_r);
    for (size_t k = 0; k < n; ++k) lhs = pp.mul(lhs, pp.pow(pp.g_vec[k], pr.z_v[k]));
    if (lhs != pp.mul(pr.commit_vec, pp.pow(c, x))) return false;
    for (size_t k = 0; k < n; ++k) {
        Bigint l = pp.mul(pp.pow(pp.g, pr.z_v[k]), pp.pow(pp.h, pr.z_s[k]));
        if (l != pp.mul(pr.commit_coord[k], pp.pow(coord_comms[k], x))) return false;
    }
    return true;
}

}  // namespace sigma

// ---------------------------------------------------------------------------
// standalone bit / range proof interface (statement digest derived from
// the commitment itself)

inline Bytes bit_statement(const NizkContext& ctx, const GroupParams& pp, const Bigint& commitment) {
    ByteWriter w;
    w.blob(ctx.domain);
    w.blob(ctx.params_hash);
    w.raw(pp.enc_element(commitment));
    return sha256(w.bytes());
}

inline BitProof prove_bit(const NizkContext& ctx, const GroupParams& pp, const Bigint& commitment,
                          int value, const Bigint& randomness, Rng& rng) {
    return sigma::prove_bit_core(pp, bit_statement(ctx, pp, commitment), "bit", commitment, value,
                                 randomness, rng);
}

inline bool verify_bit(const NizkContext& ctx, const GroupParams& pp, const Bigint& commitment,
                       const BitProof& proof) {
    if (ctx.params_hash != pp.params_hash) return false;
    return sigma::verify_bit_core(pp, bit_statement(ctx, pp, commitment), "bit", commitment, proof);
}

inline RangeProof prove_range(const NizkContext& ctx, const GroupParams& pp, const Bigint& commitment,
                              const Bigint& value, const Bigint& randomness, uint64_t bound,
                              Rng& rng) {
    return sigma::prove_range_core(pp, bit_statement(ctx, pp, commitment), "range", commitment,
                                   value, randomness, bound, rng);
}

inline bool verify_range(const NizkContext& ctx, const GroupParams& pp, const Bigint& commitment,
                         uint64_t bound, const RangeProof& proof) {
    if (ctx.params_hash != pp.params_hash) return false;
    return sigma::verify_range_core(pp, bit_statement(ctx, pp, commitment), "range", commitment,
                                    bound, proof);
}

// ---------------------------------------------------------------------------
// R_vote

inline Bytes vote_statement(const NizkContext& ctx, const GroupParams& pp, const Bigint& aggregate,
                            const std::vector<Bigint>& aux, uint32_t voter_id,
                            const Bytes& election_id) {
    ByteWriter w;
    w.blob(ctx.domain);
    w.blob(ctx.params_hash);
    w.raw(pp.enc_element(aggregate));
    w.u32(static_cast<uint32_t>(aux.size()));
    for (const Bigint& e : aux) w.raw(pp.enc_element(e));
    w.u32(voter_id);
    w.blob(election_id);
    return sha256(w.bytes());
}

inline ProofVote prove_vote(const NizkContext& ctx, const GroupParams& pp,
                            const BallotSecrets& secrets,
                            const std::vector<Commitment>& share_commitments, uint32_t voter_id,
                            const Bytes& election_id, Rng& rng) {
    if (ctx.relation != Relation::vote) throw ProverError("prove_vote: wrong context");
    if (!is_one_hot(pp, secrets.vote)) throw ProverError("prove_vote: statement false (vote not one-hot)");
    if (secrets.shares.size() != share_commitments.size() ||
        secrets.shares.size() != secrets.randomness.size())
        throw ProverError("prove_vote: share/commitment count mismatch");
    size_t n = pp.n_choices();

    Bigint c = 1, r = 0;
    std::vector<Bigint> v(n, 0);
    for (size_t j = 0; j < secrets.shares.size(); ++j) {
        if (comm_vec(pp, secrets.shares[j], secrets.randomness[j]) != share_commitments[j])
            throw ProverError("prove_vote: statement false (commitment mismatch)");
        c = pp.mul(c, share_commitments[j].element);
        r = pp.add_q(r, secrets.randomness[j]);
        for (size_t k = 0; k < n; ++k) v[k] = pp.add_q(v[k], secrets.shares[j].coords[k]);
    }

    ProofVote pr;
    std::vector<Bigint> s(n);
    Bigint s_sum = 0;
    for (size_t k = 0; k < n; ++k) {
        s[k] = pp.random_scalar(rng);
        s_sum = pp.add_q(s_sum, s[k]);
        pr.aux.push_back(pp.mul(pp.pow(pp.g, v[k]), pp.pow(pp.h, s[k])));
    }
    Bytes stmt = vote_statement(ctx, pp, c, pr.aux, voter_id, election_id);
    for (size_t k = 0; k < n; ++k) {
        int bit = (v[k] == 1) ? 1 : 0;
        pr.bit_proofs.push_back(
            sigma::prove_bit_core(pp, stmt, "coord" + std::to_string(k), pr.aux[k], bit, s[k], rng));
    }
    Bigint sum_elem = pp.inv(pp.g);
    for (const Bigint& e : pr.aux) sum_elem = pp.mul(sum_elem, e);
    pr.sum_proof = sigma::prove_dlog_h(pp, stmt, "sum", sum_elem, s_sum, rng);
    pr.link = sigma::prove_link(pp, stmt, c, pr.aux, v, r, s, rng);
    return pr;
}

inline bool verify_vote(const NizkContext& ctx, const GroupParams& pp,
                        const Commitment& aggregate_commitment, const ProofVote& pr,
                        uint32_t voter_id, const Bytes& election_id) {
    if (ctx.relation != Relation::vote) return false;
    if (ctx.params_hash != pp.params_hash) return false;
    size_t n = pp.n_choices();
    if (pr.aux.size() != n || pr.bit_proofs.size() != n) return false;
    if (!pp.in_group(aggregate_commitment.element)) return false;
    for (const Bigint& e : pr.aux)
        if (!pp.in_group(e)) return false;
    Bytes stmt = vote_statement(ctx, pp, aggregate_commitment.element, pr.aux, voter_id, election_id);
    for (size_t k = 0; k < n; ++k)
        if (!sigma::verify_bit_core(pp, stmt, "coord" + std::to_string(k), pr.aux[k],
                                    pr.bit_proofs[k]))
            return false;
    Bigint sum_elem = pp.inv(pp.g);
    for (const Bigint& e : pr.aux) sum_elem = pp.mul(sum_elem, e);
    if (!sigma::verify_dlog_h(pp, stmt, "sum", sum_elem, pr.sum_proof)) return false;
    return sigma::verify_link(pp, stmt, aggregate_commitment.element, pr.aux, pr.link);
}

// ---------------------------------------------------------------------------
// R_res: winner = lowest-index argmax of T, shown by range proofs on
// d_k = T[w] - T[k] - strict_k with strict_k = 1 for k < w, 0 for k > w

inline size_t lowest_argmax(const std::vector<Bigint>& tally) {
    size_t w = 0;
    for (size_t k = 1; k < tally.size(); ++k)
        if (tally[k] > tally[w]) w = k;
    return w;
}

inline Bytes result_statement(const NizkContext& ctx, const GroupParams& pp, const Bigint& c_perp,
                              uint32_t winner, uint64_t n_v, const std::vector<Bigint>& tally_comms) {
    ByteWriter w;
    w.blob(ctx.domain);
    w.blob(ctx.params_hash);
    w.raw(pp.enc_element(c_perp));
    w.u32(winner);
    w.u64(n_v);
    w.u32(static_cast<uint32_t>(tally_comms.size()));
    for (const Bigint& e : tally_comms) w.raw(pp.enc_element(e));
    return sha256(w.bytes());
}

inline ProofResult prove_result(const NizkContext& ctx, const GroupParams& pp,
                                const std::vector<Bigint>& tally, const Bigint& opening,
                                const Commitment& c_perp, size_t winner, uint64_t n_v, Rng& rng) {
    if (ctx.relation != Relation::result) throw ProverError("prove_result: wrong context");
    size_t n = pp.n_choices();
    if (tally.size() != n) throw ProverError("prove_result: tally dimension mismatch");
    if (winner >= n) throw ProverError("prove_result: winner index out of range");
    if (comm_vec(pp, VoteShare{tally}, opening) != c_perp)
        throw ProverError("prove_result: statement false (opening mismatch)");
    for (const Bigint& t : tally)
        if (t < 0 || t > n_v) throw ProverError("prove_result: tally coordinate outside [0, n_v]");

    ProofResult pr;
    std::vector<Bigint> u(n);
    for (size_t k = 0; k < n; ++k) {
        u[k] = pp.random_scalar(rng);
        pr.tally_comms.push_back(pp.mul(pp.pow(pp.g, tally[k]), pp.pow(pp.h, u[k])));
    }
    Bytes stmt = result_statement(ctx, pp, c_perp.element, static_cast<uint32_t>(winner), n_v,
                                  pr.tally_comms);
    pr.link = sigma::prove_link(pp, stmt, c_perp.element, pr.tally_comms, tally, opening, u, rng);
    for (size_t k = 0; k < n; ++k) {
        if (k == winner) continue;
        Bigint strict = (k < winner) ? 1 : 0;
        Bigint d = tally[winner] - tally[k] - strict;
        if (d < 0 || d > n_v)
            throw ProverError("prove_result: winner is not the lowest-index argmax");
        Bigint d_comm = pp.mul(pr.tally_comms[winner],
                               pp.inv(pp.mul(pr.tally_comms[k], pp.pow(pp.g, strict))));
        Bigint d_rand = pp.sub_q(u[winner], u[k]);
        pr.ranges.push_back(sigma::prove_range_core(pp, stmt, "cmp" + std::to_string(k), d_comm, d,
                                                    d_rand, n_v, rng));
    }
    return pr;
}

inline bool verify_result(const NizkContext& ctx, const GroupParams& pp, const Commitment& c_perp,
                          size_t winner, const ProofResult& pr, uint64_t n_v) {
    if (ctx.relation != Relation::result) return false;
    if (ctx.params_hash != pp.params_hash) return false;
    size_t n = pp.n_choices();
    if (winner >= n || pr.tally_comms.size() != n || pr.ranges.size() != n - 1) return false;
    if (!pp.in_group(c_perp.element)) return false;
    for (const Bigint& e : pr.tally_comms)
        if (!pp.in_group(e)) return false;
    Bytes stmt = result_statement(ctx, pp, c_perp.element, static_cast<uint32_t>(winner), n_v,
                                  pr.tally_comms);
    if (!sigma::verify_link(pp, stmt, c_perp.element, pr.tally_comms, pr.link)) return false;
    size_t idx = 0;
    for (size_t k = 0; k < n; ++k) {
        if (k == winner) continue;
        Bigint strict = (k < winner) ? 1 : 0;
        Bigint d_comm = pp.mul(pr.tally_comms[winner],
                               pp.inv(pp.mul(pr.tally_comms[k], pp.pow(pp.g, strict))));
        if (!sigma::verify_range_core(pp, stmt, "cmp" + std::to_string(k), d_comm, n_v,
                                      pr.ranges[idx++]))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// shape-correct garbage proofs; used by adversary policies and the
// soundness fuzzing tests, never by honest actors

inline ProofVote garbage_vote_proof(const GroupParams& pp, Rng& rng) {
    size_t n = pp.n_choices();
    auto elem = [&] { return pp.pow(pp.g, pp.random_scalar(rng)); };
    auto scal = [&] { return pp.random_scalar(rng); };
    ProofVote pr;
    for (size_t k = 0; k < n; ++k) {
        pr.aux.push_back(elem());
        pr.bit_proofs.push_back(BitProof{elem(), elem(), scal(), scal(), scal(), scal()});
    }
    pr.sum_proof = SchnorrProof{elem(), scal()};
    pr.link.commit_vec = elem();
    pr.link.z_r = scal();
    for (size_t k = 0; k < n; ++k) {
        pr.link.commit_coord.push_back(elem());
        pr.link.z_v.push_back(scal());
        pr.link.z_s.push_back(scal());
    }
    return pr;
}

inline ProofResult garbage_result_proof(const GroupParams& pp, uint64_t n_v, Rng& rng) {
    size_t n = pp.n_choices();
    size_t m = sigma::range_bits(n_v);
    auto elem = [&] { return pp.pow(pp.g, pp.random_scalar(rng)); };
    auto scal = [&] { return pp.random_scalar(rng); };
    ProofResult pr;
    for (size_t k = 0; k < n; ++k) pr.tally_comms.push_back(elem());
    pr.link.commit_vec = elem();
    pr.link.z_r = scal();
    for (size_t k = 0; k < n; ++k) {
        pr.link.commit_coord.push_back(elem());
        pr.link.z_v.push_back(scal());
        pr.link.z_s.push_back(scal());
    }
    for (size_t k = 0; k + 1 < n; ++k) {
        RangeProof rp;
        for (size_t i = 0; i < m; ++i) {
            rp.bit_comms.push_back(elem());
            rp.bit_proofs.push_back(BitProof{elem(), elem(), scal(), scal(), scal(), scal()});
        }
        rp.recomposition = SchnorrProof{elem(), scal()};
        pr.ranges.push_back(std::move(rp));
    }
    return pr;
}

// ---------------------------------------------------------------------------
// serialization: version tag + fixed-width element/scalar stream

namespace wire {

constexpr uint8_t kProofFormatVersion = 1;

inline void put_schnorr(ByteWriter& w, const GroupParams& pp, const SchnorrProof& pr) {
    w.raw(pp.enc_element(pr.commit));
    w.raw(pp.enc_scalar(pr.response));
}
inline SchnorrProof get_schnorr(ByteReader& r, const GroupParams& pp) {
    SchnorrProof pr;
    Bytes e = r.raw(pp.element_bytes);
    pr.commit = decode_bigint(e.data(), e.size());
    Bytes s = r.raw(pp.scalar_bytes);
    pr.response = decode_bigint(s.data(), s.size());
    return pr;
}

inline void put_bit(ByteWriter& w, const GroupParams& pp, const BitProof& pr) {
    w.raw(pp.enc_element(pr.a0));
    w.raw(pp.enc_element(pr.a1));
    w.raw(pp.enc_scalar(pr.c0));
    w.raw(pp.enc_scalar(pr.c1));
    w.raw(pp.enc_scalar(pr.z0));
    w.raw(pp.enc_scalar(pr.z1));
}
inline BitProof get_bit(ByteReader& r, const GroupParams& pp) {
    auto elem = [&] {
        Bytes b = r.raw(pp.element_bytes);
        return decode_bigint(b.data(), b.size());
    };
    auto scal = [&] {
        Bytes b = r.raw(pp.scalar_bytes);
        return decode_bigint(b.data(), b.size());
    };
    BitProof pr;
    pr.a0 = elem();
    pr.a1 = elem();
    pr.c0 = scal();
    pr.c1 = scal();
    pr.z0 = scal();
    pr.z1 = scal();
    return pr;
}

inline void put_link(ByteWriter& w, const GroupParams& pp, const LinkProof& pr) {
    w.raw(pp.enc_element(pr.commit_vec));
    w.u32(static_cast<uint32_t>(pr.commit_coord.size()));
    for (const Bigint& e : pr.commit_coord) w.raw(pp.enc_element(e));
    w.raw(pp.enc_scalar(pr.z_r));
    for (const Bigint& z : pr.z_v) w.raw(pp.enc_scalar(z));
    for (const Bigint& z : pr.z_s) w.raw(pp.enc_scalar(z));
}
inline LinkProof get_link(ByteReader& r, const GroupParams& pp) {
    auto elem = [&] {
        Bytes b = r.raw(pp.element_bytes);
        return decode_bigint(b.data(), b.size());
    };
    auto scal = [&] {
        Bytes b = r.raw(pp.scalar_bytes);
        return decode_bigint(b.data(), b.size());
    };
    LinkProof pr;
    pr.commit_vec = elem();
    uint32_t n = r.u32();
    for (uint32_t k = 0; k < n; ++k) pr.commit_coord.push_back(elem());
    pr.z_r = scal();
    for (uint32_t k = 0; k < n; ++k) pr.z_v.push_back(scal());
    for (uint32_t k = 0; k < n; ++k) pr.z_s.push_back(scal());
    return pr;
}

inline void put_range(ByteWriter& w, const GroupParams& pp, const RangeProof& pr) {
    w.u32(static_cast<uint32_t>(pr.bit_comms.size()));
    for (const Bigint& e : pr.bit_comms) w.raw(pp.enc_element(e));
    for (const BitProof& b : pr.bit_proofs) put_bit(w, pp, b);
    put_schnorr(w, pp, pr.recomposition);
}
inline RangeProof get_range(ByteReader& r, const GroupParams& pp) {
    RangeProof pr;
    uint32_t m = r.u32();
    for (uint32_t i = 0; i < m; ++i) {
        Bytes b = r.raw(pp.element_bytes);
        pr.bit_comms.push_back(decode_bigint(b.data(), b.size()));
    }
    for (uint32_t i = 0; i < m; ++i) pr.bit_proofs.push_back(get_bit(r, pp));
    pr.recomposition = get_schnorr(r, pp);
    return pr;
}

}  // namespace wire

inline Bytes encode_proof_vote(const GroupParams& pp, const ProofVote& pr) {
    ByteWriter w;
    w.u8(wire::kProofFormatVersion);
    w.u32(static_cast<uint32_t>(pr.aux.size()));
    for (const Bigint& e : pr.aux) w.raw(pp.enc_element(e));
    for (const BitProof& b : pr.bit_proofs) wire::put_bit(w, pp, b);
    wire::put_schnorr(w, pp, pr.sum_proof);
    wire::put_link(w, pp, pr.link);
    return w.take();
}

inline ProofVote decode_proof_vote(const GroupParams& pp, const Bytes& data) {
    ByteReader r(data);
    if (r.u8() != wire::kProofFormatVersion)
        throw std::invalid_argument("decode_proof_vote: unknown format version");
    ProofVote pr;
    uint32_t n = r.u32();
    for (uint32_t k = 0; k < n; ++k) {
        Bytes b = r.raw(pp.element_bytes);
        pr.aux.push_back(decode_bigint(b.data(), b.size()));
    }
    for (uint32_t k = 0; k < n; ++k) pr.bit_proofs.push_back(wire::get_bit(r, pp));
    pr.sum_proof = wire::get_schnorr(r, pp);
    pr.link = wire::get_link(r, pp);
    return pr;
}

inline Bytes encode_proof_result(const GroupParams& pp, const ProofResult& pr) {
    ByteWriter w;
    w.u8(wire::kProofFormatVersion);
    w.u32(static_cast<uint32_t>(pr.tally_comms.size()));
    for (const Bigint& e : pr.tally_comms) w.raw(pp.enc_element(e));
    wire::put_link(w, pp, pr.link);
    w.u32(static_cast<uint32_t>(pr.ranges.size()));
    for (const RangeProof& rp : pr.ranges) wire::put_range(w, pp, rp);
    return w.take();
}

inline ProofResult decode_proof_result(const GroupParams& pp, const Bytes& data) {
    ByteReader r(data);
    if (r.u8() != wire::kProofFormatVersion)
        throw std::invalid_argument("decode_proof_result: unknown format version");
    ProofResult pr;
    uint32_t n = r.u32();
    for (uint32_t k = 0; k < n; ++k) {
        Bytes b = r.raw(pp.element_bytes);
        pr.tally_comms.push_back(decode_bigint(b.data(), b.size()));
    }
    pr.link = wire::get_link(r, pp);
    uint32_t nr = r.u32();
    for (uint32_t k = 0; k < nr; ++k) pr.ranges.push_back(wire::get_range(r, pp));
    return pr;
}

}  // namespace ace

#endif  // ACE_PROOFS_HPP_
