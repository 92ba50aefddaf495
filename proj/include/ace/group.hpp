/****************************************************************************
prime-order group backends, Pedersen vector commitments with
re-randomization, additive vote sharding, Schnorr signatures and
Fiat-Shamir challenge derivation
*****************************************************************************/
#ifndef ACE_GROUP_HPP_
#define ACE_GROUP_HPP_

#include "ace/bytes.hpp"

#include <algorithm>
#include <optional>
#include <random>

namespace ace {

enum class Backend : uint8_t { production = 0, tiny_test = 1 };

// deterministic randomness source; forked per actor so delivery order
// does not perturb the scalars an actor draws
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t u64() { return eng_(); }

    // uniform in [0, bound) by rejection over the minimal bit width
    Bigint below(const Bigint& bound) {
        if (bound <= 0) throw std::invalid_argument("Rng::below: empty range");
        size_t bits = 0;
        for (Bigint b = bound - 1; b > 0; b >>= 1) ++bits;
        if (bits == 0) return 0;
        for (;;) {
            Bigint x = 0;
            for (size_t got = 0; got < bits; got += 64) {
                x <<= 64;
                x += eng_();
            }
            size_t drawn = ((bits + 63) / 64) * 64;
            x >>= (drawn - bits);
            if (x < bound) return x;
        }
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    bool coin(double p) { return uniform() < p; }

    Rng fork(uint64_t tag) {
        return Rng(eng_() ^ (tag * 0x9e3779b97f4a7c15ULL) ^ 0xace5eedULL);
    }

  private:
    std::mt19937_64 eng_;
};

struct Scalar {
    Bigint value;  // reduced mod q by all operations
};

struct GroupParams {
    Backend backend;
    Bigint p;                    // field modulus
    Bigint q;                    // prime subgroup order
    Bigint h;                    // blinding generator
    std::vector<Bigint> g_vec;   // per-candidate generators g_1..g_n
    Bigint g;                    // common base for per-coordinate proof commitments
    Bytes domain_tag;
    size_t scalar_bytes;
    size_t element_bytes;
    Bytes params_hash;

    // tiny_test only: lambda_k = log_h(g_k) and lambda_g = log_h(g)
    std::optional<std::vector<Bigint>> trapdoor;
    std::optional<Bigint> trapdoor_g;

    size_t n_choices() const { return g_vec.size(); }

    Bigint mul(const Bigint& a, const Bigint& b) const { return a * b % p; }
    Bigint pow(const Bigint& base, const Bigint& e) const {
        Bigint r = e % q;
        if (r < 0) r += q;
        return boost::multiprecision::powm(base, r, p);
    }
    Bigint inv(const Bigint& a) const {
        return boost::multiprecision::powm(a, p - 2, p);
    }
    bool in_group(const Bigint& a) const {
        return a > 0 && a < p && boost::multiprecision::powm(a, q, p) == 1;
    }

    Bigint mod_q(const Bigint& a) const {
        Bigint r = a % q;
        if (r < 0) r += q;
        return r;
    }
    Bigint add_q(const Bigint& a, const Bigint& b) const { return mod_q(a + b); }
    Bigint sub_q(const Bigint& a, const Bigint& b) const { return mod_q(a - b); }
    Bigint mul_q(const Bigint& a, const Bigint& b) const { return mod_q(a * b); }

    Bigint random_scalar(Rng& rng) const { return rng.below(q); }

    Bytes enc_scalar(const Bigint& s) const { return encode_bigint(mod_q(s), scalar_bytes); }
    Bytes enc_element(const Bigint& e) const { return encode_bigint(e, element_bytes); }
};

struct VoteVector {
    std::vector<Bigint> coords;
};

struct VoteShare {
    std::vector<Bigint> coords;
};

struct Commitment {
    Bigint element;
    bool operator==(const Commitment& o) const { return element == o.element; }
};

struct BallotSecrets {
    VoteVector vote;
    std::vector<VoteShare> shares;
    std::vector<Bigint> randomness;  // r^(j), one per share
};

struct Signature {
    Bigint challenge;
    Bigint response;
};

struct KeyPair {
    Bigint sk;
    Bigint pk;
};

namespace detail {

// counter-expanded SHA-256 stream, reduced wide so the bias is
// negligible relative to q
inline Bigint hash_wide_mod(const Bytes& input, const Bigint& modulus, size_t width_bytes) {
    Bytes acc;
    uint32_t ctr = 0;
    while (acc.size() < 2 * width_bytes) {
        ByteWriter w;
        w.u32(ctr++);
        w.raw(input);
        Bytes d = sha256(w.bytes());
        append_bytes(acc, d);
    }
    acc.resize(2 * width_bytes);
    return decode_bigint(acc.data(), acc.size()) % modulus;
}

inline const char* kProductionP =
    "60ad2b5ed9f771e908cfd20f13c0dea24590ba2475e8a6604d3f242b7f9c896c"
    "f6b74995514eaf2a11b7fea40cd08b022acbb8f4ef2ed7be1386b271b094ed49";
inline const char* kProductionQ =
    "a3b8c1e9392456de3eb13b9046685257bdd640fb06671ad11c80317fa3b179af";

inline Bigint from_hex_bigint(const std::string& hex) {
    Bigint v = 0;
    for (char c : hex) {
        v <<= 4;
        if (c >= '0' && c <= '9') v += c - '0';
        else if (c >= 'a' && c <= 'f') v += c - 'a' + 10;
        else throw std::invalid_argument("bad hex constant");
    }
    return v;
}

// hash-to-group: map a labeled counter into the order-q subgroup by
// cofactor exponentiation, rejecting the identity
inline Bigint hash_to_group(const Bigint& p, const Bigint& q, const Bytes& domain,
                            const std::string& label, uint32_t index) {
    Bigint cofactor = (p - 1) / q;
    for (uint32_t ctr = 0;; ++ctr) {
        ByteWriter w;
        w.blob(domain);
        w.blob(to_bytes("ace-gen"));
        w.blob(to_bytes(label));
        w.u32(index);
        w.u32(ctr);
        Bigint x = hash_wide_mod(w.bytes(), p, (boost::multiprecision::msb(p) + 8) / 8);
        if (x <= 1) continue;
        Bigint e = boost::multiprecision::powm(x, cofactor, p);
        if (e != 1) return e;
    }
}

}  // namespace detail

inline Bytes params_digest(const GroupParams& pp) {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(pp.backend));
    w.blob(encode_bigint(pp.p, pp.element_bytes));
    w.blob(encode_bigint(pp.q, pp.element_bytes));
    w.blob(pp.enc_element(pp.h));
    w.blob(pp.enc_element(pp.g));
    w.u32(static_cast<uint32_t>(pp.g_vec.size()));
    for (const Bigint& gk : pp.g_vec) w.raw(pp.enc_element(gk));
    w.blob(pp.domain_tag);
    return sha256(w.bytes());
}

inline GroupParams derive_params(Backend backend, size_t n_choices, const Bytes& domain_tag) {
    if (n_choices < 2) throw std::invalid_argument("derive_params: need at least 2 choices");
    GroupParams pp;
    pp.backend = backend;
    pp.domain_tag = domain_tag;
    if (backend == Backend::tiny_test) {
        // order-11 subgroup of Z_23^*, discrete logs of all generators known
        static const int lambdas[] = {3, 2, 4, 5, 6, 8, 9, 10};
        if (n_choices > 8)
            throw std::invalid_argument("derive_params: tiny_test supports at most 8 choices");
        pp.p = 23;
        pp.q = 11;
        pp.h = 3;
        std::vector<Bigint> trap;
        for (size_t k = 0; k < n_choices; ++k) {
            trap.emplace_back(lambdas[k]);
            pp.g_vec.push_back(boost::multiprecision::powm(Bigint(3), Bigint(lambdas[k]), Bigint(23)));
        }
        pp.g = 2;  // 3^7 mod 23
        pp.trapdoor = trap;
        pp.trapdoor_g = 7;
        pp.scalar_bytes = 1;
        pp.element_bytes = 1;
    } else {
        pp.p = detail::from_hex_bigint(detail::kProductionP);
        pp.q = detail::from_hex_bigint(detail::kProductionQ);
        pp.scalar_bytes = 32;
        pp.element_bytes = 64;
        pp.h = detail::hash_to_group(pp.p, pp.q, domain_tag, "h", 0);
        pp.g = detail::hash_to_group(pp.p, pp.q, domain_tag, "g", 0);
        for (size_t k = 0; k < n_choices; ++k)
            pp.g_vec.push_back(detail::hash_to_group(pp.p, pp.q, domain_tag, "g_vec", static_cast<uint32_t>(k + 1)));
        // generators must be pairwise distinct; with hash-derivation a
        // collision would mean a SHA-256 collision, but check anyway
        std::vector<Bigint> all = pp.g_vec;
        all.push_back(pp.h);
        all.push_back(pp.g);
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw std::runtime_error("derive_params: generator collision");
    }
    pp.params_hash = params_digest(pp);
    return pp;
}

inline Commitment comm_vec(const GroupParams& pp, const VoteShare& v, const Bigint& r) {
    if (v.coords.size() != pp.g_vec.size())
        throw std::invalid_argument("comm_vec: dimension mismatch");
    Bigint c = pp.pow(pp.h, r);
    for (size_t k = 0; k < v.coords.size(); ++k)
        c = pp.mul(c, pp.pow(pp.g_vec[k], v.coords[k]));
    return Commitment{c};
}

inline Commitment rerand(const GroupParams& pp, const Commitment& c, const Bigint& r_blind) {
    return Commitment{pp.mul(c.element, pp.pow(pp.h, r_blind))};
}

inline Commitment derand(const GroupParams& pp, const Commitment& c_blinded, const Bigint& r_blind) {
    return Commitment{pp.mul(c_blinded.element, pp.inv(pp.pow(pp.h, r_blind)))};
}

inline bool is_one_hot(const GroupParams& pp, const VoteVector& v) {
    if (v.coords.size() != pp.g_vec.size()) return false;
    size_t ones = 0;
    for (const Bigint& x : v.coords) {
        if (x == 1) ++ones;
        else if (x != 0) return false;
    }
    return ones == 1;
}

inline BallotSecrets share_vote(const GroupParams& pp, const VoteVector& v, size_t n_t, Rng& rng) {
    if (!is_one_hot(pp, v)) throw std::invalid_argument("share_vote: vote not in choice set");
    if (n_t < 1) throw std::invalid_argument("share_vote: need at least one tallier");
    BallotSecrets out;
    out.vote = v;
    std::vector<Bigint> last = v.coords;
    for (size_t j = 0; j + 1 < n_t; ++j) {
        VoteShare s;
        for (size_t k = 0; k < v.coords.size(); ++k) {
            Bigint x = pp.random_scalar(rng);
            s.coords.push_back(x);
            last[k] = pp.sub_q(last[k], x);
        }
        out.shares.push_back(std::move(s));
    }
    out.shares.push_back(VoteShare{last});
    for (size_t j = 0; j < n_t; ++j) out.randomness.push_back(pp.random_scalar(rng));
    return out;
}

inline Bigint hash_to_scalar(const GroupParams& pp, const Bytes& domain, const Bytes& transcript) {
    ByteWriter w;
    w.blob(domain);
    w.blob(transcript);
    return detail::hash_wide_mod(w.bytes(), pp.q, pp.scalar_bytes);
}

// ---------------------------------------------------------------------------
// Schnorr signatures over the protocol group (base g)

inline KeyPair keygen(const GroupParams& pp, Rng& rng) {
    KeyPair kp;
    kp.sk = pp.random_scalar(rng);
    kp.pk = pp.pow(pp.g, kp.sk);
    return kp;
}

inline Signature sign(const GroupParams& pp, const KeyPair& kp, const Bytes& message, Rng& rng) {
    Bigint nonce = pp.random_scalar(rng);
    Bigint commit = pp.pow(pp.g, nonce);
    ByteWriter w;
    w.blob(pp.params_hash);
    w.blob(pp.enc_element(kp.pk));
    w.blob(pp.enc_element(commit));
    w.blob(message);
    Bigint e = hash_to_scalar(pp, to_bytes("ace-sig"), w.bytes());
    Bigint z = pp.add_q(nonce, pp.mul_q(e, kp.sk));
    return Signature{e, z};
}

inline bool verify_sig(const GroupParams& pp, const Bigint& pk, const Bytes& message,
                       const Signature& sig) {
    if (!pp.in_group(pk)) return false;
    Bigint commit = pp.mul(pp.pow(pp.g, sig.response), pp.inv(pp.pow(pk, sig.challenge)));
    ByteWriter w;
    w.blob(pp.params_hash);
    w.blob(pp.enc_element(pk));
    w.blob(pp.enc_element(commit));
    w.blob(message);
    return hash_to_scalar(pp, to_bytes("ace-sig"), w.bytes()) == pp.mod_q(sig.challenge);
}

// ---------------------------------------------------------------------------
// trapdoor equivocation: given the real opening of a re-randomized
// commitment, produce the blinding factor that opens it to any fake
// (vote, randomness) pair.  tiny_test only.

inline Bigint forge_rerand_witness(const GroupParams& pp, const Commitment& c_blinded,
                                   const VoteShare& fake_vote, const Bigint& fake_r,
                                   const VoteShare& real_vote, const Bigint& real_r,
                                   const Bigint& real_rblind) {
    if (!pp.trapdoor) throw std::invalid_argument("forge_rerand_witness: trapdoor unavailable");
    (void)c_blinded;
    const std::vector<Bigint>& lambda = *pp.trapdoor;
    Bigint out = pp.sub_q(pp.add_q(real_r, real_rblind), fake_r);
    for (size_t k = 0; k < lambda.size(); ++k) {
        Bigint diff = pp.sub_q(real_vote.coords[k], fake_vote.coords[k]);
        out = pp.add_q(out, pp.mul_q(diff, lambda[k]));
    }
    return out;
}

}  // namespace ace

#endif  // ACE_GROUP_HPP_
