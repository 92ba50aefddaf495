#include <catch2/catch_amalgamated.hpp>

#include "ace/group.hpp"

using namespace ace;

static GroupParams tiny() {
    return derive_params(Backend::tiny_test, 2, to_bytes("ace-v1"));
}

TEST_CASE("tiny_test parameter derivation matches the hand table") {
    GroupParams pp = tiny();
    CHECK(pp.p == 23);
    CHECK(pp.q == 11);
    CHECK(pp.h == 3);
    REQUIRE(pp.g_vec.size() == 2);
    CHECK(pp.g_vec[0] == 4);   // 3^3 mod 23
    CHECK(pp.g_vec[1] == 9);   // 3^2 mod 23
    CHECK(pp.g == 2);          // 3^7 mod 23
    REQUIRE(pp.trapdoor.has_value());
    CHECK((*pp.trapdoor)[0] == 3);
    CHECK((*pp.trapdoor)[1] == 2);
    CHECK(pp.trapdoor_g == Bigint(7));
}

TEST_CASE("parameter derivation is deterministic") {
    GroupParams a = tiny();
    GroupParams b = tiny();
    CHECK(a.params_hash == b.params_hash);
    CHECK(a.h == b.h);
    CHECK(a.g_vec == b.g_vec);
}

TEST_CASE("production parameters have the right shape") {
    GroupParams pp = derive_params(Backend::production, 4, to_bytes("ace-v1"));
    CHECK(pp.g_vec.size() == 4);
    CHECK_FALSE(pp.trapdoor.has_value());
    CHECK(boost::multiprecision::msb(pp.q) + 1 >= 250);
    CHECK(pp.in_group(pp.h));
    CHECK(pp.in_group(pp.g));
    for (const Bigint& gk : pp.g_vec) CHECK(pp.in_group(gk));
    // pairwise distinct generators
    std::vector<Bigint> all = pp.g_vec;
    all.push_back(pp.h);
    all.push_back(pp.g);
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST_CASE("comm_vec matches the worked examples") {
    GroupParams pp = tiny();
    CHECK(comm_vec(pp, VoteShare{{1, 0}}, 5).element == 6);
    CHECK(comm_vec(pp, VoteShare{{0, 0}}, 0).element == 1);
    Bigint lhs = pp.mul(comm_vec(pp, VoteShare{{1, 0}}, 5).element,
                        comm_vec(pp, VoteShare{{0, 1}}, 2).element);
    CHECK(comm_vec(pp, VoteShare{{0, 1}}, 2).element == 12);
    CHECK(lhs == 3);
    CHECK(comm_vec(pp, VoteShare{{1, 1}}, 7).element == 3);
    CHECK_THROWS_AS(comm_vec(pp, VoteShare{{1, 0, 0}}, 1), std::invalid_argument);
}

TEST_CASE("rerand and derand match the worked examples") {
    GroupParams pp = tiny();
    CHECK(rerand(pp, Commitment{6}, 3).element == 1);
    CHECK(rerand(pp, Commitment{6}, 0).element == 6);
    CHECK(derand(pp, Commitment{1}, 3).element == 6);
    CHECK(derand(pp, Commitment{6}, 0).element == 6);
}

TEST_CASE("rerand composes additively and derand inverts it") {
    GroupParams pp = tiny();
    Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        Bigint c = pp.pow(pp.h, rng.below(pp.q));  // random subgroup element
        Bigint a = rng.below(pp.q);
        Bigint b = rng.below(pp.q);
        CHECK(rerand(pp, rerand(pp, Commitment{c}, a), b).element ==
              rerand(pp, Commitment{c}, pp.add_q(a, b)).element);
        CHECK(derand(pp, rerand(pp, Commitment{c}, a), a).element == c);
    }
}

TEST_CASE("homomorphism holds for random inputs on both backends") {
    for (Backend be : {Backend::tiny_test, Backend::production}) {
        GroupParams pp = derive_params(be, 2, to_bytes("ace-v1"));
        Rng rng(7);
        int iters = be == Backend::tiny_test ? 500 : 50;
        for (int i = 0; i < iters; ++i) {
            VoteShare v1{{rng.below(pp.q), rng.below(pp.q)}};
            VoteShare v2{{rng.below(pp.q), rng.below(pp.q)}};
            Bigint r1 = rng.below(pp.q), r2 = rng.below(pp.q);
            VoteShare sum{{pp.add_q(v1.coords[0], v2.coords[0]),
                           pp.add_q(v1.coords[1], v2.coords[1])}};
            CHECK(pp.mul(comm_vec(pp, v1, r1).element, comm_vec(pp, v2, r2).element) ==
                  comm_vec(pp, sum, pp.add_q(r1, r2)).element);
        }
    }
}

TEST_CASE("share_vote splits and reconstructs") {
    GroupParams pp = tiny();
    Rng rng(3);
    SECTION("degenerate single-tallier split") {
        BallotSecrets s = share_vote(pp, VoteVector{{1, 0}}, 1, rng);
        REQUIRE(s.shares.size() == 1);
        CHECK(s.shares[0].coords == std::vector<Bigint>{1, 0});
    }
    SECTION("worked reconstruction identity") {
        // q=11: shares ((5,7),(7,4)) sum to (12,11) = (1,0) mod 11
        CHECK(pp.add_q(5, 7) == 1);
        CHECK(pp.add_q(7, 4) == 0);
    }
    SECTION("random draws always reconstruct") {
        for (int i = 0; i < 1000; ++i) {
            size_t n_t = 1 + i % 5;
            VoteVector v{{i % 2 == 0 ? 1 : 0, i % 2 == 0 ? 0 : 1}};
            BallotSecrets s = share_vote(pp, v, n_t, rng);
            REQUIRE(s.shares.size() == n_t);
            REQUIRE(s.randomness.size() == n_t);
            for (size_t k = 0; k < 2; ++k) {
                Bigint sum = 0;
                for (const VoteShare& sh : s.shares) sum = pp.add_q(sum, sh.coords[k]);
                CHECK(sum == v.coords[k]);
            }
        }
    }
    SECTION("invalid vote refused") {
        CHECK_THROWS_AS(share_vote(pp, VoteVector{{1, 1}}, 2, rng), std::invalid_argument);
        CHECK_THROWS_AS(share_vote(pp, VoteVector{{0, 0}}, 2, rng), std::invalid_argument);
    }
}

TEST_CASE("signatures verify and reject tampering") {
    for (Backend be : {Backend::tiny_test, Backend::production}) {
        GroupParams pp = derive_params(be, 2, to_bytes("ace-v1"));
        Rng rng(11);
        KeyPair kp = keygen(pp, rng);
        KeyPair other = keygen(pp, rng);
        Bytes m = to_bytes("a canonical message");
        Signature sig = sign(pp, kp, m, rng);
        CHECK(verify_sig(pp, kp.pk, m, sig));
        Bytes m2 = m;
        m2[0] ^= 1;
        CHECK_FALSE(verify_sig(pp, kp.pk, m2, sig));
        CHECK_FALSE(verify_sig(pp, other.pk, m, sig));
    }
}

TEST_CASE("hash_to_scalar is deterministic, domain separated and in range") {
    GroupParams pp = derive_params(Backend::production, 2, to_bytes("ace-v1"));
    Bytes t = to_bytes("transcript");
    CHECK(hash_to_scalar(pp, to_bytes("d1"), t) == hash_to_scalar(pp, to_bytes("d1"), t));
    int collisions = 0;
    for (int i = 0; i < 1000; ++i) {
        Bytes ti = to_bytes("t" + std::to_string(i));
        Bigint a = hash_to_scalar(pp, to_bytes("d1"), ti);
        Bigint b = hash_to_scalar(pp, to_bytes("d2"), ti);
        CHECK(a >= 0);
        CHECK(a < pp.q);
        if (a == b) ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("forge_rerand_witness equivocates re-randomized commitments") {
    GroupParams pp = tiny();
    SECTION("worked example") {
        VoteShare real{{1, 0}};
        Bigint r = 5, rblind = 3;
        Commitment c_blinded = rerand(pp, comm_vec(pp, real, r), rblind);
        CHECK(c_blinded.element == 1);
        VoteShare fake{{0, 1}};
        Bigint fake_r = 1;
        Bigint forged = forge_rerand_witness(pp, c_blinded, fake, fake_r, real, r, rblind);
        CHECK(forged == 8);
        CHECK(rerand(pp, comm_vec(pp, fake, fake_r), forged).element == c_blinded.element);
    }
    SECTION("identity forgery returns the real blinding factor") {
        VoteShare real{{0, 1}};
        Bigint r = 4, rblind = 9;
        Commitment cb = rerand(pp, comm_vec(pp, real, r), rblind);
        CHECK(forge_rerand_witness(pp, cb, real, r, real, r, rblind) == rblind);
    }
    SECTION("random fakes always satisfy the verification equation") {
        Rng rng(23);
        for (int i = 0; i < 1000; ++i) {
            VoteShare real{{rng.below(pp.q), rng.below(pp.q)}};
            Bigint r = rng.below(pp.q), rblind = rng.below(pp.q);
            Commitment cb = rerand(pp, comm_vec(pp, real, r), rblind);
            VoteShare fake{{rng.below(pp.q), rng.below(pp.q)}};
            Bigint fake_r = rng.below(pp.q);
            Bigint forged = forge_rerand_witness(pp, cb, fake, fake_r, real, r, rblind);
            CHECK(rerand(pp, comm_vec(pp, fake, fake_r), forged).element == cb.element);
        }
    }
    SECTION("missing trapdoor refused") {
        GroupParams prod = derive_params(Backend::production, 2, to_bytes("ace-v1"));
        CHECK_THROWS_AS(forge_rerand_witness(prod, Commitment{1}, VoteShare{{0, 1}}, 0,
                                             VoteShare{{1, 0}}, 0, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("canonical scalar encoding is fixed width big endian") {
    GroupParams pp = tiny();
    CHECK(pp.enc_scalar(7) == Bytes{7});
    CHECK(pp.enc_scalar(13) == Bytes{2});  // reduced mod 11
    GroupParams prod = derive_params(Backend::production, 2, to_bytes("ace-v1"));
    CHECK(prod.enc_scalar(1).size() == 32);
    CHECK(prod.enc_element(prod.h).size() == 64);
}
