#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "gtcm/interleave.hpp"
#include "oracle_helpers.hpp"

using namespace gtcm;

static Bytes key_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

TEST_CASE("primality") {
    REQUIRE(is_prime(2));
    REQUIRE(is_prime(3));
    REQUIRE(is_prime(5));
    REQUIRE(is_prime(101));
    REQUIRE(is_prime(251));
    REQUIRE_FALSE(is_prime(0));
    REQUIRE_FALSE(is_prime(1));
    REQUIRE_FALSE(is_prime(4));
    REQUIRE_FALSE(is_prime(100));
    REQUIRE_FALSE(is_prime(249));  // 3 * 83
    REQUIRE(is_prime((uint64_t(1) << 31) - 1));
}

TEST_CASE("derived coefficients match the frozen reference") {
    LinearPermutation p = derive_permutation(key_of("k"), 1, 0, 251);
    REQUIRE(p.a == 116);
    REQUIRE(p.b == 121);
    REQUIRE(p.m == 251);
    // inverse really inverts the multiplier
    REQUIRE(detail::mulmod(p.a, p.a_inv, p.m) == 1);
}

TEST_CASE("derivation is deterministic and context-sensitive") {
    Bytes key = key_of("secret");
    LinearPermutation p1 = derive_permutation(key, 7, 3, 251);
    LinearPermutation p2 = derive_permutation(key, 7, 3, 251);
    REQUIRE(p1.a == p2.a);
    REQUIRE(p1.b == p2.b);

    LinearPermutation q1 = derive_permutation(key, 8, 3, 251);
    LinearPermutation q2 = derive_permutation(key, 7, 4, 251);
    LinearPermutation q3 = derive_permutation(key_of("other"), 7, 3, 251);
    bool all_same = (q1.a == p1.a && q1.b == p1.b) && (q2.a == p1.a && q2.b == p1.b) &&
                    (q3.a == p1.a && q3.b == p1.b);
    REQUIRE_FALSE(all_same);
}

TEST_CASE("fixed coefficients give the expected shuffle") {
    LinearPermutation p = make_permutation(2, 1, 5);
    std::vector<char> in{'a', 'b', 'c', 'd', 'e'};
    REQUIRE(permute(p, in) == std::vector<char>{'b', 'd', 'a', 'c', 'e'});
    REQUIRE(inverse_permute(p, permute(p, in)) == in);

    LinearPermutation id = make_permutation(1, 0, 5);
    REQUIRE(permute(id, in) == in);
}

TEST_CASE("two-element domain admits only the identity multiplier") {
    for (uint64_t s = 0; s < 6; ++s) {
        LinearPermutation p = derive_permutation(key_of("k"), s, 0, 2);
        REQUIRE(p.a == 1);
        REQUIRE(p.b <= 1);
    }
}

TEST_CASE("permutations are bijections for every coefficient choice") {
    for (uint64_t m : {2ull, 3ull, 5ull, 101ull, 251ull}) {
        std::vector<uint8_t> hit(m);
        for (uint64_t a = 1; a < m; ++a)
            for (uint64_t b = 0; b < m; ++b) {
                LinearPermutation p = make_permutation(a, b, m);
                std::fill(hit.begin(), hit.end(), 0);
                for (size_t x = 0; x < m; ++x) hit[p.map(x)] = 1;
                for (uint8_t h : hit)
                    if (!h) FAIL("index not covered");
                // spot-check the inverse on one point
                REQUIRE(p.inverse_map(p.map(size_t(b % m))) == size_t(b % m));
            }
    }
}

TEST_CASE("round trips on random data") {
    std::mt19937_64 rng(31);
    for (uint64_t m : {2ull, 3ull, 5ull, 101ull, 251ull}) {
        std::vector<uint32_t> v(m);
        for (auto& x : v) x = uint32_t(rng());
        LinearPermutation p = derive_permutation(key_of("rt"), rng() % 100, rng() % 100, m);
        REQUIRE(inverse_permute(p, permute(p, v)) == v);
        REQUIRE(permute(p, inverse_permute(p, v)) == v);
    }
}

TEST_CASE("coefficients are uniform across contexts") {
    Bytes key = key_of("uniformity");
    const uint64_t m = 251;
    const int contexts = 4000;
    std::vector<uint64_t> a_counts(m - 1, 0), b_counts(m, 0);
    for (int s = 0; s < contexts; ++s) {
        LinearPermutation p = derive_permutation(key, uint64_t(s), uint64_t(s % 7), m);
        a_counts[p.a - 1]++;
        b_counts[p.b]++;
    }
    REQUIRE(oracle::chi2_stat(a_counts, double(contexts) / double(m - 1)) <
            oracle::chi2_crit_99(int(m) - 2));
    REQUIRE(oracle::chi2_stat(b_counts, double(contexts) / double(m)) <
            oracle::chi2_crit_99(int(m) - 1));
}

TEST_CASE("invalid parameters are rejected") {
    REQUIRE_THROWS_AS(make_permutation(1, 0, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(make_permutation(1, 0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(make_permutation(0, 0, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(make_permutation(5, 0, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(make_permutation(1, 5, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(derive_permutation(key_of("k"), 0, 0, 100), std::invalid_argument);

    LinearPermutation p = make_permutation(2, 1, 5);
    std::vector<int> wrong(4);
    REQUIRE_THROWS_AS(permute(p, wrong), std::invalid_argument);
    REQUIRE_THROWS_AS(inverse_permute(p, wrong), std::invalid_argument);
}
