#include <doctest.h>

#include "nccell/errors.hpp"
#include "nccell/integrity.hpp"
#include "nccell/stats.hpp"

using namespace nccell;

namespace {

struct Fixture {
    Field f{8};
    Rng rng{21};
    Generation gen = Generation::random(f, 3, 4, 16, rng);
    std::vector<MacKey> keys = [&] {
        std::vector<MacKey> k;
        for (KeyId i = 0; i < 3; ++i) k.push_back(MacKey::random(f, i, 16, rng));
        return k;
    }();

    CodedPacket tagged() {
        auto p = encode(f, gen, rng);
        attach_tags(f, p, keys);
        return p;
    }
};

}  // namespace

TEST_CASE("key construction") {
    CHECK_THROWS_AS(MacKey(0, FieldVector{1}), InvalidParameter);
    CHECK_THROWS_AS(MacKey(0, FieldVector{1, 2, 0}), InvalidParameter);
    const Field f(4);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) CHECK(MacKey::random(f, 0, 8, rng).vec().back() != 0);
}

TEST_CASE("make_tag") {
    Fixture fx;
    CHECK(make_tag(fx.f, FieldVector(16, 0), fx.keys[0]) == 0);
    for (int t = 0; t < 100; ++t) {
        const auto p1 = random_vector(fx.f, 16, fx.rng), p2 = random_vector(fx.f, 16, fx.rng);
        const Element t1 = make_tag(fx.f, p1, fx.keys[1]);
        CHECK(verify_tag(fx.f, p1, t1, fx.keys[1]));
        FieldVector sum(16);
        for (int i = 0; i < 16; ++i) sum[i] = p1[i] ^ p2[i];
        CHECK(make_tag(fx.f, sum, fx.keys[1]) == (t1 ^ make_tag(fx.f, p2, fx.keys[1])));
        // The tag zeroes the extended inner product.
        FieldVector ext(p1);
        ext.push_back(t1);
        CHECK(fx.f.dot(ext, fx.keys[1].vec()) == 0);
    }
    CHECK_THROWS_AS(make_tag(fx.f, FieldVector(15, 0), fx.keys[0]), DimensionMismatch);
}

TEST_CASE("verify_tags") {
    Fixture fx;
    auto p = fx.tagged();
    for (bool v : verify_tags(fx.f, p, fx.keys)) CHECK(v);
    for (std::size_t i = 0; i < fx.keys.size(); ++i)
        for (Element delta = 1; delta < 256; delta = static_cast<Element>(delta * 3 % 256 + 1)) {
            auto q = p;
            q.tags[i] ^= delta;
            const auto v = verify_tags(fx.f, q, fx.keys);
            for (std::size_t j = 0; j < v.size(); ++j) CHECK(v[j] == (j != i));
        }
    p.tags.pop_back();
    CHECK_THROWS_AS(verify_tags(fx.f, p, fx.keys), DimensionMismatch);
}

TEST_CASE("forged random tags pass one q=16 check at about 1/q") {
    const Field f(4);
    Rng rng(99);
    Proportion pass;
    for (int t = 0; t < 200000; ++t) {
        const auto key = MacKey::random(f, 0, 8, rng);
        const auto payload = random_vector(f, 8, rng);
        if (verify_tag(f, payload, random_element(f, rng), key)) ++pass.successes;
        ++pass.trials;
    }
    CHECK(within_binomial_sigmas(pass, 1.0 / 16.0));
}

TEST_CASE("combine_tags") {
    Fixture fx;
    const auto ts = make_tagset(fx.f, fx.gen, fx.keys, 7);
    CHECK(ts.gen_id == 3);
    CHECK(ts.source_id == 7);
    for (std::size_t i = 0; i < 4; ++i) {
        FieldVector e(4, 0);
        e[i] = 1;
        CHECK(combine_tags(fx.f, ts.native_tags, e) == ts.native_tags[i]);
    }
    CHECK(combine_tags(fx.f, ts.native_tags, FieldVector(4, 0)) == FieldVector(3, 0));
    std::vector<CodedPacket> pool{fx.tagged(), fx.tagged()};
    for (int d = 0; d < 4; ++d) pool.push_back(recode(fx.f, pool, fx.rng));
    for (const auto& p : pool) CHECK(combine_tags(fx.f, ts.native_tags, p.coeffs) == p.tags);
}

TEST_CASE("homomorphism under nested recoding") {
    const Field f(8);
    Rng rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto gen = Generation::random(f, 0, 3, 6, rng);
        const auto key = MacKey::random(f, 0, 6, rng);
        const std::vector<MacKey> keys{key};
        std::vector<CodedPacket> pool;
        for (int i = 0; i < 2; ++i) {
            pool.push_back(encode(f, gen, rng));
            attach_tags(f, pool.back(), keys);
        }
        const int depth = 1 + trial % 5;
        for (int d = 0; d < depth; ++d) pool.push_back(recode(f, pool, rng));
        REQUIRE(verify_tags(f, pool.back(), keys)[0]);
    }
}

TEST_CASE("ledger_check") {
    Fixture fx;
    const auto ts = make_tagset(fx.f, fx.gen, fx.keys);
    const std::vector<std::size_t> pos{0, 1, 2};
    auto honest = fx.tagged();
    CHECK(ledger_check(fx.f, honest, &ts, pos, fx.keys) == LedgerVerdict::Accept);
    CHECK(ledger_check(fx.f, honest, &ts) == LedgerVerdict::Accept);

    SUBCASE("all-keys adversary recomputing valid tags") {
        auto bad = honest;
        bad.payload[5] ^= 0x11;
        attach_tags(fx.f, bad, fx.keys);
        for (bool v : verify_tags(fx.f, bad, fx.keys)) CHECK(v);
        CHECK(ledger_check(fx.f, bad, &ts, pos, fx.keys) == LedgerVerdict::Reject);
    }
    SUBCASE("tag pollution") {
        auto bad = honest;
        bad.tags[2] ^= 1;
        CHECK(ledger_check(fx.f, bad, &ts) == LedgerVerdict::Reject);
    }
    SUBCASE("coefficient tampering") {
        auto bad = honest;
        bad.coeffs[0] ^= 1;
        CHECK(ledger_check(fx.f, bad, &ts) == LedgerVerdict::Reject);
    }
    SUBCASE("missing tag set") {
        CHECK_THROWS_AS(ledger_check(fx.f, honest, nullptr), TagSetUnavailable);
    }
}

TEST_CASE("honest pipeline never rejects") {
    const Field f(8);
    Rng rng(31);
    int rejected = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto gen = Generation::random(f, trial, 2, 4, rng);
        const std::vector<MacKey> keys{MacKey::random(f, 0, 4, rng), MacKey::random(f, 1, 4, rng)};
        const auto ts = make_tagset(f, gen, keys);
        std::vector<CodedPacket> pool;
        for (int i = 0; i < 2; ++i) {
            pool.push_back(encode(f, gen, rng));
            attach_tags(f, pool.back(), keys);
        }
        pool.push_back(recode(f, pool, rng));
        const std::vector<std::size_t> pos{0, 1};
        if (ledger_check(f, pool.back(), &ts, pos, keys) != LedgerVerdict::Accept) ++rejected;
    }
    CHECK(rejected == 0);
}
