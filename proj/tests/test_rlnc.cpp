#include <doctest.h>

#include "nccell/errors.hpp"
#include "nccell/integrity.hpp"
#include "nccell/rlnc.hpp"

using namespace nccell;

namespace {

std::vector<FieldVector> coeff_rows(const std::vector<CodedPacket>& pkts) {
    std::vector<FieldVector> rows;
    for (const auto& p : pkts) rows.push_back(p.coeffs);
    return rows;
}

// Naive matrix product: sum_i coeffs[i] * natives[i].
FieldVector oracle_combine(const Field& f, const Generation& gen, const FieldVector& coeffs) {
    FieldVector out(gen.payload_size(), 0);
    for (std::size_t i = 0; i < gen.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] ^= f.mul(coeffs[i], gen.native(i)[j]);
    return out;
}

}  // namespace

TEST_CASE("encode with unit and zero coefficients") {
    const Field f(8);
    Rng rng(1);
    const auto gen = Generation::random(f, 9, 4, 16, rng);
    for (std::size_t i = 0; i < 4; ++i) {
        FieldVector e(4, 0);
        e[i] = 1;
        const auto p = encode_with(f, gen, e);
        CHECK(p.payload == gen.native(i));
        CHECK(p.gen_id == 9);
    }
    CHECK(encode_with(f, gen, FieldVector(4, 0)).payload == FieldVector(16, 0));
    CHECK_THROWS_AS(encode_with(f, gen, FieldVector(3, 1)), DimensionMismatch);
}

TEST_CASE("encode matches a matrix-product oracle") {
    const Field f(8);
    Rng rng(2);
    const auto gen = Generation::random(f, 0, 6, 20, rng);
    for (int t = 0; t < 50; ++t) {
        const auto p = encode(f, gen, rng);
        CHECK(p.payload == oracle_combine(f, gen, p.coeffs));
    }
}

TEST_CASE("recode edge cases") {
    const Field f(8);
    Rng rng(3);
    const auto gen = Generation::random(f, 1, 4, 8, rng);
    const auto p = encode(f, gen, rng);
    const std::vector<CodedPacket> one{p};
    CHECK(recode_with(f, one, FieldVector{1}) == p);
    const std::vector<CodedPacket> two{p, p};
    const auto z = recode_with(f, two, FieldVector{1, 1});
    CHECK(z.coeffs == FieldVector(4, 0));
    CHECK(z.payload == FieldVector(8, 0));

    auto other = p;
    other.gen_id = 2;
    const std::vector<CodedPacket> mixed{p, other};
    CHECK_THROWS_AS(recode(f, mixed, rng), GenerationMismatch);
    CHECK_THROWS_AS(recode(f, std::vector<CodedPacket>{}, rng), EmptyInput);
}

TEST_CASE("recoded packets stay consistent with the generation") {
    const Field f(8);
    Rng rng(4);
    const auto gen = Generation::random(f, 0, 5, 12, rng);
    std::vector<CodedPacket> pool;
    for (int i = 0; i < 3; ++i) pool.push_back(encode(f, gen, rng));
    for (int depth = 0; depth < 5; ++depth) {
        pool.push_back(recode(f, pool, rng));
        CHECK(pool.back().payload == oracle_combine(f, gen, pool.back().coeffs));
    }
}

TEST_CASE("recode of 3 tagged packets verifies under all keys") {
    const Field f(8);
    Rng rng(5);
    const auto gen = Generation::random(f, 0, 4, 16, rng);
    std::vector<MacKey> keys;
    for (KeyId k = 0; k < 4; ++k) keys.push_back(MacKey::random(f, k, 16, rng));
    std::vector<CodedPacket> pkts;
    for (int i = 0; i < 3; ++i) {
        pkts.push_back(encode(f, gen, rng));
        attach_tags(f, pkts.back(), keys);
    }
    for (bool v : verify_tags(f, recode(f, pkts, rng), keys)) CHECK(v);
}

TEST_CASE("decode") {
    const Field f(8);
    Rng rng(6);
    const auto gen = Generation::random(f, 0, 4, 16, rng);

    SUBCASE("identity matrix returns natives verbatim") {
        std::vector<CodedPacket> pkts;
        for (std::size_t i = 0; i < 4; ++i) {
            FieldVector e(4, 0);
            e[i] = 1;
            pkts.push_back(encode_with(f, gen, e));
        }
        const auto r = decode(f, pkts);
        REQUIRE(r.complete());
        CHECK(*r.natives == gen.natives());
    }
    SUBCASE("m-1 packets report rank m-1") {
        std::vector<CodedPacket> pkts;
        while (pkts.size() < 3) {
            pkts.push_back(encode(f, gen, rng));
            if (rank(f, coeff_rows(pkts)) < pkts.size()) pkts.pop_back();
        }
        const auto r = decode(f, pkts);
        CHECK_FALSE(r.complete());
        CHECK(r.rank == 3);
    }
    SUBCASE("random full-rank round trip") {
        for (int t = 0; t < 50; ++t) {
            const auto g = Generation::random(f, t, 4, 16, rng);
            std::vector<CodedPacket> pkts;
            while (rank(f, coeff_rows(pkts)) < 4) pkts.push_back(encode(f, g, rng));
            const auto r = decode(f, pkts);
            REQUIRE(r.complete());
            CHECK(*r.natives == g.natives());
        }
    }
    SUBCASE("an inconsistent system is reported as pollution") {
        std::vector<CodedPacket> pkts;
        while (rank(f, coeff_rows(pkts)) < 4) pkts.push_back(encode(f, gen, rng));
        auto dup = pkts.front();
        dup.payload[0] ^= 1;
        pkts.push_back(dup);
        CHECK_THROWS_AS(decode(f, pkts), PollutionDetectedAtDecode);
    }
}

TEST_CASE("a polluted packet contaminates downstream recodes") {
    const Field f(8);
    Rng rng(7);
    const auto gen = Generation::random(f, 0, 4, 16, rng);
    auto bad = encode(f, gen, rng);
    bad.payload[3] ^= 0x5A;
    std::vector<CodedPacket> pool{bad, encode(f, gen, rng)};
    int contaminated = 0;
    for (int i = 0; i < 100; ++i) {
        const auto out = recode(f, pool, rng);
        if (out.payload != oracle_combine(f, gen, out.coeffs)) ++contaminated;
    }
    // Clean only when the local coefficient on `bad` is zero (1/256 each).
    CHECK(contaminated >= 95);
}
