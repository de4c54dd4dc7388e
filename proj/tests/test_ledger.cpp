#include <doctest.h>

#include "nccell/errors.hpp"
#include "nccell/ledger.hpp"

using namespace nccell;

namespace {

std::vector<MacKey> some_keys(KeyId base = 0) {
    return {MacKey(base, FieldVector{1, 2, 3}), MacKey(base + 1, FieldVector{4, 5, 6})};
}

struct Rig {
    SignalTrace trace;
    Ledger ledger{LedgerConfig{}, &trace};
    Rig() {
        for (ControllerId c = 0; c < 16; ++c) ledger.register_controller(c);
    }
    std::size_t count(SignalKind k) const {
        return static_cast<std::size_t>(
            std::count_if(trace.begin(), trace.end(), [&](const SignalRecord& r) { return r.kind == k; }));
    }
};

}  // namespace

TEST_CASE("submission emits one upload and is idempotent") {
    Rig r;
    auto rc = r.ledger.submit_candidate(CandidateEntry::key_set(3, 3, some_keys(), 100));
    CHECK(rc.queued);
    CHECK(rc.earliest_verification == 1000);
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].kind == SignalKind::CandidateUpload);
    CHECK(r.trace[0].key_exchange);
    CHECK(r.ledger.is_pending(EntryKind::CellKeySet, 3));

    CHECK_FALSE(r.ledger.submit_candidate(CandidateEntry::key_set(3, 3, some_keys(), 200)).queued);
    CHECK(r.trace.size() == 1);

    REQUIRE(r.ledger.tick(1000));
    CHECK(r.ledger.is_ledgered(EntryKind::CellKeySet, 3));
    const auto before = r.trace.size();
    CHECK_FALSE(r.ledger.submit_candidate(CandidateEntry::key_set(3, 3, some_keys(), 1500)).queued);
    CHECK(r.trace.size() == before);
}

TEST_CASE("submission errors") {
    Rig r;
    CHECK_THROWS_AS(r.ledger.submit_candidate(CandidateEntry::key_set(99, 1, some_keys(), 10)), UnknownController);
    CHECK_THROWS_AS(r.ledger.submit_candidate(CandidateEntry::key_set(1, 1, {}, 10)), InvalidParameter);
    r.ledger.submit_candidate(CandidateEntry::key_set(1, 1, some_keys(), 10));
    r.ledger.tick(1000);
    CHECK_THROWS_AS(r.ledger.submit_candidate(CandidateEntry::key_set(2, 2, some_keys(), 1000)), ClockError);
    CHECK_THROWS_AS(r.ledger.tick(999), ClockError);
    CHECK_THROWS_AS(Ledger(LedgerConfig{0}), InvalidParameter);
}

TEST_CASE("batching") {
    Rig r;
    CHECK_FALSE(r.ledger.tick(1000));
    CHECK(r.trace.empty());

    for (ControllerId c = 0; c < 5; ++c)
        r.ledger.submit_candidate(CandidateEntry::key_set(c, c, some_keys(c * 2), 1100 + c));
    const auto block = r.ledger.tick(2000);
    REQUIRE(block);
    CHECK(block->entries.size() == 5);
    CHECK(r.count(SignalKind::BlockBroadcast) == 1);
    CHECK(r.count(SignalKind::CandidateUpload) == 5);
    CHECK(r.ledger.blocks().size() == 1);
}

TEST_CASE("two controllers in one period share a block") {
    Rig r;
    r.ledger.submit_candidate(CandidateEntry::key_set(4, 4, some_keys(), 300));
    r.ledger.submit_candidate(CandidateEntry::key_set(9, 9, some_keys(), 700));
    const auto block = r.ledger.tick(1000);
    REQUIRE(block);
    CHECK(block->entries.size() == 2);
    CHECK(block->verified_at == 1000);
}

TEST_CASE("worst-case delay stays under one period") {
    Rig r;
    r.ledger.submit_candidate(CandidateEntry::key_set(1, 1, some_keys(), 500));
    r.ledger.tick(1000);
    const auto rc = r.ledger.submit_candidate(CandidateEntry::key_set(2, 2, some_keys(), 1999));
    CHECK(rc.earliest_verification == 2000);
    CHECK(rc.earliest_verification - 1999 < 1000);
    const auto block = r.ledger.tick(2000);
    REQUIRE(block);
    CHECK(block->entries.front().domain == 2);
    CHECK(r.ledger.next_verification_at(2001) == 3000);
    CHECK(r.ledger.next_verification_at(2000) == 3000);
}

TEST_CASE("queries") {
    Rig r;
    CHECK_FALSE(r.ledger.query_keys(5, 3));
    r.ledger.submit_candidate(CandidateEntry::key_set(3, 3, some_keys(7), 10));
    CHECK_FALSE(r.ledger.query_keys(3, 3));  // pending is not visible
    r.ledger.tick(1000);
    const auto before = r.trace.size();
    const auto own = r.ledger.query_keys(3, 3);
    const auto other = r.ledger.query_keys(12, 3);
    REQUIRE(own);
    REQUIRE(other);
    CHECK(*own == some_keys(7));
    CHECK(*own == *other);
    CHECK(r.trace.size() == before);
    CHECK_THROWS_AS(r.ledger.query_keys(77, 3), UnknownController);

    TagSet ts{42, 3, {{1, 2}, {3, 4}}};
    r.ledger.submit_candidate(CandidateEntry::tag_set(3, ts, 1200));
    CHECK(r.ledger.query_tagset(0, 42) == nullptr);
    r.ledger.tick(2000);
    REQUIRE(r.ledger.query_tagset(0, 42) != nullptr);
    CHECK(*r.ledger.query_tagset(0, 42) == ts);
}

TEST_CASE("late-registered controllers see the full chain") {
    Rig r;
    r.ledger.submit_candidate(CandidateEntry::key_set(1, 1, some_keys(), 10));
    r.ledger.tick(1000);
    r.ledger.register_controller(40);
    CHECK(r.ledger.query_keys(40, 1));
}

TEST_CASE("block digests chain") {
    Rig a, b;
    for (Rig* r : {&a, &b}) {
        r->ledger.submit_candidate(CandidateEntry::key_set(1, 1, some_keys(), 10));
        r->ledger.tick(1000);
        r->ledger.submit_candidate(CandidateEntry::key_set(2, 2, some_keys(), 1010));
        r->ledger.tick(2000);
    }
    CHECK(a.ledger.blocks()[1].digest == b.ledger.blocks()[1].digest);
    CHECK(a.ledger.blocks()[0].digest != a.ledger.blocks()[1].digest);
}

TEST_CASE("per-second signaling count") {
    SignalTrace t;
    auto key = [&](SignalKind k, SimTime at) { t.push_back({k, Entity::controller(0), Entity::ledger_server(), at, true}); };
    CHECK(per_second_signaling(t, 0) == 0);
    key(SignalKind::CandidateUpload, 100);
    key(SignalKind::CandidateUpload, 200);
    key(SignalKind::KeyToUe, 300);
    key(SignalKind::KeyToUe, 400);
    key(SignalKind::KeyToUe, 999);
    key(SignalKind::BlockBroadcast, 500);
    t.push_back({SignalKind::HoCommand, Entity::controller(0), Entity::ue(1), 600, false});
    key(SignalKind::KeyToUe, 1000);  // next window
    CHECK(per_second_signaling(t, 0) == 2 + 3 + 1);
    CHECK(per_second_signaling(t, 1000) == 1);
    CHECK(per_second_signaling(t, 5000) == 0);
}

TEST_CASE("entity names") {
    CHECK(Entity::controller(3).str() == "bsh3");
    CHECK(Entity::ue(12).str() == "ue12");
    CHECK(Entity::ledger_server().str() == "ledger");
    CHECK(Entity::all_controllers().str() == "all");
    CHECK(Entity::core().str() == "core");
}
