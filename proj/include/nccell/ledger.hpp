#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nccell/integrity.hpp"

namespace nccell {

using SimTime = std::int64_t;  // milliseconds
using ControllerId = std::uint32_t;
using UeId = std::uint32_t;

enum class SignalKind {
    CandidateUpload,
    BlockBroadcast,
    KeyToUe,
    HoRequest,
    HoAck,
    HoCommand,
    HoConfirm,
    HoComplete,
    PathSwitch,
};

std::string_view signal_kind_name(SignalKind k) noexcept;

/// Endpoint of a control-plane signal.
struct Entity {
    enum class Type { Controller, Ue, LedgerServer, AllControllers, Core };
    Type type = Type::Controller;
    std::uint32_t index = 0;

    static Entity controller(ControllerId id) { return {Type::Controller, id}; }
    static Entity ue(UeId id) { return {Type::Ue, id}; }
    static Entity ledger_server() { return {Type::LedgerServer, 0}; }
    static Entity all_controllers() { return {Type::AllControllers, 0}; }
    static Entity core() { return {Type::Core, 0}; }

    std::string str() const;  // bsh3, ue12, ledger, all, core
    friend bool operator==(const Entity&, const Entity&) = default;
};

struct SignalRecord {
    SignalKind kind;
    Entity src;
    Entity dst;
    SimTime t = 0;
    bool key_exchange = false;

    friend bool operator==(const SignalRecord&, const SignalRecord&) = default;
};

using SignalTrace = std::vector<SignalRecord>;

/// Key-exchange signals with t in [window_start, window_start + window_ms).
std::size_t per_second_signaling(std::span<const SignalRecord> records, SimTime window_start, SimTime window_ms = 1000);

enum class EntryKind { CellKeySet, GenerationTagSet };

struct CandidateEntry {
    EntryKind kind = EntryKind::CellKeySet;
    ControllerId origin = 0;
    std::uint32_t domain = 0;  // security domain, or generation id for tag sets
    std::variant<std::vector<MacKey>, TagSet> payload;
    SimTime submitted_at = 0;

    static CandidateEntry key_set(ControllerId origin, DomainId domain, std::vector<MacKey> keys, SimTime at);
    static CandidateEntry tag_set(ControllerId origin, TagSet tags, SimTime at);
};

struct LedgerBlock {
    std::uint64_t height = 0;
    std::vector<CandidateEntry> entries;
    SimTime verified_at = 0;
    std::uint64_t digest = 0;  // content fingerprint, not a cryptographic hash
};

struct SubmitReceipt {
    bool queued = false;     // false: already pending or ledgered, nothing emitted
    SimTime earliest_verification = 0;
};

/// Simulated permissioned ledger shared by the BSH controllers.
///
/// Candidates queue until the next verification instant. Verification
/// instants sit on multiples of the collection period; tick(now) seals every
/// pending candidate into one block, broadcasts it once, and every registered
/// controller's local copy advances atomically. Blocks are append-only.
struct LedgerConfig {
    SimTime collection_period_ms = 1000;
};

class Ledger {
public:
    using Config = LedgerConfig;

    explicit Ledger(Config cfg = {}, SignalTrace* trace = nullptr);

    void register_controller(ControllerId id);
    bool is_registered(ControllerId id) const { return synced_.contains(id); }
    std::size_t controller_count() const noexcept { return synced_.size(); }

    /// Throws UnknownController, InvalidParameter (empty payload) or
    /// ClockError (submission before the last verification).
    SubmitReceipt submit_candidate(CandidateEntry entry);

    /// Throws ClockError if `now` moves backwards.
    std::optional<LedgerBlock> tick(SimTime now);

    /// nullopt means "not yet ledgered". Reads the controller's local copy and
    /// emits no signal.
    std::optional<std::vector<MacKey>> query_keys(ControllerId controller, DomainId domain) const;
    const TagSet* query_tagset(ControllerId controller, GenerationId gen) const;

    bool is_ledgered(EntryKind kind, std::uint32_t domain) const;
    bool is_pending(EntryKind kind, std::uint32_t domain) const;

    /// First verification instant at or after `now`.
    SimTime next_verification_at(SimTime now) const;

    SimTime collection_period() const noexcept { return cfg_.collection_period_ms; }
    std::optional<SimTime> last_verified_at() const noexcept { return last_verified_; }
    std::size_t pending_count() const noexcept { return pending_.size(); }
    const std::vector<LedgerBlock>& blocks() const noexcept { return blocks_; }
    void set_trace(SignalTrace* trace) noexcept { trace_ = trace; }

private:
    using EntryKey = std::pair<EntryKind, std::uint32_t>;

    const CandidateEntry* find(ControllerId controller, EntryKind kind, std::uint32_t domain) const;
    void emit(SignalRecord rec);

    Config cfg_;
    SignalTrace* trace_;
    std::map<ControllerId, std::size_t> synced_;  // controller -> blocks visible locally
    std::vector<CandidateEntry> pending_;
    std::set<EntryKey> pending_keys_;
    std::map<EntryKey, std::pair<std::size_t, std::size_t>> index_;  // -> (block, entry)
    std::vector<LedgerBlock> blocks_;
    std::optional<SimTime> last_verified_;
    SimTime clock_ = 0;
};

}  // namespace nccell
