#include "nccell/ledger.hpp"

#include <algorithm>

#include "nccell/errors.hpp"

namespace nccell {

std::string_view signal_kind_name(SignalKind k) noexcept {
    switch (k) {
        case SignalKind::CandidateUpload: return "CandidateUpload";
        case SignalKind::BlockBroadcast: return "BlockBroadcast";
        case SignalKind::KeyToUe: return "KeyToUe";
        case SignalKind::HoRequest: return "HoRequest";
        case SignalKind::HoAck: return "HoAck";
        case SignalKind::HoCommand: return "HoCommand";
        case SignalKind::HoConfirm: return "HoConfirm";
        case SignalKind::HoComplete: return "HoComplete";
        case SignalKind::PathSwitch: return "PathSwitch";
    }
    return "?";
}

std::string Entity::str() const {
    switch (type) {
        case Type::Controller: return "bsh" + std::to_string(index);
        case Type::Ue: return "ue" + std::to_string(index);
        case Type::LedgerServer: return "ledger";
        case Type::AllControllers: return "all";
        case Type::Core: return "core";
    }
    return "?";
}

std::size_t per_second_signaling(std::span<const SignalRecord> records, SimTime window_start, SimTime window_ms) {
    const SimTime end = window_start + window_ms;
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const SignalRecord& r) {
        return r.key_exchange && r.t >= window_start && r.t < end;
    }));
}

CandidateEntry CandidateEntry::key_set(ControllerId origin, DomainId domain, std::vector<MacKey> keys, SimTime at) {
    return CandidateEntry{EntryKind::CellKeySet, origin, domain, std::move(keys), at};
}

CandidateEntry CandidateEntry::tag_set(ControllerId origin, TagSet tags, SimTime at) {
    const std::uint32_t gen = tags.gen_id;
    return CandidateEntry{EntryKind::GenerationTagSet, origin, gen, std::move(tags), at};
}

namespace {

class Fnv {
public:
    void add(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h_ ^= (v >> (8 * i)) & 0xFFu;
            h_ *= 0x100000001B3ull;
        }
    }
    void add(const FieldVector& v) {
        add(v.size());
        for (Element e : v) add(e);
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xCBF29CE484222325ull;
};

std::uint64_t fingerprint(std::uint64_t prev, const LedgerBlock& b) {
    Fnv h;
    h.add(prev);
    h.add(b.height);
    h.add(static_cast<std::uint64_t>(b.verified_at));
    for (const auto& e : b.entries) {
        h.add(static_cast<std::uint64_t>(e.kind));
        h.add(e.origin);
        h.add(e.domain);
        h.add(static_cast<std::uint64_t>(e.submitted_at));
        if (const auto* keys = std::get_if<std::vector<MacKey>>(&e.payload)) {
            for (const auto& k : *keys) {
                h.add(k.id());
                h.add(k.vec());
            }
        } else {
            for (const auto& row : std::get<TagSet>(e.payload).native_tags) h.add(row);
        }
    }
    return h.value();
}

bool payload_empty(const CandidateEntry& e) {
    if (const auto* keys = std::get_if<std::vector<MacKey>>(&e.payload)) return keys->empty();
    return std::get<TagSet>(e.payload).native_tags.empty();
}

}  // namespace

Ledger::Ledger(Config cfg, SignalTrace* trace) : cfg_(cfg), trace_(trace) {
    if (cfg_.collection_period_ms <= 0) throw InvalidParameter("collection period must be positive");
}

void Ledger::register_controller(ControllerId id) {
    synced_.try_emplace(id, blocks_.size());
}

void Ledger::emit(SignalRecord rec) {
    if (trace_ != nullptr) trace_->push_back(rec);
}

SubmitReceipt Ledger::submit_candidate(CandidateEntry entry) {
    if (!is_registered(entry.origin))
        throw UnknownController("controller " + std::to_string(entry.origin) + " is not registered");
    if (payload_empty(entry)) throw InvalidParameter("candidate entry payload is empty");
    if (entry.submitted_at < clock_ || (last_verified_ && entry.submitted_at <= *last_verified_))
        throw ClockError("candidate submitted at " + std::to_string(entry.submitted_at) +
                         " ms, not after the last verification");

    SubmitReceipt receipt;
    receipt.earliest_verification = next_verification_at(entry.submitted_at);
    const EntryKey key{entry.kind, entry.domain};
    if (index_.contains(key) || pending_keys_.contains(key)) return receipt;

    clock_ = entry.submitted_at;
    emit({SignalKind::CandidateUpload, Entity::controller(entry.origin), Entity::ledger_server(), entry.submitted_at,
          true});
    pending_keys_.insert(key);
    pending_.push_back(std::move(entry));
    receipt.queued = true;
    return receipt;
}

std::optional<LedgerBlock> Ledger::tick(SimTime now) {
    if (now < clock_)
        throw ClockError("ledger clock moved back from " + std::to_string(clock_) + " to " + std::to_string(now) + " ms");
    clock_ = now;
    if (pending_.empty()) return std::nullopt;
    if (last_verified_ && now - *last_verified_ < cfg_.collection_period_ms) return std::nullopt;

    LedgerBlock block;
    block.height = blocks_.size();
    block.verified_at = now;
    block.entries = std::move(pending_);
    pending_.clear();
    pending_keys_.clear();
    block.digest = fingerprint(blocks_.empty() ? 0 : blocks_.back().digest, block);

    for (std::size_t i = 0; i < block.entries.size(); ++i)
        index_.emplace(EntryKey{block.entries[i].kind, block.entries[i].domain}, std::make_pair(blocks_.size(), i));
    blocks_.push_back(block);
    last_verified_ = now;
    for (auto& [id, height] : synced_) height = blocks_.size();
    emit({SignalKind::BlockBroadcast, Entity::ledger_server(), Entity::all_controllers(), now, true});
    return block;
}

const CandidateEntry* Ledger::find(ControllerId controller, EntryKind kind, std::uint32_t domain) const {
    const auto view = synced_.find(controller);
    if (view == synced_.end())
        throw UnknownController("controller " + std::to_string(controller) + " is not registered");
    const auto it = index_.find({kind, domain});
    if (it == index_.end() || it->second.first >= view->second) return nullptr;
    return &blocks_[it->second.first].entries[it->second.second];
}

std::optional<std::vector<MacKey>> Ledger::query_keys(ControllerId controller, DomainId domain) const {
    const CandidateEntry* e = find(controller, EntryKind::CellKeySet, domain);
    if (e == nullptr) return std::nullopt;
    return std::get<std::vector<MacKey>>(e->payload);
}

const TagSet* Ledger::query_tagset(ControllerId controller, GenerationId gen) const {
    const CandidateEntry* e = find(controller, EntryKind::GenerationTagSet, gen);
    return e == nullptr ? nullptr : &std::get<TagSet>(e->payload);
}

bool Ledger::is_ledgered(EntryKind kind, std::uint32_t domain) const { return index_.contains({kind, domain}); }

bool Ledger::is_pending(EntryKind kind, std::uint32_t domain) const { return pending_keys_.contains({kind, domain}); }

SimTime Ledger::next_verification_at(SimTime now) const {
    const SimTime p = cfg_.collection_period_ms;
    SimTime t = now <= 0 ? 0 : ((now + p - 1) / p) * p;
    if (last_verified_ && t < *last_verified_ + p) t = *last_verified_ + p;
    return t;
}

}  // namespace nccell
