#include "nccell/integrity.hpp"

#include <algorithm>
#include <string>

#include "nccell/errors.hpp"

namespace nccell {

MacKey::MacKey(KeyId id, FieldVector vec, DomainId domain) : id_(id), vec_(std::move(vec)), domain_(domain) {
    if (vec_.size() < 2) throw InvalidParameter("MAC key needs at least n+1 = 2 elements");
    if (vec_.back() == 0) throw InvalidParameter("MAC key last element must be nonzero");
}

MacKey MacKey::random(const Field& field, KeyId id, std::size_t payload_size, Rng& rng, DomainId domain) {
    FieldVector v = random_vector(field, payload_size, rng);
    v.push_back(random_nonzero(field, rng));
    return MacKey(id, std::move(v), domain);
}

Element make_tag(const Field& field, std::span<const Element> payload, const MacKey& key) {
    if (payload.size() != key.payload_size())
        throw DimensionMismatch("make_tag: payload length " + std::to_string(payload.size()) + " vs key dimension " +
                                std::to_string(key.vec().size()));
    const std::span<const Element> head(key.vec().data(), key.payload_size());
    // Characteristic 2: -x == x, so t = <p, k[0..n)> / k[n].
    return field.div(field.dot(payload, head), key.vec().back());
}

void attach_tags(const Field& field, CodedPacket& pkt, std::span<const MacKey> keys) {
    pkt.tags.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) pkt.tags[i] = make_tag(field, pkt.payload, keys[i]);
}

TagSet make_tagset(const Field& field, const Generation& gen, std::span<const MacKey> keys, NodeId source) {
    TagSet ts;
    ts.gen_id = gen.id();
    ts.source_id = source;
    ts.native_tags.reserve(gen.size());
    for (const auto& native : gen.natives()) {
        FieldVector row(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i) row[i] = make_tag(field, native, keys[i]);
        ts.native_tags.push_back(std::move(row));
    }
    return ts;
}

bool verify_tag(const Field& field, std::span<const Element> payload, Element tag, const MacKey& key) {
    if (payload.size() != key.payload_size()) throw DimensionMismatch("verify: payload length does not match key");
    const std::span<const Element> head(key.vec().data(), key.payload_size());
    return (field.dot(payload, head) ^ field.mul(tag, key.vec().back())) == 0;
}

std::vector<bool> verify_tags(const Field& field, const CodedPacket& pkt, std::span<const MacKey> keys) {
    if (pkt.tags.size() != keys.size())
        throw DimensionMismatch("verify_tags: " + std::to_string(pkt.tags.size()) + " tags for " +
                                std::to_string(keys.size()) + " keys");
    std::vector<bool> verdicts(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) verdicts[i] = verify_tag(field, pkt.payload, pkt.tags[i], keys[i]);
    return verdicts;
}

std::vector<bool> verify_tags_at(const Field& field, const CodedPacket& pkt, std::span<const std::size_t> positions,
                                 std::span<const MacKey> keys) {
    if (positions.size() != keys.size()) throw DimensionMismatch("verify_tags_at: one position per key");
    std::vector<bool> verdicts(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (positions[i] >= pkt.tags.size()) throw DimensionMismatch("verify_tags_at: tag position out of range");
        verdicts[i] = verify_tag(field, pkt.payload, pkt.tags[positions[i]], keys[i]);
    }
    return verdicts;
}

FieldVector combine_tags(const Field& field, std::span<const FieldVector> tag_rows, std::span<const Element> coeffs) {
    if (tag_rows.size() != coeffs.size())
        throw DimensionMismatch("combine_tags: " + std::to_string(coeffs.size()) + " coefficients for " +
                                std::to_string(tag_rows.size()) + " rows");
    if (tag_rows.empty()) return {};
    FieldVector out(tag_rows.front().size(), 0);
    for (std::size_t j = 0; j < tag_rows.size(); ++j) {
        if (tag_rows[j].size() != out.size()) throw DimensionMismatch("combine_tags: tag rows differ in length");
        field.axpy_into(coeffs[j], tag_rows[j], out);
    }
    return out;
}

LedgerVerdict ledger_check(const Field& field, const CodedPacket& pkt, const TagSet* tagset,
                           std::span<const std::size_t> positions, std::span<const MacKey> keys) {
    if (tagset == nullptr)
        throw TagSetUnavailable("no ledgered tag set for generation " + std::to_string(pkt.gen_id));
    if (tagset->gen_id != pkt.gen_id) throw GenerationMismatch("ledger_check: tag set belongs to another generation");
    if (pkt.coeffs.size() != tagset->native_tags.size()) return LedgerVerdict::Reject;
    if (pkt.tags != combine_tags(field, tagset->native_tags, pkt.coeffs)) return LedgerVerdict::Reject;
    const auto verdicts = verify_tags_at(field, pkt, positions, keys);
    return std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; }) ? LedgerVerdict::Accept
                                                                                     : LedgerVerdict::Reject;
}

}  // namespace nccell
