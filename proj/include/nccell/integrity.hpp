#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nccell/gf.hpp"
#include "nccell/random.hpp"
#include "nccell/rlnc.hpp"

namespace nccell {

using KeyId = std::uint32_t;
using DomainId = std::uint32_t;
using NodeId = std::uint32_t;

/// Secret vector in F_q^(n+1). A payload p (length n) and its tag t satisfy
/// <(p || t), vec> == 0.
class MacKey {
public:
    /// Throws InvalidParameter if vec is shorter than 2 or its last element is 0.
    MacKey(KeyId id, FieldVector vec, DomainId domain = 0);

    /// Uniform key; the last element is drawn from the nonzero elements.
    static MacKey random(const Field& field, KeyId id, std::size_t payload_size, Rng& rng, DomainId domain = 0);

    KeyId id() const noexcept { return id_; }
    DomainId domain() const noexcept { return domain_; }
    const FieldVector& vec() const noexcept { return vec_; }
    std::size_t payload_size() const noexcept { return vec_.size() - 1; }

    friend bool operator==(const MacKey&, const MacKey&) = default;

private:
    KeyId id_;
    FieldVector vec_;
    DomainId domain_;
};

/// Tags of the m native packets of one generation, as published by the source.
struct TagSet {
    GenerationId gen_id = 0;
    NodeId source_id = 0;
    std::vector<FieldVector> native_tags;  // m rows of l tags

    friend bool operator==(const TagSet&, const TagSet&) = default;
};

Element make_tag(const Field& field, std::span<const Element> payload, const MacKey& key);

/// Fills pkt.tags with one tag per key, in key order.
void attach_tags(const Field& field, CodedPacket& pkt, std::span<const MacKey> keys);

/// Source-side tag table for every native packet of a generation.
TagSet make_tagset(const Field& field, const Generation& gen, std::span<const MacKey> keys, NodeId source = 0);

bool verify_tag(const Field& field, std::span<const Element> payload, Element tag, const MacKey& key);

/// verdict[i] is the check of pkt.tags[i] against keys[i].
std::vector<bool> verify_tags(const Field& field, const CodedPacket& pkt, std::span<const MacKey> keys);

/// Check only the tag positions a node holds keys for: positions[i] indexes
/// pkt.tags and pairs with keys[i].
std::vector<bool> verify_tags_at(const Field& field, const CodedPacket& pkt, std::span<const std::size_t> positions,
                                 std::span<const MacKey> keys);

/// Linear combination of native tag rows with the packet's coding coefficients.
FieldVector combine_tags(const Field& field, std::span<const FieldVector> tag_rows, std::span<const Element> coeffs);

enum class LedgerVerdict { Accept, Reject };

/// Accepts iff pkt.tags equal the tags implied by the ledger copy of the
/// native tags and every locally held key verifies. A null tagset throws
/// TagSetUnavailable.
LedgerVerdict ledger_check(const Field& field, const CodedPacket& pkt, const TagSet* tagset,
                           std::span<const std::size_t> positions = {}, std::span<const MacKey> keys = {});

}  // namespace nccell
