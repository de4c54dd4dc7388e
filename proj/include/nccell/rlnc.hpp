#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nccell/gf.hpp"
#include "nccell/random.hpp"

namespace nccell {

using GenerationId = std::uint32_t;

/// m native payloads of n symbols each, coded together.
class Generation {
public:
    Generation(GenerationId id, std::vector<FieldVector> natives);

    static Generation random(const Field& field, GenerationId id, std::size_t m, std::size_t n, Rng& rng);

    GenerationId id() const noexcept { return id_; }
    std::size_t size() const noexcept { return natives_.size(); }          // m
    std::size_t payload_size() const noexcept { return natives_[0].size(); }  // n
    const std::vector<FieldVector>& natives() const noexcept { return natives_; }
    const FieldVector& native(std::size_t i) const { return natives_.at(i); }

private:
    GenerationId id_;
    std::vector<FieldVector> natives_;
};

struct CodedPacket {
    GenerationId gen_id = 0;
    FieldVector coeffs;   // length m
    FieldVector payload;  // length n
    FieldVector tags;     // length l, empty until tagged

    friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

/// Source coding with caller-chosen coefficients.
CodedPacket encode_with(const Field& field, const Generation& gen, std::span<const Element> coeffs);

/// Source coding with coefficients drawn uniformly from F_q^m.
CodedPacket encode(const Field& field, const Generation& gen, Rng& rng);

/// Applies one linear combination to coefficients, payloads and tags alike.
CodedPacket recode_with(const Field& field, std::span<const CodedPacket> packets,
                        std::span<const Element> local_coeffs);

/// Intermediate-node recoding with fresh uniform local coefficients. An
/// all-zero draw is redrawn once and then accepted as is.
CodedPacket recode(const Field& field, std::span<const CodedPacket> packets, Rng& rng);

struct DecodeResult {
    std::size_t rank = 0;
    std::optional<std::vector<FieldVector>> natives;  // set iff rank == m

    bool complete() const noexcept { return natives.has_value(); }
};

/// Gaussian elimination over the received packets. Throws
/// PollutionDetectedAtDecode when the system is inconsistent.
DecodeResult decode(const Field& field, std::span<const CodedPacket> packets);

/// Rank of a set of equal-length rows.
std::size_t rank(const Field& field, std::vector<FieldVector> rows);

}  // namespace nccell
