#include "nccell/rlnc.hpp"

#include <algorithm>
#include <string>

#include "nccell/errors.hpp"

namespace nccell {

Generation::Generation(GenerationId id, std::vector<FieldVector> natives)
    : id_(id), natives_(std::move(natives)) {
    if (natives_.empty()) throw EmptyInput("generation needs at least one native packet");
    const std::size_t n = natives_[0].size();
    if (n == 0) throw DimensionMismatch("native payloads must be non-empty");
    for (const auto& row : natives_)
        if (row.size() != n) throw DimensionMismatch("native payloads differ in length");
}

Generation Generation::random(const Field& field, GenerationId id, std::size_t m, std::size_t n, Rng& rng) {
    std::vector<FieldVector> natives;
    natives.reserve(m);
    for (std::size_t i = 0; i < m; ++i) natives.push_back(random_vector(field, n, rng));
    return Generation(id, std::move(natives));
}

CodedPacket encode_with(const Field& field, const Generation& gen, std::span<const Element> coeffs) {
    if (coeffs.size() != gen.size())
        throw DimensionMismatch("encode: " + std::to_string(coeffs.size()) + " coefficients for generation of " +
                                std::to_string(gen.size()));
    CodedPacket pkt;
    pkt.gen_id = gen.id();
    pkt.coeffs.assign(coeffs.begin(), coeffs.end());
    pkt.payload.assign(gen.payload_size(), 0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) field.axpy_into(coeffs[j], gen.native(j), pkt.payload);
    return pkt;
}

CodedPacket encode(const Field& field, const Generation& gen, Rng& rng) {
    const FieldVector coeffs = random_vector(field, gen.size(), rng);
    return encode_with(field, gen, coeffs);
}

CodedPacket recode_with(const Field& field, std::span<const CodedPacket> packets, std::span<const Element> local_coeffs) {
    if (packets.empty()) throw EmptyInput("recode: no input packets");
    if (local_coeffs.size() != packets.size()) throw DimensionMismatch("recode: one local coefficient per packet");
    const CodedPacket& first = packets.front();
    for (const auto& p : packets) {
        if (p.gen_id != first.gen_id) throw GenerationMismatch("recode: packets from different generations");
        if (p.coeffs.size() != first.coeffs.size() || p.payload.size() != first.payload.size() ||
            p.tags.size() != first.tags.size())
            throw DimensionMismatch("recode: packet dimensions differ");
    }
    CodedPacket out;
    out.gen_id = first.gen_id;
    out.coeffs.assign(first.coeffs.size(), 0);
    out.payload.assign(first.payload.size(), 0);
    out.tags.assign(first.tags.size(), 0);
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const Element a = local_coeffs[i];
        field.axpy_into(a, packets[i].coeffs, out.coeffs);
        field.axpy_into(a, packets[i].payload, out.payload);
        field.axpy_into(a, packets[i].tags, out.tags);
    }
    return out;
}

CodedPacket recode(const Field& field, std::span<const CodedPacket> packets, Rng& rng) {
    if (packets.empty()) throw EmptyInput("recode: no input packets");
    FieldVector local = random_vector(field, packets.size(), rng);
    if (std::all_of(local.begin(), local.end(), [](Element e) { return e == 0; }))
        local = random_vector(field, packets.size(), rng);
    return recode_with(field, packets, local);
}

namespace {

// Reduced row echelon form over the first `pivot_cols` columns. Returns the
// pivot column of each of the first `rank` rows, which are moved to the top.
std::vector<std::size_t> reduce(const Field& field, std::vector<FieldVector>& rows, std::size_t pivot_cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < pivot_cols && r < rows.size(); ++col) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        field.scale_into(field.inv(rows[r][col]), rows[r]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i][col] != 0) field.axpy_into(rows[i][col], rows[r], rows[i]);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

}  // namespace

DecodeResult decode(const Field& field, std::span<const CodedPacket> packets) {
    DecodeResult result;
    if (packets.empty()) return result;
    const std::size_t m = packets.front().coeffs.size();
    const std::size_t n = packets.front().payload.size();

    std::vector<FieldVector> rows;
    rows.reserve(packets.size());
    for (const auto& p : packets) {
        if (p.coeffs.size() != m || p.payload.size() != n) throw DimensionMismatch("decode: packet dimensions differ");
        if (p.gen_id != packets.front().gen_id) throw GenerationMismatch("decode: packets from different generations");
        FieldVector row(p.coeffs);
        row.insert(row.end(), p.payload.begin(), p.payload.end());
        rows.push_back(std::move(row));
    }

    const auto pivots = reduce(field, rows, m);
    result.rank = pivots.size();

    // Rows past the rank have all-zero coefficients; a nonzero payload there
    // means the received packets do not share one native generation.
    for (std::size_t i = result.rank; i < rows.size(); ++i) {
        if (std::any_of(rows[i].begin() + static_cast<std::ptrdiff_t>(m), rows[i].end(), [](Element e) { return e != 0; }))
            throw PollutionDetectedAtDecode("decode: inconsistent linear system in generation " +
                                            std::to_string(packets.front().gen_id));
    }

    if (result.rank == m) {
        std::vector<FieldVector> natives(m);
        for (std::size_t i = 0; i < m; ++i)
            natives[pivots[i]].assign(rows[i].begin() + static_cast<std::ptrdiff_t>(m), rows[i].end());
        result.natives = std::move(natives);
    }
    return result;
}

std::size_t rank(const Field& field, std::vector<FieldVector> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != cols) throw DimensionMismatch("rank: rows differ in length");
    return reduce(field, rows, cols).size();
}

}  // namespace nccell
