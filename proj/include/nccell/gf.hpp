#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nccell {

using Element = std::uint16_t;
using FieldVector = std::vector<Element>;

/// Arithmetic in GF(2^k), 1 <= k <= 16.
///
/// Elements are plain unsigned integers whose bits are polynomial coefficients.
/// Addition is XOR. Multiplication goes through log/antilog tables for k <= 8
/// and carry-less shift-and-reduce above that. A Field is immutable after
/// construction and can be shared freely between threads.
class Field {
public:
    /// GF(2^k) with the default reduction polynomial for k (0x11B for k = 8).
    explicit Field(unsigned k = 8);

    /// Throws InvalidFieldSpec unless `poly` has degree exactly k and is
    /// irreducible over GF(2).
    Field(unsigned k, std::uint32_t poly);

    unsigned bits() const noexcept { return k_; }
    std::uint32_t order() const noexcept { return q_; }
    std::uint32_t polynomial() const noexcept { return poly_; }
    bool uses_tables() const noexcept { return !exp_.empty(); }

    bool contains(Element a) const noexcept { return a < q_; }
    bool contains(std::span<const Element> v) const noexcept;

    static Element add(Element a, Element b) noexcept { return a ^ b; }
    Element mul(Element a, Element b) const noexcept;
    Element inv(Element a) const;
    Element div(Element a, Element b) const { return mul(a, inv(b)); }
    Element pow(Element a, std::uint32_t e) const noexcept;

    Element dot(std::span<const Element> u, std::span<const Element> v) const;

    /// alpha * x + y.
    FieldVector axpy(Element alpha, std::span<const Element> x,
                     std::span<const Element> y) const;
    void axpy_into(Element alpha, std::span<const Element> x,
                   std::span<Element> y) const;
    void scale_into(Element alpha, std::span<Element> x) const;

    /// Reference shift-and-reduce product, independent of the tables.
    static Element mul_shift_reduce(Element a, Element b, unsigned k,
                                    std::uint32_t poly) noexcept;

    static std::uint32_t default_polynomial(unsigned k);
    static bool is_irreducible(std::uint32_t poly, unsigned k) noexcept;

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.k_ == b.k_ && a.poly_ == b.poly_;
    }

private:
    void build_tables();

    unsigned k_;
    std::uint32_t poly_;
    std::uint32_t q_;
    std::vector<Element> exp_;  // length 2(q-1), doubled to skip the modulo
    std::vector<std::uint32_t> log_;
};

}  // namespace nccell
