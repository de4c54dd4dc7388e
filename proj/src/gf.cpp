#include "nccell/gf.hpp"

#include <array>
#include <bit>
#include <string>

#include "nccell/errors.hpp"

namespace nccell {

namespace {

// Low-weight irreducible polynomials, indexed by degree. Degree 8 uses the
// AES polynomial, which is irreducible but not primitive; the table builder
// searches for a generator instead of assuming x is one.
constexpr std::array<std::uint32_t, 17> kDefaultPolys = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,  0x11B,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

int degree(std::uint32_t p) noexcept { return p == 0 ? -1 : 31 - std::countl_zero(p); }

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) noexcept {
    const int dm = degree(m);
    for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
    return a;
}

}  // namespace

std::uint32_t Field::default_polynomial(unsigned k) {
    if (k < 1 || k > 16) throw InvalidFieldSpec("field bit width must be in 1..16, got " + std::to_string(k));
    return kDefaultPolys[k];
}

bool Field::is_irreducible(std::uint32_t poly, unsigned k) noexcept {
    if (k < 1 || k > 16 || degree(poly) != static_cast<int>(k)) return false;
    // Any factorization has a factor of degree <= k/2.
    for (std::uint32_t d = 2; degree(d) <= static_cast<int>(k / 2); ++d) {
        if (poly_mod(poly, d) == 0) return false;
    }
    return true;
}

Element Field::mul_shift_reduce(Element a, Element b, unsigned k, std::uint32_t poly) noexcept {
    std::uint32_t x = a;
    std::uint32_t acc = 0;
    const std::uint32_t top = 1u << k;
    while (b != 0) {
        if (b & 1u) acc ^= x;
        b >>= 1;
        x <<= 1;
        if (x & top) x ^= poly;
    }
    return static_cast<Element>(acc);
}

Field::Field(unsigned k) : Field(k, default_polynomial(k)) {}

Field::Field(unsigned k, std::uint32_t poly) : k_(k), poly_(poly), q_(0) {
    if (k < 1 || k > 16) throw InvalidFieldSpec("field bit width must be in 1..16, got " + std::to_string(k));
    if (degree(poly) != static_cast<int>(k))
        throw InvalidFieldSpec("reduction polynomial degree does not match bit width");
    if (!is_irreducible(poly, k)) throw InvalidFieldSpec("reduction polynomial is reducible");
    q_ = 1u << k;
    if (k <= 8) build_tables();
}

void Field::build_tables() {
    const std::uint32_t group = q_ - 1;
    if (group == 1) {
        // GF(2): the only nonzero element is 1.
        exp_ = {1, 1};
        log_ = {0, 0};
        return;
    }
    // Smallest generator of the multiplicative group.
    Element g = 0;
    for (std::uint32_t cand = 2; cand < q_ && g == 0; ++cand) {
        Element x = 1;
        std::uint32_t ord = 0;
        do {
            x = mul_shift_reduce(x, static_cast<Element>(cand), k_, poly_);
            ++ord;
        } while (x != 1);
        if (ord == group) g = static_cast<Element>(cand);
    }
    exp_.assign(2 * group, 0);
    log_.assign(q_, 0);
    Element x = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
        exp_[i] = x;
        exp_[i + group] = x;
        log_[x] = i;
        x = mul_shift_reduce(x, g, k_, poly_);
    }
}

bool Field::contains(std::span<const Element> v) const noexcept {
    for (Element e : v)
        if (e >= q_) return false;
    return true;
}

Element Field::mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return mul_shift_reduce(a, b, k_, poly_);
}

Element Field::pow(Element a, std::uint32_t e) const noexcept {
    Element result = 1;
    while (e != 0) {
        if (e & 1u) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

Element Field::inv(Element a) const {
    if (a == 0) throw InversionOfZero("inverse of zero in GF(2^" + std::to_string(k_) + ")");
    if (!exp_.empty()) {
        const std::uint32_t group = q_ - 1;
        return exp_[(group - log_[a]) % group];
    }
    return pow(a, q_ - 2);
}

Element Field::dot(std::span<const Element> u, std::span<const Element> v) const {
    if (u.size() != v.size())
        throw DimensionMismatch("dot: lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
    Element acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) acc ^= mul(u[i], v[i]);
    return acc;
}

FieldVector Field::axpy(Element alpha, std::span<const Element> x, std::span<const Element> y) const {
    FieldVector out(y.begin(), y.end());
    axpy_into(alpha, x, out);
    return out;
}

void Field::axpy_into(Element alpha, std::span<const Element> x, std::span<Element> y) const {
    if (x.size() != y.size())
        throw DimensionMismatch("axpy: lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    if (alpha == 0) return;
    if (alpha == 1) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] ^= x[i];
        return;
    }
    if (!exp_.empty()) {
        const std::uint32_t la = log_[alpha];
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0) y[i] ^= exp_[la + log_[x[i]]];
        return;
    }
    for (std::size_t i = 0; i < x.size(); ++i) y[i] ^= mul(alpha, x[i]);
}

void Field::scale_into(Element alpha, std::span<Element> x) const {
    for (Element& e : x) e = mul(alpha, e);
}

}  // namespace nccell
