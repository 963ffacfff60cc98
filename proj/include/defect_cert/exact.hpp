#ifndef DEFECT_CERT_EXACT_HPP
#define DEFECT_CERT_EXACT_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "defect_cert/errors.hpp"

namespace dcert {

using Int128 = __int128;

std::string to_string(Int128 v);

/// Parses an optionally signed decimal integer; throws ArgumentError on junk or overflow.
Int128 parse_int128(std::string_view text);

/// Signed 128-bit integer whose arithmetic throws OverflowError instead of wrapping.
class CheckedInt {
public:
    constexpr CheckedInt() = default;
    constexpr CheckedInt(Int128 v) : v_(v) {}  // NOLINT(google-explicit-constructor)

    constexpr Int128 value() const noexcept { return v_; }

    friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
        Int128 r;
        if (__builtin_add_overflow(a.v_, b.v_, &r)) throw OverflowError("128-bit overflow in addition");
        return r;
    }
    friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
        Int128 r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw OverflowError("128-bit overflow in subtraction");
        return r;
    }
    friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
        Int128 r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw OverflowError("128-bit overflow in multiplication");
        return r;
    }
    friend CheckedInt operator-(CheckedInt a) { return CheckedInt(0) - a; }
    CheckedInt& operator+=(CheckedInt b) { return *this = *this + b; }
    CheckedInt& operator-=(CheckedInt b) { return *this = *this - b; }
    friend constexpr bool operator==(CheckedInt a, CheckedInt b) noexcept { return a.v_ == b.v_; }

private:
    Int128 v_ = 0;
};

/// Residue modulo a runtime prime p < 2^63. Both operands of a binary op share p.
class ModInt {
public:
    ModInt() = default;
    ModInt(Int128 v, std::uint64_t p);

    std::uint64_t value() const noexcept { return v_; }
    std::uint64_t modulus() const noexcept { return p_; }

    friend ModInt operator+(ModInt a, ModInt b) noexcept {
        std::uint64_t r = a.v_ + b.v_;
        if (r >= a.p_) r -= a.p_;
        return from_reduced(r, a.p_);
    }
    friend ModInt operator-(ModInt a, ModInt b) noexcept {
        return from_reduced(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_);
    }
    friend ModInt operator*(ModInt a, ModInt b) noexcept {
        const unsigned __int128 prod = static_cast<unsigned __int128>(a.v_) * b.v_;
        return from_reduced(static_cast<std::uint64_t>(prod % a.p_), a.p_);
    }
    friend ModInt operator-(ModInt a) noexcept { return ModInt::from_reduced(0, a.p_) - a; }
    ModInt& operator+=(ModInt b) noexcept { return *this = *this + b; }
    ModInt& operator-=(ModInt b) noexcept { return *this = *this - b; }
    friend bool operator==(ModInt a, ModInt b) noexcept { return a.v_ == b.v_ && a.p_ == b.p_; }

    ModInt pow(std::uint64_t e) const noexcept;
    /// Multiplicative inverse via Fermat, a^(p-2). Undefined for zero.
    ModInt inverse() const noexcept { return pow(p_ - 2); }

private:
    static ModInt from_reduced(std::uint64_t v, std::uint64_t p) noexcept {
        ModInt m;
        m.v_ = v;
        m.p_ = p;
        return m;
    }

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 1;
};

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n) noexcept;

inline constexpr std::uint64_t kDefaultPrime = 1'000'000'007ULL;

}  // namespace dcert

#endif  // DEFECT_CERT_EXACT_HPP
