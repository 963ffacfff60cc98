#include "defect_cert/exact.hpp"

#include <algorithm>
#include <array>

namespace dcert {

std::string to_string(Int128 v) {
    if (v == 0) return "0";
    const bool negative = v < 0;
    // Work with the negative magnitude so INT128_MIN is representable.
    Int128 m = negative ? v : -v;
    std::string digits;
    while (m != 0) {
        const int digit = -static_cast<int>(m % 10);
        digits.push_back(static_cast<char>('0' + digit));
        m /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

Int128 parse_int128(std::string_view text) {
    if (text.empty()) throw ArgumentError("empty integer literal");
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) throw ArgumentError("integer literal has no digits");
    Int128 acc = 0;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') {
            throw ArgumentError("invalid integer literal '" + std::string(text) + "'");
        }
        // Accumulate negatively to cover the full range.
        if (__builtin_mul_overflow(acc, Int128(10), &acc) ||
            __builtin_sub_overflow(acc, Int128(c - '0'), &acc)) {
            throw ArgumentError("integer literal out of 128-bit range");
        }
    }
    if (!negative) {
        if (__builtin_sub_overflow(Int128(0), acc, &acc)) {
            throw ArgumentError("integer literal out of 128-bit range");
        }
    }
    return acc;
}

ModInt::ModInt(Int128 v, std::uint64_t p) : p_(p) {
    if (p < 2) throw ArgumentError("modulus must be at least 2");
    Int128 r = v % static_cast<Int128>(p);
    if (r < 0) r += p;
    v_ = static_cast<std::uint64_t>(r);
}

ModInt ModInt::pow(std::uint64_t e) const noexcept {
    ModInt base = *this;
    ModInt result = from_reduced(1 % p_, p_);
    while (e != 0) {
        if (e & 1U) result = result * base;
        base = base * base;
        e >>= 1U;
    }
    return result;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e != 0) {
        if (e & 1U) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1U;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : kBases) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (std::uint64_t a : kBases) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace dcert
