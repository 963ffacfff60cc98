#ifndef DEFECT_CERT_RANK_CERT_HPP
#define DEFECT_CERT_RANK_CERT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "defect_cert/exact.hpp"
#include "defect_cert/signal.hpp"

namespace dcert {

/// Dense row-major matrix of exact integers.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Int128& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Int128 operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int128> data_;
};

/// Dense row-major matrix over F_p.
class ModMatrix {
public:
    ModMatrix() = default;
    ModMatrix(std::size_t rows, std::size_t cols, std::uint64_t p);
    /// Entrywise reduction of an integer matrix.
    ModMatrix(const IntegerMatrix& m, std::uint64_t p);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint64_t modulus() const noexcept { return p_; }
    ModInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const ModInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::uint64_t p_ = 2;
    std::vector<ModInt> data_;
};

/// Jacobian of the first 2d+1 window sums with respect to (y_0..y_d, q_1..q_d).
///
/// Derivatives u_n = dy_n/dalpha are propagated through the same recurrence,
///   u_n + sum_m q_m u_{n-m} = -sum_m (dq_m/dalpha) y_{n-m},
/// and row k collects sum_{j<W} u_{Wk+j}.
Eigen::MatrixXd jacobian(const RationalParams& params, std::size_t W);

/// Exact integer Jacobian. Throws OverflowError if any intermediate leaves 128 bits.
IntegerMatrix jacobian_exact(const IntegerParams& params, std::size_t W);

/// Jacobian with every operation carried out in F_p. Throws ArgumentError for
/// composite p or p >= 2^63.
ModMatrix jacobian_mod(const IntegerParams& params, std::size_t W, std::uint64_t p);

/// Determinant residue in [0, p) by Gaussian elimination over F_p.
std::uint64_t det_mod(const ModMatrix& m);

/// Integer point, prime, Jacobian and determinant residue. nonzero == (det_residue != 0),
/// and a nonzero residue proves det DF(params) != 0 over the reals.
struct RankCertificate {
    IntegerParams params;
    std::size_t d = 0;
    std::size_t W = 0;
    std::uint64_t prime = kDefaultPrime;
    /// Present when exact evaluation stayed within 128 bits.
    std::optional<IntegerMatrix> jacobian;
    std::optional<std::vector<Int128>> window_sums;
    ModMatrix jacobian_residues;
    std::vector<ModInt> window_sum_residues;
    std::uint64_t det_residue = 0;
    bool nonzero = false;
    /// Set when exact arithmetic overflowed and only modular data was kept.
    std::string downgrade_reason;

    bool exact() const noexcept { return jacobian.has_value(); }
};

RankCertificate certify_witness(const IntegerParams& params, std::size_t W,
                                std::uint64_t p = kDefaultPrime);

/// Seeded random search over integer points with coordinates in [-bound, bound]
/// and a nonzero recurrence vector. Returns the first nonsingular certificate in
/// trial order, or nullopt after max_trials failures.
std::optional<RankCertificate> search_witness(std::size_t d, std::size_t W, std::int64_t bound,
                                              std::uint64_t p, std::uint64_t seed,
                                              std::size_t max_trials);

/// det of the d x d Hankel matrix (S_{i+j}) for the witness family y_n = sum_i (1/(i+1))^n.
double hankel_witness_det(std::size_t d, std::size_t W);

}  // namespace dcert

#endif  // DEFECT_CERT_RANK_CERT_HPP
