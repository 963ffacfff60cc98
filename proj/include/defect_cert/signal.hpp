#ifndef DEFECT_CERT_SIGNAL_HPP
#define DEFECT_CERT_SIGNAL_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "defect_cert/errors.hpp"
#include "defect_cert/exact.hpp"

namespace dcert {

/// Parameters (y_0..y_d, q_1..q_d) of a degree-<=d rational signal.
///
/// The sequence obeys y_n = -(q_1 y_{n-1} + ... + q_d y_{n-d}) for n >= d+1, so
/// y_0 never enters the recurrence. This sign convention differs from the monic
/// characteristic coefficients used by the Prony step.
template <class T>
struct BasicRationalParams {
    std::vector<T> initial;     ///< y_0..y_d
    std::vector<T> recurrence;  ///< q_1..q_d

    BasicRationalParams() = default;
    BasicRationalParams(std::vector<T> init, std::vector<T> rec)
        : initial(std::move(init)), recurrence(std::move(rec)) {
        if (recurrence.empty()) throw ArgumentError("degree must be at least 1");
        if (initial.size() != recurrence.size() + 1) {
            throw ArgumentError("need d+1 initial values for d recurrence coefficients");
        }
    }

    /// Splits a flat vector (y_0..y_d, q_1..q_d) of odd length 2d+1.
    static BasicRationalParams from_flat(std::span<const T> flat) {
        if (flat.size() < 3 || flat.size() % 2 == 0) {
            throw ArgumentError("flat parameter vector must have odd length 2d+1 >= 3");
        }
        const std::size_t d = (flat.size() - 1) / 2;
        return {std::vector<T>(flat.begin(), flat.begin() + d + 1),
                std::vector<T>(flat.begin() + d + 1, flat.end())};
    }

    std::size_t degree() const noexcept { return recurrence.size(); }

    std::vector<T> flat() const {
        std::vector<T> out(initial);
        out.insert(out.end(), recurrence.begin(), recurrence.end());
        return out;
    }
};

using RationalParams = BasicRationalParams<double>;
using IntegerParams = BasicRationalParams<std::int64_t>;

/// K consecutive W-block sums.
struct WindowData {
    std::vector<double> sums;
    std::size_t block_length = 1;  ///< W

    WindowData() = default;
    WindowData(std::vector<double> s, std::size_t w);

    std::size_t count() const noexcept { return sums.size(); }
};

/// y_n = sum_j w_j a_j^n with a_j in (0,1) pairwise distinct and w_j > 0.
class ExponentialMixture {
public:
    ExponentialMixture(std::vector<double> rates, std::vector<double> weights);

    const std::vector<double>& rates() const noexcept { return rates_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return rates_.size(); }

private:
    std::vector<double> rates_;
    std::vector<double> weights_;
};

/// Window-process parameters: S_k = sum_i amplitudes_i * nodes_i^k.
struct WindowExponentials {
    std::vector<double> nodes;
    std::vector<double> amplitudes;
};

namespace detail {

inline double lift(double, double v) { return v; }
inline CheckedInt lift(CheckedInt, std::int64_t v) { return CheckedInt(v); }
inline ModInt lift(ModInt zero, std::int64_t v) { return ModInt(v, zero.modulus()); }

/// Iterates the recurrence over any ring type; `zero` carries ring context (e.g. the modulus).
template <class T, class P>
std::vector<T> iterate_recurrence(std::span<const P> initial, std::span<const P> recurrence,
                                  std::size_t n_max, T zero) {
    const std::size_t d = recurrence.size();
    std::vector<T> y(n_max + 1, zero);
    std::vector<T> q;
    q.reserve(d);
    for (const P& v : recurrence) q.push_back(lift(zero, v));
    for (std::size_t n = 0; n <= d && n <= n_max; ++n) y[n] = lift(zero, initial[n]);
    for (std::size_t n = d + 1; n <= n_max; ++n) {
        T acc = zero;
        for (std::size_t m = 1; m <= d; ++m) acc += q[m - 1] * y[n - m];
        y[n] = -acc;
    }
    return y;
}

template <class T>
std::vector<T> block_sums(std::span<const T> seq, std::size_t W, std::size_t K, T zero) {
    if (W == 0) throw ArgumentError("block length W must be at least 1");
    if (seq.size() < W * K) throw ArgumentError("sequence too short for the requested windows");
    std::vector<T> out(K, zero);
    for (std::size_t k = 0; k < K; ++k) {
        T acc = zero;
        for (std::size_t j = 0; j < W; ++j) acc += seq[W * k + j];
        out[k] = acc;
    }
    return out;
}

}  // namespace detail

/// Terms y_0..y_{n_max}. Throws ArgumentError when n_max < d.
std::vector<double> generate_sequence(const RationalParams& params, std::size_t n_max);

/// Exact integer iteration; throws OverflowError past 128 bits.
std::vector<Int128> generate_sequence_exact(const IntegerParams& params, std::size_t n_max);

/// Residue iteration modulo p.
std::vector<ModInt> generate_sequence_mod(const IntegerParams& params, std::size_t n_max,
                                          std::uint64_t p);

/// S_k = sum_{j<W} y_{Wk+j} for k < K, 0-based.
WindowData window_sums(std::span<const double> sequence, std::size_t W, std::size_t K);
std::vector<Int128> window_sums_exact(std::span<const Int128> sequence, std::size_t W,
                                      std::size_t K);

/// First 2d+1 window sums of the signal generated by `params`.
std::vector<double> window_map(const RationalParams& params, std::size_t W);
std::vector<Int128> window_map_exact(const IntegerParams& params, std::size_t W);

std::vector<double> mixture_sequence(const ExponentialMixture& mix, std::size_t n_max);

/// Sum_{j<W} a^j, valid for every real a including a = 1.
double geometric_block_gain(double a, std::size_t W);

/// Raw form of mixture_window_params for arbitrary rates; throws DomainError when a rate is 1.
WindowExponentials window_exponentials(std::span<const double> rates,
                                       std::span<const double> weights, std::size_t W);

/// nodes a_i^W and amplitudes w_i (1 - a_i^W)/(1 - a_i) of the windowed mixture.
/// Throws DomainError if some rate equals 1.
WindowExponentials mixture_window_params(const ExponentialMixture& mix, std::size_t W);

/// Exact windows of a mixture via the geometric block-sum identity.
WindowData mixture_windows(const ExponentialMixture& mix, std::size_t W, std::size_t K);

}  // namespace dcert

#endif  // DEFECT_CERT_SIGNAL_HPP
