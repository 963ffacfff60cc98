#include "defect_cert/rank_cert.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace dcert {

ModMatrix::ModMatrix(std::size_t rows, std::size_t cols, std::uint64_t p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, ModInt(0, p)) {}

ModMatrix::ModMatrix(const IntegerMatrix& m, std::uint64_t p) : ModMatrix(m.rows(), m.cols(), p) {
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = ModInt(m(r, c), p);
    }
}

namespace {

template <class T>
struct Propagated {
    std::vector<T> sums;
    std::vector<std::vector<T>> rows;  // rows[k][alpha]
};

template <class T, class P>
Propagated<T> propagate(const BasicRationalParams<P>& params, std::size_t W, T zero, T one) {
    if (W == 0) throw ArgumentError("block length W must be at least 1");
    const std::size_t d = params.degree();
    if (d == 0 || params.initial.size() != d + 1) throw ArgumentError("malformed rational parameters");
    const std::size_t n_params = 2 * d + 1;
    const std::size_t horizon = W * n_params;

    const auto y = detail::iterate_recurrence<T, P>(params.initial, params.recurrence, horizon - 1, zero);
    std::vector<T> q;
    for (const P& v : params.recurrence) q.push_back(detail::lift(zero, v));

    Propagated<T> out;
    out.sums = detail::block_sums<T>(y, W, n_params, zero);
    out.rows.assign(n_params, std::vector<T>(n_params, zero));

    std::vector<T> u(horizon, zero);
    for (std::size_t alpha = 0; alpha < n_params; ++alpha) {
        std::fill(u.begin(), u.end(), zero);
        if (alpha <= d) u[alpha] = one;
        for (std::size_t n = d + 1; n < horizon; ++n) {
            T acc = zero;
            for (std::size_t m = 1; m <= d; ++m) acc += q[m - 1] * u[n - m];
            // Source term from differentiating q_m itself.
            if (alpha > d) acc += y[n - (alpha - d)];
            u[n] = -acc;
        }
        const auto col = detail::block_sums<T>(u, W, n_params, zero);
        for (std::size_t k = 0; k < n_params; ++k) out.rows[k][alpha] = col[k];
    }
    return out;
}

void require_prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 63U)) throw ArgumentError("prime must be below 2^63");
    if (!is_prime(p)) throw ArgumentError("modulus " + std::to_string(p) + " is not prime");
}

}  // namespace

Eigen::MatrixXd jacobian(const RationalParams& params, std::size_t W) {
    const auto prop = propagate<double, double>(params, W, 0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(prop.rows.size());
    Eigen::MatrixXd j(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) j(r, c) = prop.rows[r][c];
    }
    return j;
}

IntegerMatrix jacobian_exact(const IntegerParams& params, std::size_t W) {
    const auto prop = propagate<CheckedInt, std::int64_t>(params, W, CheckedInt(0), CheckedInt(1));
    const std::size_t n = prop.rows.size();
    IntegerMatrix j(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) j(r, c) = prop.rows[r][c].value();
    }
    return j;
}

ModMatrix jacobian_mod(const IntegerParams& params, std::size_t W, std::uint64_t p) {
    require_prime(p);
    const auto prop = propagate<ModInt, std::int64_t>(params, W, ModInt(0, p), ModInt(1, p));
    const std::size_t n = prop.rows.size();
    ModMatrix j(n, n, p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) j(r, c) = prop.rows[r][c];
    }
    return j;
}

std::uint64_t det_mod(const ModMatrix& m) {
    if (m.rows() != m.cols()) throw ArgumentError("determinant needs a square matrix");
    const std::size_t n = m.rows();
    const std::uint64_t p = m.modulus();
    ModMatrix a = m;
    ModInt det(1, p);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col).value() == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            det = -det;
        }
        det = det * a(col, col);
        const ModInt inv = a(col, col).inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col).value() == 0) continue;
            const ModInt factor = a(r, col) * inv;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
        }
    }
    return det.value();
}

RankCertificate certify_witness(const IntegerParams& params, std::size_t W, std::uint64_t p) {
    require_prime(p);
    RankCertificate cert;
    cert.params = params;
    cert.d = params.degree();
    cert.W = W;
    cert.prime = p;
    try {
        const auto prop = propagate<CheckedInt, std::int64_t>(params, W, CheckedInt(0), CheckedInt(1));
        const std::size_t n = prop.rows.size();
        IntegerMatrix j(n, n);
        std::vector<Int128> sums;
        for (std::size_t r = 0; r < n; ++r) {
            sums.push_back(prop.sums[r].value());
            for (std::size_t c = 0; c < n; ++c) j(r, c) = prop.rows[r][c].value();
        }
        cert.jacobian = std::move(j);
        cert.window_sums = std::move(sums);
    } catch (const OverflowError& e) {
        cert.downgrade_reason = e.what();
    }

    const auto prop = propagate<ModInt, std::int64_t>(params, W, ModInt(0, p), ModInt(1, p));
    const std::size_t n = prop.rows.size();
    cert.jacobian_residues = ModMatrix(n, n, p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) cert.jacobian_residues(r, c) = prop.rows[r][c];
    }
    cert.window_sum_residues = prop.sums;
    cert.det_residue = det_mod(cert.jacobian_residues);
    cert.nonzero = cert.det_residue != 0;
    return cert;
}

std::optional<RankCertificate> search_witness(std::size_t d, std::size_t W, std::int64_t bound,
                                              std::uint64_t p, std::uint64_t seed,
                                              std::size_t max_trials) {
    if (d == 0) throw ArgumentError("degree must be at least 1");
    if (bound < 1) throw ArgumentError("coordinate bound must be at least 1");
    require_prime(p);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> coord(-bound, bound);
    for (std::size_t trial = 0; trial < max_trials; ++trial) {
        std::vector<std::int64_t> initial(d + 1);
        std::vector<std::int64_t> recurrence(d);
        for (auto& v : initial) v = coord(rng);
        bool all_zero = true;
        while (all_zero) {
            for (auto& v : recurrence) v = coord(rng);
            all_zero = std::all_of(recurrence.begin(), recurrence.end(), [](auto v) { return v == 0; });
        }
        auto cert = certify_witness(IntegerParams(std::move(initial), std::move(recurrence)), W, p);
        if (cert.nonzero) return cert;
    }
    return std::nullopt;
}

double hankel_witness_det(std::size_t d, std::size_t W) {
    if (d == 0 || W == 0) throw ArgumentError("d and W must be at least 1");
    // Window sums by direct block summation of y_n = sum_i alpha_i^n.
    const std::size_t K = 2 * d - 1;
    std::vector<long double> sums(K, 0.0L);
    for (std::size_t i = 1; i <= d; ++i) {
        const long double alpha = 1.0L / static_cast<long double>(i + 1);
        long double power = 1.0L;
        for (std::size_t n = 0; n < W * K; ++n) {
            sums[n / W] += power;
            power *= alpha;
        }
    }
    std::vector<long double> h(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) h[r * d + c] = sums[r + c];
    }
    long double det = 1.0L;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::abs(h[r * d + col]) > std::abs(h[pivot * d + col])) pivot = r;
        }
        if (h[pivot * d + col] == 0.0L) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(h[pivot * d + c], h[col * d + c]);
            det = -det;
        }
        det *= h[col * d + col];
        for (std::size_t r = col + 1; r < d; ++r) {
            const long double f = h[r * d + col] / h[col * d + col];
            for (std::size_t c = col; c < d; ++c) h[r * d + c] -= f * h[col * d + c];
        }
    }
    return static_cast<double>(det);
}

}  // namespace dcert
