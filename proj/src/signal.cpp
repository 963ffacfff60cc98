#include "defect_cert/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dcert {

WindowData::WindowData(std::vector<double> s, std::size_t w) : sums(std::move(s)), block_length(w) {
    if (block_length == 0) throw ArgumentError("block length W must be at least 1");
    if (sums.empty()) throw ArgumentError("window data needs at least one sum");
    if (!std::all_of(sums.begin(), sums.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("window sums must be finite");
    }
}

ExponentialMixture::ExponentialMixture(std::vector<double> rates, std::vector<double> weights)
    : rates_(std::move(rates)), weights_(std::move(weights)) {
    if (rates_.empty() || rates_.size() != weights_.size()) {
        throw ArgumentError("mixture needs matching nonempty rate and weight vectors");
    }
    for (std::size_t i = 0; i < rates_.size(); ++i) {
        if (!(rates_[i] > 0.0 && rates_[i] < 1.0)) {
            throw ArgumentError("mixture rate " + std::to_string(rates_[i]) + " outside (0,1)");
        }
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw ArgumentError("mixture weights must be positive");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (rates_[i] == rates_[j]) throw ArgumentError("mixture rates must be distinct");
        }
    }
}

namespace {

template <class P>
void require_horizon(const BasicRationalParams<P>& params, std::size_t n_max) {
    if (params.recurrence.empty() || params.initial.size() != params.degree() + 1) {
        throw ArgumentError("malformed rational parameters");
    }
    if (n_max < params.degree()) {
        throw ArgumentError("n_max must be at least the degree d");
    }
}

}  // namespace

std::vector<double> generate_sequence(const RationalParams& params, std::size_t n_max) {
    require_horizon(params, n_max);
    return detail::iterate_recurrence<double, double>(params.initial, params.recurrence, n_max, 0.0);
}

std::vector<Int128> generate_sequence_exact(const IntegerParams& params, std::size_t n_max) {
    require_horizon(params, n_max);
    const auto checked = detail::iterate_recurrence<CheckedInt, std::int64_t>(
        params.initial, params.recurrence, n_max, CheckedInt(0));
    std::vector<Int128> out(checked.size());
    std::transform(checked.begin(), checked.end(), out.begin(),
                   [](CheckedInt v) { return v.value(); });
    return out;
}

std::vector<ModInt> generate_sequence_mod(const IntegerParams& params, std::size_t n_max,
                                          std::uint64_t p) {
    require_horizon(params, n_max);
    return detail::iterate_recurrence<ModInt, std::int64_t>(params.initial, params.recurrence,
                                                            n_max, ModInt(0, p));
}

WindowData window_sums(std::span<const double> sequence, std::size_t W, std::size_t K) {
    return WindowData(detail::block_sums<double>(sequence, W, K, 0.0), W);
}

std::vector<Int128> window_sums_exact(std::span<const Int128> sequence, std::size_t W,
                                      std::size_t K) {
    std::vector<CheckedInt> seq(sequence.begin(), sequence.end());
    const auto sums = detail::block_sums<CheckedInt>(seq, W, K, CheckedInt(0));
    std::vector<Int128> out(sums.size());
    std::transform(sums.begin(), sums.end(), out.begin(), [](CheckedInt v) { return v.value(); });
    return out;
}

std::vector<double> window_map(const RationalParams& params, std::size_t W) {
    if (W == 0) throw ArgumentError("block length W must be at least 1");
    const std::size_t K = 2 * params.degree() + 1;
    const auto y = generate_sequence(params, W * K - 1);
    return window_sums(y, W, K).sums;
}

std::vector<Int128> window_map_exact(const IntegerParams& params, std::size_t W) {
    if (W == 0) throw ArgumentError("block length W must be at least 1");
    const std::size_t K = 2 * params.degree() + 1;
    const auto y = generate_sequence_exact(params, W * K - 1);
    return window_sums_exact(y, W, K);
}

std::vector<double> mixture_sequence(const ExponentialMixture& mix, std::size_t n_max) {
    std::vector<double> y(n_max + 1, 0.0);
    for (std::size_t n = 0; n <= n_max; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < mix.size(); ++j) {
            acc += mix.weights()[j] * std::pow(mix.rates()[j], static_cast<double>(n));
        }
        y[n] = acc;
    }
    return y;
}

double geometric_block_gain(double a, std::size_t W) {
    // Horner form of 1 + a + ... + a^{W-1}; no division, so a = 1 is fine.
    double acc = 0.0;
    for (std::size_t j = 0; j < W; ++j) acc = acc * a + 1.0;
    return acc;
}

WindowExponentials window_exponentials(std::span<const double> rates,
                                       std::span<const double> weights, std::size_t W) {
    if (W == 0) throw ArgumentError("block length W must be at least 1");
    if (rates.size() != weights.size()) throw ArgumentError("rate/weight length mismatch");
    WindowExponentials out;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double a = rates[i];
        if (a == 1.0) throw DomainError("rate equal to 1 makes (1-a^W)/(1-a) singular");
        const double mu = std::pow(a, static_cast<double>(W));
        out.nodes.push_back(mu);
        out.amplitudes.push_back(weights[i] * (1.0 - mu) / (1.0 - a));
    }
    return out;
}

WindowExponentials mixture_window_params(const ExponentialMixture& mix, std::size_t W) {
    return window_exponentials(mix.rates(), mix.weights(), W);
}

WindowData mixture_windows(const ExponentialMixture& mix, std::size_t W, std::size_t K) {
    const auto wp = mixture_window_params(mix, W);
    std::vector<double> sums(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < wp.nodes.size(); ++i) {
            sums[k] += wp.amplitudes[i] * std::pow(wp.nodes[i], static_cast<double>(k));
        }
    }
    return WindowData(std::move(sums), W);
}

}  // namespace dcert
