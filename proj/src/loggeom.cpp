#include "defect_cert/loggeom.hpp"

#include <algorithm>
#include <cmath>

#include "defect_cert/cost.hpp"
#include "defect_cert/errors.hpp"

namespace dcert {

LogVector::LogVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ArgumentError("log vector must have at least one entry");
    }
    if (!std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("log vector entries must be finite");
    }
}

PositiveConfig::PositiveConfig(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ArgumentError("configuration must have at least one entry");
    }
    for (double v : entries_) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw DomainError("configuration entries must be positive and finite");
        }
    }
}

LogVector PositiveConfig::log() const {
    std::vector<double> out(entries_.size());
    std::transform(entries_.begin(), entries_.end(), out.begin(),
                   [](double v) { return std::log(v); });
    return LogVector(std::move(out));
}

double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t kBlock = 8;
    if (v.size() <= kBlock) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

LogVector project_mean_zero(const LogVector& y) {
    const auto e = y.entries();
    const double mean = pairwise_sum(e) / static_cast<double>(e.size());
    std::vector<double> out(e.size());
    std::transform(e.begin(), e.end(), out.begin(), [mean](double v) { return v - mean; });
    return LogVector(std::move(out));
}

double conservation(const PositiveConfig& x) {
    const LogVector y = x.log();
    return pairwise_sum(y.entries());
}

double euclidean_norm(std::span<const double> v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    // Kahan-compensated sum of scaled squares.
    double sum = 0.0;
    double carry = 0.0;
    for (double x : v) {
        const double r = x / scale;
        const double term = r * r - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return scale * std::sqrt(sum);
}

double defect(const PositiveConfig& x) {
    return euclidean_norm(project_mean_zero(x.log()).entries());
}

double certificate_value(const LogVector& u) {
    std::vector<double> terms(u.size());
    const auto e = u.entries();
    std::transform(e.begin(), e.end(), terms.begin(), [](double t) { return cost_log(t); });
    return pairwise_sum(terms);
}

}  // namespace dcert
