#ifndef DEFECT_CERT_LOGGEOM_HPP
#define DEFECT_CERT_LOGGEOM_HPP

#include <span>
#include <vector>

namespace dcert {

/// Finite real vector in log coordinates, n >= 1.
class LogVector {
public:
    explicit LogVector(std::vector<double> entries);

    std::span<const double> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }

private:
    std::vector<double> entries_;
};

/// Strictly positive finite configuration x, n >= 1.
class PositiveConfig {
public:
    explicit PositiveConfig(std::vector<double> entries);

    std::span<const double> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Componentwise log.
    LogVector log() const;

private:
    std::vector<double> entries_;
};

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> v);

/// P(y) = y - mean(y) * 1.
LogVector project_mean_zero(const LogVector& y);

/// sigma(x) = sum_i log x_i.
double conservation(const PositiveConfig& x);

/// Euclidean norm of the mean-zero projection of log x. Scale invariant.
double defect(const PositiveConfig& x);

/// Euclidean norm with compensated accumulation.
double euclidean_norm(std::span<const double> v);

/// sum_i (cosh(u_i) - 1); at least |u|^2 / 2.
double certificate_value(const LogVector& u);

}  // namespace dcert

#endif  // DEFECT_CERT_LOGGEOM_HPP
