#ifndef DEFECT_CERT_COST_HPP
#define DEFECT_CERT_COST_HPP

#include <span>

namespace dcert {

/// Closed band [lower, upper] known to contain a family of ratios.
class RatioBand {
public:
    /// Throws DomainError unless 0 < lower <= upper < inf.
    RatioBand(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool contains(double r) const noexcept { return r >= lower_ && r <= upper_; }

private:
    double lower_;
    double upper_;
};

/// Canonical reciprocal cost J(x) = (x + 1/x)/2 - 1.
///
/// Near x = 1 the equivalent form (x-1)^2/(2x) is used so that the quadratic
/// behaviour survives cancellation. Throws DomainError for x <= 0 or non-finite x.
double cost(double x);

/// Log-coordinate form cosh(t) - 1, i.e. cost(exp(t)).
double cost_log(double t);

/// Sum of cost over all components; 0 for an empty vector.
double separable_cost(std::span<const double> x);

/// Lipschitz constant of cost on the band: (1 + lower^-2)/2.
double lipschitz_constant(const RatioBand& band);

/// Worst-case cost perturbation for ratios known to relative accuracy delta:
/// lipschitz_constant(band) * delta * upper.
double tolerance_epsilon(const RatioBand& band, double delta);

/// J(xy) + J(x/y) - 2J(x) - 2J(y) - 2J(x)J(y). Vanishes for the canonical cost.
double rcl_residual(double x, double y);

/// exp(|t|) t^2 / 2, an upper bound for cost_log(t).
double quadratic_upper_bound(double t);

}  // namespace dcert

#endif  // DEFECT_CERT_COST_HPP
