#include "defect_cert/cost.hpp"

#include <cmath>
#include <string>

#include "defect_cert/errors.hpp"

namespace dcert {

namespace {

constexpr double kNearOne = 1e-4;

void require_positive(double x, const char* what) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(x));
    }
}

}  // namespace

RatioBand::RatioBand(double lower, double upper) : lower_(lower), upper_(upper) {
    require_positive(lower, "band lower bound");
    require_positive(upper, "band upper bound");
    if (lower > upper) {
        throw DomainError("band lower bound exceeds upper bound");
    }
}

double cost(double x) {
    require_positive(x, "cost argument");
    const double dx = x - 1.0;
    if (std::abs(dx) < kNearOne) {
        return dx * dx / (2.0 * x);
    }
    return 0.5 * (x + 1.0 / x) - 1.0;
}

double cost_log(double t) {
    if (!std::isfinite(t)) {
        throw DomainError("cost_log argument must be finite");
    }
    // cosh(t) - 1 = 2 sinh^2(t/2), free of cancellation at small |t|.
    const double s = std::sinh(0.5 * t);
    return 2.0 * s * s;
}

double separable_cost(std::span<const double> x) {
    double total = 0.0;
    for (double xi : x) {
        total += cost(xi);
    }
    return total;
}

double lipschitz_constant(const RatioBand& band) {
    const double a = band.lower();
    return 0.5 * (1.0 + 1.0 / (a * a));
}

double tolerance_epsilon(const RatioBand& band, double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw DomainError("relative error delta must be nonnegative and finite");
    }
    return lipschitz_constant(band) * delta * band.upper();
}

double rcl_residual(double x, double y) {
    const double jx = cost(x);
    const double jy = cost(y);
    return cost(x * y) + cost(x / y) - 2.0 * jx - 2.0 * jy - 2.0 * jx * jy;
}

double quadratic_upper_bound(double t) {
    if (!std::isfinite(t)) {
        throw DomainError("quadratic_upper_bound argument must be finite");
    }
    return 0.5 * std::exp(std::abs(t)) * t * t;
}

}  // namespace dcert
