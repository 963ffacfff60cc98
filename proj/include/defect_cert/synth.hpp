#ifndef DEFECT_CERT_SYNTH_HPP
#define DEFECT_CERT_SYNTH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "defect_cert/signal.hpp"

namespace dcert {

/// Mixture, block length and window tables of a synthetic case study.
/// observed_windows are literal constants; they cannot be regenerated.
struct CaseStudyFixture {
    std::string label;
    std::size_t d = 0;
    std::size_t W = 0;
    ExponentialMixture mixture;
    std::vector<double> true_windows;
    std::vector<double> observed_windows;
    double noise_level = 0.0;
};

/// Multi-exponential decay: d=3, W=8, 12 windows, 1% noise. true_windows is the printed table column.
CaseStudyFixture case_a_fixture();

/// Two-segment response decay: d=2, W=6, 8 observed windows at 2% noise;
/// true_windows recomputed from the mixture.
CaseStudyFixture case_b_fixture();

struct CasePreset {
    std::string label;
    std::size_t d = 0;
    std::size_t W = 0;
};

/// Coarse-logging configuration (d=3, W=10). No data is attached.
CasePreset case_c_preset();

/// out[k] = S[k] (1 + level g_k).
///
/// g_k are standard normals from std::mt19937_64(seed) through the Box-Muller
/// transform: u1 = (x1 + 1) 2^-53 with x1 the top 53 bits of a draw, u2 likewise
/// from the next draw, then sqrt(-2 ln u1) cos(2 pi u2) and sqrt(-2 ln u1) sin(2 pi u2)
/// are consumed in that order.
std::vector<double> add_multiplicative_noise(std::span<const double> S, double level, std::uint64_t seed);

/// Two sequences with identical first K+1 windows, the second outside the rational class.
struct CollisionPair {
    std::vector<double> y_in;
    std::vector<double> y_out;
    std::size_t N = 0;                     ///< last index seen by the first K+1 windows, W(K+1)-1
    std::vector<std::size_t> bump_indices;  ///< N + m^2, m >= 1, within the prefix
};

using CollisionBase = std::variant<RationalParams, ExponentialMixture>;

/// y_out = y_in + r with r_n = 1 at n = N + m^2 and 0 elsewhere. The prefix runs
/// through the bump at m = d + 3 so the last two bumps are more than d apart.
/// Throws AmbientClassError if the base prefix has a negative entry.
CollisionPair collision_pair(const CollisionBase& base, std::size_t d, std::size_t W, std::size_t K);

/// 2-norm of the residual of the least-squares degree-d recurrence
/// y_n + q_1 y_{n-1} + ... + q_d y_{n-d} over rows n in [first, last].
double recurrence_fit_residual(std::span<const double> y, std::size_t d, std::size_t first, std::size_t last);

}  // namespace dcert

#endif  // DEFECT_CERT_SYNTH_HPP
