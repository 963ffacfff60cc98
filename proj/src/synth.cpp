#include "defect_cert/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "defect_cert/errors.hpp"

namespace dcert {

CaseStudyFixture case_a_fixture() {
    return CaseStudyFixture{
        .label = "case-a",
        .d = 3,
        .W = 8,
        .mixture = ExponentialMixture({0.831127, 0.872789, 0.853477}, {0.522164, 0.195934, 0.281902}),
        .true_windows = {4.791914, 1.276888, 0.349197, 0.098038, 0.028236, 0.008329, 0.002510, 7.71e-04,
                         2.41e-04, 7.61e-05, 2.44e-05, 7.87e-06},
        .observed_windows = {4.754830, 1.303021, 0.351327, 0.097663, 0.028026, 0.008326, 0.002474, 7.69e-04,
                             2.41e-04, 7.78e-05, 2.42e-05, 7.93e-06},
        .noise_level = 0.01,
    };
}

CaseStudyFixture case_b_fixture() {
    ExponentialMixture mix({0.904182, 0.877627}, {0.801912, 0.198088});
    std::vector<double> observed = {4.578368, 2.433641, 1.304007, 0.686328, 0.380817, 0.197523, 0.104636, 0.060241};
    const std::size_t W = 6;
    const auto y = mixture_sequence(mix, W * observed.size() - 1);
    auto truth = window_sums(y, W, observed.size()).sums;
    return CaseStudyFixture{
        .label = "case-b",
        .d = 2,
        .W = W,
        .mixture = std::move(mix),
        .true_windows = std::move(truth),
        .observed_windows = std::move(observed),
        .noise_level = 0.02,
    };
}

CasePreset case_c_preset() { return {"case-c", 3, 10}; }

std::vector<double> add_multiplicative_noise(std::span<const double> S, double level, std::uint64_t seed) {
    if (!(level >= 0.0)) throw DomainError("noise level must be nonnegative");
    std::mt19937_64 rng(seed);
    constexpr double kTwoPow53 = 9007199254740992.0;
    auto uniform_open0 = [&rng] { return static_cast<double>((rng() >> 11U) + 1U) / kTwoPow53; };
    std::vector<double> out(S.begin(), S.end());
    double spare = 0.0;
    bool have_spare = false;
    for (double& v : out) {
        double g;
        if (have_spare) {
            g = spare;
            have_spare = false;
        } else {
            const double u1 = uniform_open0();
            const double u2 = uniform_open0();
            const double r = std::sqrt(-2.0 * std::log(u1));
            g = r * std::cos(2.0 * std::numbers::pi * u2);
            spare = r * std::sin(2.0 * std::numbers::pi * u2);
            have_spare = true;
        }
        v *= 1.0 + level * g;
    }
    return out;
}

CollisionPair collision_pair(const CollisionBase& base, std::size_t d, std::size_t W, std::size_t K) {
    if (d == 0 || W == 0) throw ArgumentError("d and W must be at least 1");
    CollisionPair pair;
    pair.N = W * (K + 1) - 1;
    const std::size_t last_m = d + 3;
    const std::size_t length = pair.N + last_m * last_m + 1;

    if (const auto* params = std::get_if<RationalParams>(&base)) {
        if (params->degree() > d) throw ArgumentError("base degree exceeds d");
        pair.y_in = generate_sequence(*params, length - 1);
    } else {
        pair.y_in = mixture_sequence(std::get<ExponentialMixture>(base), length - 1);
    }
    if (std::any_of(pair.y_in.begin(), pair.y_in.end(), [](double v) { return v < 0.0; })) {
        throw AmbientClassError("collision base must generate a nonnegative sequence");
    }
    pair.y_out = pair.y_in;
    for (std::size_t m = 1; m <= last_m; ++m) {
        const std::size_t n = pair.N + m * m;
        pair.y_out[n] += 1.0;
        pair.bump_indices.push_back(n);
    }
    return pair;
}

double recurrence_fit_residual(std::span<const double> y, std::size_t d, std::size_t first, std::size_t last) {
    if (d == 0) throw ArgumentError("degree must be at least 1");
    first = std::max(first, d);
    if (last >= y.size() || first > last) throw ArgumentError("fit span outside the sequence");
    const auto rows = static_cast<Eigen::Index>(last - first + 1);
    const auto cols = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t n = first + static_cast<std::size_t>(r);
        for (Eigen::Index m = 1; m <= cols; ++m) a(r, m - 1) = y[n - static_cast<std::size_t>(m)];
        b(r) = -y[n];
    }
    const Eigen::VectorXd q = a.colPivHouseholderQr().solve(b);
    return (a * q - b).norm();
}

}  // namespace dcert
