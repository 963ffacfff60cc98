#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "defect_cert/certify.hpp"
#include "defect_cert/errors.hpp"
#include "defect_cert/rank_cert.hpp"
#include "defect_cert/signal.hpp"

using namespace dcert;

namespace {

const ExponentialMixture kCaseA({0.831127, 0.872789, 0.853477}, {0.522164, 0.195934, 0.281902});

WindowData neutral_windows(std::size_t W, std::size_t K) { return WindowData(std::vector<double>(K, double(W)), W); }

}  // namespace

TEST_SUITE("certify") {

TEST_CASE("eps_bound") {
    CHECK(eps_bound(10.0, 7, 1e-2, 0.0) == 0.0);
    CHECK(eps_bound(10.0, 7, 1e-2, 1e-2) == doctest::Approx(frozen::kEpsBoundCoefficient * 1e-4).epsilon(1e-14));
    CHECK(eps_bound(1.0, 1, 1.0, 1.0) == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(eps_bound(1.0, 1, 1e-2, 2e-2), OutOfRegimeError);
    CHECK_THROWS_AS(eps_bound(0.0, 1, 1e-2, 1e-3), DomainError);
    // The rounded "350" coefficient understates the formula.
    CHECK(eps_bound(10.0, 7, 1e-2, 1e-2) / 1e-4 > 350.0);

    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double L = 10 * u(rng), e0 = 0.1 * u(rng), e = e0 * u(rng);
        const std::size_t K = 1 + static_cast<std::size_t>(t % 12);
        const double base = eps_bound(L, K, e0, e);
        CHECK(eps_bound(L * 1.1, K, e0, e) >= base);
        CHECK(eps_bound(L, K + 1, e0, e) >= base);
        CHECK(eps_bound(L, K, e0 * 1.1, e) >= base);
        CHECK(eps_bound(L, K, e0, e * 0.9) <= base);
    }
}

TEST_CASE("inverse operator norm and estimate_lipschitz") {
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
    diag(0, 0) = 2;
    diag(1, 1) = 4;
    CHECK(inverse_operator_norm(diag) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(inverse_operator_norm(Eigen::MatrixXd::Zero(3, 3)), DegenerateInputError);

    const RationalParams witness({1, 1, 5, 1}, {2, 2, -2});
    const double L = estimate_lipschitz(witness, 8);
    CHECK(std::isfinite(L));
    // 80-digit mpmath SVD of the witness Jacobian: sigma_min = 2.43337766393e-4.
    CHECK(L == doctest::Approx(1.0 / 2.43337766393e-4).epsilon(0.01));
    CHECK_THROWS_AS(estimate_lipschitz(RationalParams({0, 0, 0, 0}, {0, 0, 0}), 8), DegenerateInputError);

    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> flat(5);
        for (auto& v : flat) v = dist(rng);
        const auto p = RationalParams::from_flat(flat);
        const Eigen::MatrixXd jj = jacobian(p, 2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jj.transpose() * jj);
        const double smin = std::sqrt(eig.eigenvalues()(0));
        if (smin < 1e-6) continue;
        CHECK(oracle::rel_close(estimate_lipschitz(p, 2), 1.0 / smin, 0.01));
    }
}

TEST_CASE("decide_certificate") {
    CHECK(decide_certificate(LogVector({0.0, 0.0}), 0.0) == Decision::zero);
    CHECK(decide_certificate(LogVector({1.0, -1.0}), 0.5) == Decision::nonzero);
    CHECK(decide_certificate(LogVector({0.01, -0.01}), 1e-3) == Decision::zero);
    CHECK(to_string(Decision::inconclusive) == "inconclusive");
}

TEST_CASE("shift invariance of the decision layer") {
    std::mt19937_64 rng(63);
    std::uniform_real_distribution<double> dist(-0.05, 0.05), shift(-50.0, 50.0), tau(0.0, 0.02);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> y(10);
        for (auto& v : y) v = dist(rng);
        const double s = shift(rng), threshold = tau(rng);
        auto ys = y;
        for (auto& v : ys) v += s;
        CHECK(decide_log_config(LogVector(y), threshold) == decide_log_config(LogVector(ys), threshold));
    }
}

TEST_CASE("pipeline examples") {
    const auto neutral = pipeline(neutral_windows(8, 7), 1, 0.0);
    CHECK(neutral.decision == Decision::zero);
    CHECK(neutral.certificate_value <= neutral.threshold);
    CHECK(neutral.defect_estimate <= std::sqrt(2 * neutral.threshold));

    const auto caseA = pipeline(mixture_windows(kCaseA, 8, 12), 3, 0.0);
    CHECK(caseA.decision == Decision::nonzero);
    CHECK(caseA.certificate_value > caseA.threshold);
    REQUIRE(caseA.reconstruction.has_value());
    CHECK_FALSE(caseA.reconstruction->degenerate());
    CHECK(caseA.lipschitz_estimate > 0.0);
    CHECK(caseA.log_config.size() == 96);

    const auto zeros = pipeline(WindowData({0, 0, 0, 0, 0, 0, 0}, 8), 1, 0.0);
    CHECK(zeros.decision == Decision::inconclusive);
    CHECK(zeros.flags.count("hankel_singular") == 1);

    CHECK_THROWS_AS(pipeline(WindowData({1.0}, 8), 1, 0.0), InsufficientDataError);
    CHECK_THROWS_AS(pipeline(neutral_windows(8, 7), 1, -1.0), DomainError);
}

TEST_CASE("pipeline inconclusive paths") {
    // Alternating-sign data reconstructs a negative node.
    const auto neg = pipeline(WindowData({1.0, -0.5, 0.25, -0.125}, 4), 1, 0.0);
    CHECK(neg.decision == Decision::inconclusive);
    CHECK(neg.flags.count("non_positive_node") == 1);

    // Positive node with negative amplitude mixture crossing zero.
    std::vector<double> s(6);
    for (std::size_t k = 0; k < 6; ++k) s[k] = 2.0 * std::pow(0.5, double(k)) - 1.5 * std::pow(0.9, double(k));
    const auto cross = pipeline(WindowData(s, 1), 2, 0.0);
    CHECK(cross.decision == Decision::inconclusive);
    CHECK(cross.flags.count("non_positive_reconstruction") == 1);

    const auto noisy = pipeline(neutral_windows(8, 7), 1, 0.5);
    CHECK(noisy.decision == Decision::inconclusive);
    CHECK(noisy.flags.count("noise_exceeds_eps0") == 1);

    // Decay slow enough to stay under the threshold while the windows drift
    // further than the declared noise from any constant.
    std::vector<double> slow(7);
    for (std::size_t k = 0; k < 7; ++k) slow[k] = 8.0 * std::pow(0.99999, 8.0 * double(k));
    const auto hidden = pipeline(WindowData(slow, 8), 1, 1e-3);
    CHECK(hidden.certificate_value <= hidden.threshold);
    CHECK(hidden.decision == Decision::inconclusive);
    CHECK(hidden.flags.count("neutral_inconsistent") == 1);
}

TEST_CASE("soundness on exact mixtures with visible defect") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> rate(0.5, 0.95), weight(0.2, 2.0);
    int tested = 0;
    while (tested < 200) {
        const double a1 = rate(rng), a2 = rate(rng);
        if (std::fabs(a1 - a2) < 0.05) continue;
        const ExponentialMixture mix({a1, a2}, {weight(rng), weight(rng)});
        const auto w = mixture_windows(mix, 4, 8);
        const auto rep = pipeline(w, 2, 0.0);
        if (rep.defect_estimate < 0.1) continue;
        CHECK(rep.decision == Decision::nonzero);
        ++tested;
    }
}

TEST_CASE("meaning sets") {
    CHECK(meaning_set({3, 1, 2}) == std::vector<std::size_t>{1});
    CHECK(meaning_set({1, 1, 2}) == std::vector<std::size_t>{0, 1});
    CHECK(meaning_set({5}) == std::vector<std::size_t>{0});
    CHECK(eps_meaning_set({3, 1, 2}, 0) == std::vector<std::size_t>{1});
    CHECK(eps_meaning_set({3, 1, 2}, 1) == std::vector<std::size_t>{1, 2});
    CHECK(eps_meaning_set({3, 1, 2}, 5) == std::vector<std::size_t>{0, 1, 2});
    CHECK_THROWS_AS(meaning_set({}), ArgumentError);
    CHECK_THROWS_AS(eps_meaning_set({1.0}, -1.0), DomainError);

    const double x = 0.1 + 0.2;
    CHECK(meaning_set({x, 0.3}).size() == 2);  // one-ulp tie

    std::mt19937_64 rng(65);
    std::uniform_real_distribution<double> c(0.0, 10.0), e(0.0, 3.0);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> costs(6);
        for (auto& v : costs) v = c(rng);
        const double e1 = e(rng), e2 = e1 + e(rng);
        const auto m0 = meaning_set(costs), m1 = eps_meaning_set(costs, e1), m2 = eps_meaning_set(costs, e2);
        CHECK(std::includes(m1.begin(), m1.end(), m0.begin(), m0.end()));
        CHECK(std::includes(m2.begin(), m2.end(), m1.begin(), m1.end()));
    }
}

TEST_CASE("candidate ranking") {
    const RatioBand band(0.5, 4.0);
    const CostedCandidates cands(1.0, {0.5, 1.0 / 1.1, 1.0 / 3.0}, band);
    const auto r = cands.ratios();
    CHECK(r[0] == doctest::Approx(2.0));
    const auto choice = rank_candidates(cands, r, 0.0);
    CHECK(choice.best == 1);
    CHECK(choice.guarantee_eps == 0.0);
    CHECK(rank_candidates(cands, r, 0.01).guarantee_eps == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_THROWS_AS(rank_candidates(cands, {2.0, 1.1, 5.0}, 0.0), BandViolationError);
    CHECK_THROWS_AS(rank_candidates(cands, {2.0, 1.1}, 0.0), ArgumentError);
    CHECK_THROWS_AS(CostedCandidates(1.0, {0.1}, band), BandViolationError);
    CHECK(cands.costs()[0] == doctest::Approx(0.25));
}

TEST_CASE("2-epsilon localization") {
    const RatioBand band(0.5, 4.0);
    const double delta = 0.01;
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> ratio(band.lower() / (1 - delta), band.upper() / (1 + delta));
    std::uniform_real_distribution<double> noise(-delta, delta);
    for (int t = 0; t < 10000; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 9);
        std::vector<double> scales(n), truth(n), observed(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = ratio(rng);
            scales[i] = 1.0 / truth[i];
            observed[i] = truth[i] * (1 + noise(rng));
        }
        const CostedCandidates cands(1.0, scales, band);
        const auto choice = rank_candidates(cands, observed, delta);
        const auto costs = cands.costs();
        const double best = *std::min_element(costs.begin(), costs.end());
        CHECK(costs[choice.best] <= best + 2 * choice.guarantee_eps);
    }
}

}  // TEST_SUITE
