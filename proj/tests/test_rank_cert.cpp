#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "defect_cert/errors.hpp"
#include "defect_cert/rank_cert.hpp"

using namespace dcert;

namespace {

const IntegerParams kWitness({1, 1, 5, 1}, {2, 2, -2});

// Witness Jacobian at W = 8, rows k = 0..6, columns (y0, y1, y2, y3, q1, q2, q3).
const std::int64_t kWitnessJacobian[7][7] = {
    {1, 7, -3, -9, 69, -54, 3},
    {0, 1008, -956, -1388, 25920, -20844, 5568},
    {0, 175456, -190016, -200544, 5088848, -4927712, 1787216},
    {0, 28857344, -34167296, -27911296, 755009920, -959230336, 430318144},
    {0, 4538167296, -5754321920, -3726310400, 82750894080, -165775961088, 89416058880},
    {0, 686488772608, -922559823872, -473024225280, 3615042621440, -26067531849728, 16866417889280},
    {0, 100127404457984, -141965037535232, -56107543330816, -1341867460689920, -3737714520064000,
     2956546669428736},
};

std::uint64_t reduce(Int128 v, std::uint64_t p) {
    Int128 r = v % static_cast<Int128>(p);
    if (r < 0) r += p;
    return static_cast<std::uint64_t>(r);
}

ModMatrix random_mod_matrix(std::mt19937_64& rng, std::size_t n, std::uint64_t p) {
    ModMatrix m(n, n, p);
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = ModInt(dist(rng), p);
    return m;
}

ModMatrix multiply(const ModMatrix& a, const ModMatrix& b) {
    const std::uint64_t p = a.modulus();
    ModMatrix out(a.rows(), b.cols(), p);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            ModInt acc(0, p);
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

}  // namespace

TEST_SUITE("rank_cert") {

TEST_CASE("exact arithmetic primitives") {
    CHECK(to_string(static_cast<Int128>(0)) == "0");
    CHECK(to_string(-static_cast<Int128>(665805326548992)) == "-665805326548992");
    const Int128 big = static_cast<Int128>(1) << 100;
    CHECK(parse_int128(to_string(big)) == big);
    CHECK(parse_int128(to_string(-big)) == -big);
    CHECK_THROWS_AS(parse_int128("12a"), ArgumentError);
    CHECK_THROWS_AS(parse_int128(""), ArgumentError);
    CHECK_THROWS_AS(CheckedInt(big) * CheckedInt(big), OverflowError);

    CHECK(is_prime(2));
    CHECK(is_prime(kDefaultPrime));
    CHECK(is_prime(998244353));
    CHECK(is_prime(9223372036854775783ULL));  // largest prime below 2^63
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(15));
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7

    const ModInt a(3, 7);
    CHECK((a * a.inverse()).value() == 1);
    CHECK(ModInt(-1, 7).value() == 6);
    CHECK(a.pow(6).value() == 1);
}

TEST_CASE("det_mod examples") {
    ModMatrix id(7, 7, kDefaultPrime);
    for (std::size_t i = 0; i < 7; ++i) id(i, i) = ModInt(1, kDefaultPrime);
    CHECK(det_mod(id) == 1);

    ModMatrix m(2, 2, 7);
    m(0, 0) = ModInt(2, 7);
    m(0, 1) = ModInt(3, 7);
    m(1, 0) = ModInt(4, 7);
    m(1, 1) = ModInt(5, 7);
    CHECK(det_mod(m) == 5);

    CHECK_THROWS_AS(det_mod(ModMatrix(2, 3, 7)), ArgumentError);
}

TEST_CASE("det_mod multiplicativity") {
    std::mt19937_64 rng(41);
    for (std::uint64_t p : {std::uint64_t{7}, std::uint64_t{1000003}, kDefaultPrime}) {
        for (int t = 0; t < 50; ++t) {
            const auto a = random_mod_matrix(rng, 5, p);
            const auto b = random_mod_matrix(rng, 5, p);
            const ModInt lhs(det_mod(multiply(a, b)), p);
            const ModInt rhs = ModInt(det_mod(a), p) * ModInt(det_mod(b), p);
            CHECK(lhs.value() == rhs.value());
        }
    }
}

TEST_CASE("witness Jacobian reproduction") {
    const IntegerMatrix j = jacobian_exact(kWitness, 8);
    REQUIRE(j.rows() == 7);
    for (std::size_t r = 0; r < 7; ++r)
        for (std::size_t c = 0; c < 7; ++c) CHECK(j(r, c) == static_cast<Int128>(kWitnessJacobian[r][c]));

    const ModMatrix jm = jacobian_mod(kWitness, 8, kDefaultPrime);
    for (std::size_t r = 0; r < 7; ++r)
        for (std::size_t c = 0; c < 7; ++c) CHECK(jm(r, c).value() == reduce(kWitnessJacobian[r][c], kDefaultPrime));

    CHECK(det_mod(ModMatrix(j, kDefaultPrime)) == 972226939);
}

TEST_CASE("jacobian small cases") {
    const IntegerParams zero_init({0, 0, 0}, {3, -1});
    const auto j = jacobian_exact(zero_init, 4);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 3; c < 5; ++c) CHECK(j(r, c) == 0);

    const std::int64_t y0 = 3, y1 = -2, q1 = 5;
    const auto j1 = jacobian_exact(IntegerParams({y0, y1}, {q1}), 1);
    const std::int64_t want[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, -q1, -y1}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(j1(r, c) == want[r][c]);
}

TEST_CASE("exact and modular jacobians agree") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::int64_t> coord(-4, 4);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
        std::vector<std::int64_t> init(d + 1), rec(d);
        for (auto& v : init) v = coord(rng);
        for (auto& v : rec) v = coord(rng);
        const IntegerParams p(init, rec);
        const std::size_t W = 1 + static_cast<std::size_t>(t % 4);
        const auto exact = jacobian_exact(p, W);
        const auto mod = jacobian_mod(p, W, kDefaultPrime);
        for (std::size_t r = 0; r < exact.rows(); ++r)
            for (std::size_t c = 0; c < exact.cols(); ++c) CHECK(mod(r, c).value() == reduce(exact(r, c), kDefaultPrime));
    }
    CHECK_THROWS_AS(jacobian_mod(kWitness, 8, 15), ArgumentError);
}

TEST_CASE("float jacobian matches finite differences") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> flat(5);
        for (auto& v : flat) v = dist(rng);
        flat[3] *= 0.6;
        flat[4] *= 0.6;
        const auto p = RationalParams::from_flat(flat);
        const std::size_t W = 3;
        const auto j = jacobian(p, W);
        const double h = 1e-6;
        for (std::size_t c = 0; c < flat.size(); ++c) {
            auto up = flat, dn = flat;
            up[c] += h;
            dn[c] -= h;
            const auto fu = window_map(RationalParams::from_flat(up), W);
            const auto fd = window_map(RationalParams::from_flat(dn), W);
            for (std::size_t r = 0; r < fu.size(); ++r) {
                const double fdiff = (fu[r] - fd[r]) / (2 * h);
                const double got = j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                CHECK(std::fabs(got - fdiff) <= 1e-4 * std::max(std::fabs(got), 1.0));
            }
        }
    }
}

TEST_CASE("certify_witness") {
    const auto cert = certify_witness(kWitness, 8, kDefaultPrime);
    CHECK(cert.exact());
    CHECK(cert.nonzero);
    CHECK(cert.det_residue == 972226939);
    CHECK(cert.d == 3);
    REQUIRE(cert.window_sums.has_value());
    CHECK((*cert.window_sums)[6] == -static_cast<Int128>(665805326548992));

    const auto zero = certify_witness(IntegerParams({0, 0, 0, 0}, {0, 0, 0}), 8, kDefaultPrime);
    CHECK_FALSE(zero.nonzero);
    CHECK(zero.det_residue == 0);

    const auto small = certify_witness(IntegerParams({1, 1}, {-2}), 1, kDefaultPrime);
    CHECK(small.nonzero);
    CHECK(small.det_residue == kDefaultPrime - 1);  // det = -y1 = -1

    CHECK_THROWS_AS(certify_witness(kWitness, 8, 1000000008ULL), ArgumentError);
}

TEST_CASE("overflow downgrades to modular data") {
    const IntegerParams big({1, 1, 1}, {-3000000, 1});
    const auto cert = certify_witness(big, 8, kDefaultPrime);
    CHECK_FALSE(cert.exact());
    CHECK_FALSE(cert.downgrade_reason.empty());
    CHECK(cert.jacobian_residues.rows() == 5);
    CHECK(cert.nonzero == (cert.det_residue != 0));
}

TEST_CASE("witness search") {
    const auto a = search_witness(3, 8, 5, kDefaultPrime, 1234, 100);
    REQUIRE(a.has_value());
    CHECK(a->nonzero);
    const auto again = certify_witness(a->params, 8, kDefaultPrime);
    CHECK(again.det_residue == a->det_residue);
    bool any_q = false;
    for (auto q : a->params.recurrence) any_q = any_q || q != 0;
    CHECK(any_q);

    const auto b = search_witness(3, 8, 5, kDefaultPrime, 1234, 100);
    REQUIRE(b.has_value());
    CHECK(b->params.flat() == a->params.flat());

    const auto c = search_witness(1, 1, 2, kDefaultPrime, 7, 100);
    REQUIRE(c.has_value());
    CHECK(c->nonzero);

    CHECK_FALSE(search_witness(3, 8, 5, kDefaultPrime, 1, 0).has_value());
}

TEST_CASE("Hankel witness determinant") {
    CHECK(hankel_witness_det(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hankel_witness_det(2, 1) == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
    for (std::size_t d = 1; d <= 3; ++d) {
        for (std::size_t wi = 0; wi < 2; ++wi) {
            const std::size_t W = wi == 0 ? 1 : 8;
            const double got = hankel_witness_det(d, W);
            CHECK(got > 0.0);
            CHECK(oracle::rel_close(got, frozen::kHankelDet[d - 1][wi], 1e-6));
            CHECK(oracle::rel_close(got, static_cast<double>(oracle::factored_hankel_det(d, W)), 1e-6));
        }
    }
}

}  // TEST_SUITE
