#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "qtrack/qubo.hpp"

using namespace qtrack;

namespace {

// Dense-matrix oracle: E = a^T Q a + l.a + c with Q strictly upper.
double dense_energy(const QuboModel& m, const std::vector<std::uint8_t>& a) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m.n_vars, m.n_vars);
    for (const auto& [key, value] : m.quadratic) q(key.first, key.second) = value;
    Eigen::VectorXd x(m.n_vars);
    for (int i = 0; i < m.n_vars; ++i) x(i) = a[static_cast<std::size_t>(i)];
    return x.dot(q * x) + m.linear.dot(x) + m.offset;
}

QuboModel random_model(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    QuboModel m(n);
    m.offset = coef(rng);
    for (int i = 0; i < n; ++i) m.add_linear(i, coef(rng));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 2) m.add_quadratic(i, j, coef(rng));
    return m;
}

}  // namespace

TEST_CASE("energy at all-zeros is the offset") {
    std::mt19937_64 rng(5);
    const QuboModel m = random_model(rng, 6);
    CHECK(m.energy(std::vector<std::uint8_t>(6, 0)) == m.offset);
}

TEST_CASE("energy of a tiny hand model") {
    QuboModel m(2);
    m.add_linear(0, 1.0);
    m.add_linear(1, 2.0);
    m.add_quadratic(0, 1, -3.0);
    CHECK(m.energy({1, 1}) == 0.0);
    CHECK(m.energy({1, 0}) == 1.0);
    CHECK(m.energy({0, 1}) == 2.0);
}

TEST_CASE("energy matches the dense-matrix oracle") {
    std::mt19937_64 rng(42);
    const QuboModel m = random_model(rng, 10);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = qtrack::testing::random_assignment(rng, 10);
        CHECK(m.energy(a) == doctest::Approx(dense_energy(m, a)).epsilon(1e-12));
    }
}

TEST_CASE("energy rejects shape mismatch") {
    QuboModel m(3);
    CHECK_THROWS_AS(m.energy({1, 0}), ShapeError);
}

TEST_CASE("coupling keys are canonicalized and self-couplings fold to linear") {
    QuboModel a(4), b(4);
    a.add_quadratic(2, 1, 0.5);
    b.add_quadratic(1, 2, 0.5);
    a.add_quadratic(3, 3, -1.5);
    b.add_linear(3, -1.5);
    CHECK(a.quadratic == b.quadratic);
    CHECK(a.linear == b.linear);
}

TEST_CASE("add_squared_linear: cardinality-style term") {
    QuboModel m(3);
    std::vector<int> idx{0, 1, 2};
    std::vector<double> ones{1.0, 1.0, 1.0};
    m.add_squared_linear(idx, ones, 2.0, 1.0);
    CHECK(m.energy({1, 1, 0}) == 0.0);  // constraint satisfied
    CHECK(m.energy({0, 0, 0}) == 4.0);  // C^2
    CHECK(m.energy({1, 1, 1}) == 1.0);
}

TEST_CASE("add_squared_linear: budget term at exact weights") {
    // K=4 style coefficients 1/4, 2/4, 1/4 summing to 1.
    QuboModel m(3);
    std::vector<int> idx{0, 1, 2};
    std::vector<double> coeffs{0.25, 0.5, 0.25};
    m.add_squared_linear(idx, coeffs, 1.0, 3.0);
    CHECK(m.energy({1, 1, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(m.energy({0, 1, 0}) == doctest::Approx(3.0 * 0.25).epsilon(1e-15));
}

TEST_CASE("merge: identity and annihilation") {
    std::mt19937_64 rng(9);
    const QuboModel a = random_model(rng, 8);
    const QuboModel b = random_model(rng, 8);

    std::vector<std::pair<const QuboModel*, double>> identity{{&a, 1.0}};
    const QuboModel same = merge(identity);
    std::vector<std::pair<const QuboModel*, double>> annihilate{{&a, 0.0}, {&b, 1.0}};
    const QuboModel only_b = merge(annihilate);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = qtrack::testing::random_assignment(rng, 8);
        CHECK(same.energy(x) == doctest::Approx(a.energy(x)).epsilon(1e-12));
        CHECK(only_b.energy(x) == doctest::Approx(b.energy(x)).epsilon(1e-12));
    }
}

TEST_CASE("merge: weighted additivity on random assignments") {
    std::mt19937_64 rng(21);
    const QuboModel a = random_model(rng, 8);
    const QuboModel b = random_model(rng, 8);
    std::vector<std::pair<const QuboModel*, double>> terms{{&a, 0.7}, {&b, -1.3}};
    const QuboModel m = merge(terms);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = qtrack::testing::random_assignment(rng, 8);
        CHECK(m.energy(x) ==
              doctest::Approx(0.7 * a.energy(x) - 1.3 * b.energy(x)).epsilon(1e-12));
    }
}

TEST_CASE("merge rejects mismatched sizes") {
    const QuboModel a(3), b(4);
    std::vector<std::pair<const QuboModel*, double>> terms{{&a, 1.0}, {&b, 1.0}};
    CHECK_THROWS_AS(merge(terms), ShapeError);
}

TEST_CASE("dump emits header plus triples") {
    QuboModel m(2);
    m.offset = 0.5;
    m.add_linear(0, 1.0);
    m.add_quadratic(0, 1, -3.0);
    std::ostringstream os;
    m.dump(os);
    CHECK(os.str() == "2 0.5\n0 0 1\n0 1 -3\n");
}
