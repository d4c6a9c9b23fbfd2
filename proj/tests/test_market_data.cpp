#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "qtrack/market_data.hpp"

using namespace qtrack;

namespace {

const std::string kSmallCsv =
    "date,AAA,BBB\n"
    "2021-06-01,10,20\n"
    "2021-06-02,11,19\n"
    "2021-06-03,12,21\n";

}  // namespace

TEST_CASE("load_prices parses a 3-row 2-asset panel") {
    const PricePanel panel = parse_prices_csv(kSmallCsv, "INDEX");
    CHECK(panel.rows() == 3);
    CHECK(panel.n_assets() == 2);
    CHECK(panel.asset_ids == std::vector<std::string>{"AAA", "BBB"});
    CHECK(panel.prices(0, 0) == 10.0);
    CHECK(panel.prices(2, 1) == 21.0);
    CHECK_FALSE(panel.has_index());
}

TEST_CASE("load_prices splits out the index column") {
    const PricePanel panel = parse_prices_csv(
        "date,AAA,NDX\n2021-06-01,10,100\n2021-06-02,11,101\n", "NDX");
    CHECK(panel.n_assets() == 1);
    CHECK(panel.has_index());
    CHECK(panel.index_prices(1) == 101.0);
}

TEST_CASE("load_prices rejects bad input") {
    CHECK_THROWS_AS(parse_prices_csv("date,AAA\n2021-06-01,0\n", "INDEX"), ValidationError);
    CHECK_THROWS_AS(parse_prices_csv("date,AAA\n2021-06-01,-3\n", "INDEX"), ValidationError);
    CHECK_THROWS_AS(parse_prices_csv("date,AAA\n2021-06-01,\n", "INDEX"), ValidationError);
    CHECK_THROWS_AS(parse_prices_csv("date,AAA\n2021-06-01,abc\n", "INDEX"), ParseError);
    CHECK_THROWS_AS(parse_prices_csv("date,AAA\n2021-06-01,10,20\n", "INDEX"), ParseError);
    CHECK_THROWS_AS(
        parse_prices_csv("date,AAA\n2021-06-01,10\n2021-06-01,11\n", "INDEX"),
        ValidationError);
    CHECK_THROWS_AS(parse_prices_csv("date,AAA,AAA\n2021-06-01,10,11\n", "INDEX"),
                    ValidationError);
}

TEST_CASE("load_prices sorts shuffled dates to the same panel") {
    const std::string shuffled =
        "date,AAA,BBB\n"
        "2021-06-03,12,21\n"
        "2021-06-01,10,20\n"
        "2021-06-02,11,19\n";
    const PricePanel a = parse_prices_csv(kSmallCsv, "INDEX");
    const PricePanel b = parse_prices_csv(shuffled, "INDEX");
    CHECK(a.dates == b.dates);
    CHECK(a.prices == b.prices);
}

TEST_CASE("load_prices handles RFC-4180 quoting") {
    const PricePanel panel = parse_prices_csv(
        "date,\"TICK,ER\"\n\"2021-06-01\",10\n2021-06-02,11\n", "INDEX");
    CHECK(panel.asset_ids[0] == "TICK,ER");
    CHECK(panel.dates[0] == "2021-06-01");
}

TEST_CASE("to_returns computes simple returns") {
    const ReturnsPanel panel = to_returns(parse_prices_csv(kSmallCsv, "INDEX"));
    CHECK(panel.n_periods() == 2);
    CHECK(panel.returns(0, 0) == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(panel.returns(0, 1) == doctest::Approx(-0.05).epsilon(1e-12));
    CHECK(panel.dates == std::vector<std::string>{"2021-06-02", "2021-06-03"});
}

TEST_CASE("to_returns on constant prices is all zeros") {
    const ReturnsPanel panel = to_returns(
        parse_prices_csv("date,AAA\n2021-06-01,5\n2021-06-02,5\n2021-06-03,5\n", "INDEX"));
    CHECK(panel.returns.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("to_returns halving then recovering") {
    const ReturnsPanel panel = to_returns(
        parse_prices_csv("date,AAA\n2021-06-01,100\n2021-06-02,50\n2021-06-03,75\n", "INDEX"));
    CHECK(panel.returns(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(panel.returns(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("to_returns needs two rows") {
    CHECK_THROWS_AS(to_returns(parse_prices_csv("date,AAA\n2021-06-01,10\n", "INDEX")),
                    InsufficientDataError);
}

TEST_CASE("returns round-trip through cumulated prices") {
    std::mt19937_64 rng(7);
    const Eigen::MatrixXd r = qtrack::testing::random_returns(rng, 40, 3, 0.02);
    PricePanel prices;
    prices.asset_ids = {"A", "B", "C"};
    prices.prices.resize(41, 3);
    prices.prices.row(0).setConstant(100.0);
    for (Eigen::Index t = 0; t < 40; ++t)
        prices.prices.row(t + 1) =
            prices.prices.row(t).cwiseProduct((r.row(t).array() + 1.0).matrix());
    for (int t = 0; t <= 40; ++t) prices.dates.push_back("d" + std::to_string(1000 + t));
    const ReturnsPanel back = to_returns(prices);
    CHECK(((back.returns - r).cwiseAbs().array() /
           (r.cwiseAbs().array() + 1.0)).maxCoeff() < 1e-12);
}

TEST_CASE("covariances: perfectly correlated assets") {
    std::mt19937_64 rng(11);
    Eigen::MatrixXd r(20, 2);
    r.col(0) = qtrack::testing::random_returns(rng, 20, 1);
    r.col(1) = r.col(0);
    const auto panel = qtrack::testing::make_panel(r, r.col(0));
    const CovarianceSet cov = covariances(panel, 20);
    CHECK(cov.full(0, 1) == doctest::Approx(cov.full(0, 0)).epsilon(1e-12));
}

TEST_CASE("covariances: single asset variance matches two-pass oracle") {
    std::mt19937_64 rng(13);
    const Eigen::MatrixXd r = qtrack::testing::random_returns(rng, 25, 1);
    const auto panel = qtrack::testing::make_panel(r, r.col(0));
    const CovarianceSet cov = covariances(panel, 25);

    // Independent two-pass variance.
    double mean = 0.0;
    for (int t = 0; t < 25; ++t) mean += r(t, 0);
    mean /= 25.0;
    double ss = 0.0;
    for (int t = 0; t < 25; ++t) ss += (r(t, 0) - mean) * (r(t, 0) - mean);
    CHECK(cov.full(0, 0) == doctest::Approx(ss / 24.0).epsilon(1e-12));
}

TEST_CASE("covariances: window == T yields one rolling matrix equal to full") {
    std::mt19937_64 rng(17);
    const Eigen::MatrixXd r = qtrack::testing::random_returns(rng, 15, 3);
    const auto panel = qtrack::testing::make_panel(r, r.col(0));
    const CovarianceSet cov = covariances(panel, 15);
    REQUIRE(cov.rolling.size() == 1);
    CHECK(cov.rolling[0] == cov.full);  // bit-identical
}

TEST_CASE("covariances: symmetry is exact and eigenvalues are >= -1e-9") {
    std::mt19937_64 rng(19);
    const Eigen::MatrixXd r = qtrack::testing::random_returns(rng, 30, 4);
    const auto panel = qtrack::testing::make_panel(r, r.col(0));
    const CovarianceSet cov = covariances(panel, 10);
    CHECK(cov.rolling.size() == 21);
    for (const auto& m : cov.rolling) {
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("covariances: trailing-complete alignment reuses the first window") {
    std::mt19937_64 rng(23);
    const Eigen::MatrixXd r = qtrack::testing::random_returns(rng, 12, 2);
    const auto panel = qtrack::testing::make_panel(r, r.col(0));
    const CovarianceSet cov = covariances(panel, 5);
    CHECK(&cov.aligned(0) == &cov.rolling.front());
    CHECK(&cov.aligned(3) == &cov.rolling.front());
    CHECK(&cov.aligned(4) == &cov.rolling.front());
    CHECK(&cov.aligned(5) == &cov.rolling[1]);
    CHECK(&cov.aligned(11) == &cov.rolling.back());
}

TEST_CASE("covariances: window validation") {
    std::mt19937_64 rng(29);
    const Eigen::MatrixXd r = qtrack::testing::random_returns(rng, 5, 2);
    const auto panel = qtrack::testing::make_panel(r, r.col(0));
    CHECK_THROWS_AS(covariances(panel, 6), InsufficientDataError);
    CHECK_THROWS_AS(covariances(panel, 1), ValidationError);
}
