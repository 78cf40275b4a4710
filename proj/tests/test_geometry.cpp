#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "wkd/geometry.hpp"
#include "wkd/kdtree.hpp"
#include "wkd/power.hpp"
#include "wkd/rng.hpp"

using namespace wkd;

TEST_CASE("point cloud validation") {
    CHECK_THROWS_WITH_AS(PointCloud(2, {}), "empty input", std::runtime_error);
    CHECK_THROWS_AS(PointCloud(2, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud(2, {1.0, std::nan("")}), std::runtime_error);
    const PointCloud cloud(2, {0.0, 0.0, 3.0, 4.0});
    CHECK(cloud.size() == 2);
    CHECK(cloud.diameter_exact() == doctest::Approx(5.0));
}

TEST_CASE("index answers the nearer point") {
    const PointCloud cloud(2, {0.0, 0.0, 3.0, 0.0});
    const NeighborIndex index(cloud);
    const std::vector<double> q = {1.0, 0.0};
    CHECK(index.query(q, 1) == std::vector<int>{0});
}

TEST_CASE("query clamps k to the cloud size") {
    const PointCloud cloud(2, {5.0, 7.0});
    const NeighborIndex index(cloud);
    const std::vector<double> q = {100.0, -3.0};
    CHECK(index.query(q, 5) == std::vector<int>{0});
}

TEST_CASE("knn basics and errors") {
    const PointCloud cloud(2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
    const NeighborIndex index(cloud);
    const std::vector<double> origin = {0.0, 0.0};
    CHECK(knn(index, origin, 2) == std::vector<int>{0, 1});
    CHECK_THROWS_WITH_AS(knn(index, origin, 4), "k exceeds cloud size", std::runtime_error);
    CHECK_THROWS_AS(knn(index, origin, 0), std::invalid_argument);

    const PointCloud pair(2, {-1.0, 0.0, 1.0, 0.0});
    const NeighborIndex pair_index(pair);
    CHECK(knn(pair_index, origin, 1) == std::vector<int>{0});  // tie -> smaller index
}

TEST_CASE("knn matches the exhaustive scan exactly") {
    Rng rng(20240601);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + rng.uniform_int(4);
        const int n = 1 + rng.uniform_int(trial < 30 ? 300 : 2000);
        auto cloud = oracles::random_cloud(rng, n, d);
        // Duplicate some points so distance ties actually occur.
        if (n > 4) {
            std::vector<double> coords = cloud.coords();
            for (int c = 0; c < n / 4; ++c) {
                const int src = rng.uniform_int(n);
                const int dst = rng.uniform_int(n);
                for (int t = 0; t < d; ++t) coords[dst * d + t] = coords[src * d + t];
            }
            cloud = PointCloud(d, std::move(coords));
        }
        const NeighborIndex index(cloud);
        for (int t = 0; t < 25; ++t) {
            const auto q = oracles::random_point(rng, d, 1.5);
            const int k = 1 + rng.uniform_int(std::min(n, 40));
            const auto got = index.query(q, k);
            const auto want = oracles::exhaustive_knn(cloud, q, k);
            REQUIRE(got == want);  // identical indices, hence identical distances
        }
    }
}

TEST_CASE("1000 random queries agree with the oracle") {
    Rng rng(7);
    const auto cloud = oracles::random_cloud(rng, 100, 2);
    const NeighborIndex index(cloud);
    for (int t = 0; t < 1000; ++t) {
        const auto q = oracles::random_point(rng, 2, 2.0);
        const int k = 1 + rng.uniform_int(10);
        REQUIRE(index.query(q, k) == oracles::exhaustive_knn(cloud, q, k));
    }
}

TEST_CASE("barycenter sites") {
    const PointCloud cloud(2, {0.0, 0.0, 2.0, 0.0, 1.0, 0.0, 3.0, 0.0, 5.0, 7.0});

    SUBCASE("two points") {
        const auto site = barycenter_site(cloud, std::vector<int>{0, 1});
        CHECK(site.center[0] == doctest::Approx(1.0));
        CHECK(site.center[1] == doctest::Approx(0.0));
        CHECK(site.weight == doctest::Approx(-1.0));
    }
    SUBCASE("single point has zero spread") {
        const auto site = barycenter_site(cloud, std::vector<int>{4});
        CHECK(site.center[0] == 5.0);
        CHECK(site.center[1] == 7.0);
        CHECK(site.weight == 0.0);
    }
    SUBCASE("three collinear points") {
        const auto site = barycenter_site(cloud, std::vector<int>{0, 2, 3});
        CHECK(site.center[0] == doctest::Approx(4.0 / 3.0));
        CHECK(site.weight == doctest::Approx(-14.0 / 9.0));
    }
    SUBCASE("duplicate index rejected") {
        CHECK_THROWS_AS(barycenter_site(cloud, std::vector<int>{1, 1}), std::invalid_argument);
        CHECK_THROWS_AS(barycenter_site(cloud, std::vector<int>{}), std::invalid_argument);
    }
}

TEST_CASE("barycenter weight identity") {
    // ||x - c||^2 - w equals the mean squared distance to the index set.
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + rng.uniform_int(4);
        const int n = 2 + rng.uniform_int(30);
        const auto cloud = oracles::random_cloud(rng, n, d);
        const int k = 1 + rng.uniform_int(n);
        std::vector<int> indices(n);
        std::iota(indices.begin(), indices.end(), 0);
        for (int i = 0; i < k; ++i) std::swap(indices[i], indices[i + rng.uniform_int(n - i)]);
        indices.resize(k);
        const auto site = barycenter_site(cloud, indices);

        const auto x = oracles::random_point(rng, d, 3.0);
        double mean_sq = 0.0;
        for (int i : indices) mean_sq += dist2(x, cloud.point(i));
        mean_sq /= k;
        const double via_site = dist2(x, site.center) - site.weight;
        CHECK(via_site == doctest::Approx(mean_sq).epsilon(1e-10));
    }
}

TEST_CASE("power distance evaluation") {
    SUBCASE("single site") {
        PowerDistance pd({WeightedSite{{1.0, 0.0}, -1.0}});
        const std::vector<double> q = {1.0, 0.0};
        CHECK(pd.eval(q) == doctest::Approx(1.0));
    }
    SUBCASE("weight zero reduces to euclidean distance") {
        PowerDistance pd({WeightedSite{{0.0, 0.0}, 0.0}});
        const std::vector<double> q = {0.0, 2.0};
        CHECK(pd.eval(q) == doctest::Approx(2.0));
    }
    SUBCASE("min over sites matches per-site evaluation") {
        PowerDistance pd({WeightedSite{{0.0, 0.0}, -0.5}, WeightedSite{{3.0, 0.0}, -2.0}});
        Rng rng(5);
        for (int t = 0; t < 50; ++t) {
            const auto q = oracles::random_point(rng, 2, 5.0);
            const double a = dist2(q, std::vector<double>{0.0, 0.0}) + 0.5;
            const double b = dist2(q, std::vector<double>{3.0, 0.0}) + 2.0;
            CHECK(pd.eval_squared(q) == std::min(a, b));
        }
    }
    SUBCASE("positive weights rejected") {
        CHECK_THROWS_AS(PowerDistance({WeightedSite{{0.0}, 0.5}}), std::invalid_argument);
        CHECK_THROWS_AS(PowerDistance({}), std::invalid_argument);
    }
}

TEST_CASE("site tree pruning is exact") {
    Rng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + rng.uniform_int(3);
        const int n = 50 + rng.uniform_int(200);
        std::vector<WeightedSite> sites(n);
        for (auto& s : sites) {
            s.center = oracles::random_point(rng, d, 2.0);
            s.weight = -rng.uniform();
        }
        const PowerDistance pd(sites);
        for (int t = 0; t < 40; ++t) {
            const auto q = oracles::random_point(rng, d, 4.0);
            double want = std::numeric_limits<double>::infinity();
            for (const auto& s : sites) {
                want = std::min(want, dist2(q, s.center) - s.weight);
            }
            REQUIRE(pd.eval_squared(q) == want);
        }
    }
}

TEST_CASE("adding a site never increases the power distance") {
    Rng rng(4242);
    std::vector<WeightedSite> sites(40);
    for (auto& s : sites) {
        s.center = oracles::random_point(rng, 2, 2.0);
        s.weight = -rng.uniform();
    }
    const PowerDistance base(sites);
    for (int t = 0; t < 20; ++t) {
        auto extended = sites;
        extended.push_back(WeightedSite{oracles::random_point(rng, 2, 2.0), -rng.uniform()});
        const PowerDistance bigger(extended);
        for (int u = 0; u < 20; ++u) {
            const auto q = oracles::random_point(rng, 2, 4.0);
            REQUIRE(bigger.eval_squared(q) <= base.eval_squared(q));
        }
    }
}

TEST_CASE("power distance roots are 1-Lipschitz") {
    Rng rng(2718);
    std::vector<WeightedSite> sites(60);
    for (auto& s : sites) {
        s.center = oracles::random_point(rng, 3, 2.0);
        s.weight = -2.0 * rng.uniform();
    }
    const PowerDistance pd(sites);
    for (int t = 0; t < 400; ++t) {
        const auto x = oracles::random_point(rng, 3, 5.0);
        const auto y = oracles::random_point(rng, 3, 5.0);
        CHECK(std::abs(pd.eval(x) - pd.eval(y)) <= dist(x, y) + 1e-9);
    }
}
