#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "wkd/dtm.hpp"
#include "wkd/io.hpp"
#include "wkd/rng.hpp"
#include "wkd/transport.hpp"

using namespace wkd;

namespace {

const PointCloud kLineCloud(2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});

}  // namespace

TEST_CASE("k-distance basics") {
    const NeighborIndex index(kLineCloud);
    const std::vector<double> origin = {0.0, 0.0};

    const KDistance kd2(index, 2);
    CHECK(kd2.eval(origin) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(kd2.m0() == doctest::Approx(2.0 / 3.0));

    const KDistance kd1(index, 1);
    CHECK(kd1.eval(origin) == 0.0);

    CHECK_THROWS_WITH_AS(KDistance(index, 4), "k exceeds cloud size", std::runtime_error);
    CHECK_THROWS_AS(KDistance(index, 0), std::invalid_argument);
}

TEST_CASE("k = N reduces to the single all-points barycenter") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + rng.uniform_int(3);
        const int n = 1 + rng.uniform_int(12);
        const auto cloud = oracles::random_cloud(rng, n, d);
        const NeighborIndex index(cloud);
        const KDistance kd(index, n);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        const auto site = barycenter_site(cloud, all);
        for (int t = 0; t < 10; ++t) {
            const auto q = oracles::random_point(rng, d, 3.0);
            const double via_site = std::sqrt(dist2(q, site.center) - site.weight);
            CHECK(kd.eval(q) == doctest::Approx(via_site).epsilon(1e-10));
        }
    }
}

TEST_CASE("distance to a discrete measure") {
    SUBCASE("dirac") {
        const std::vector<double> p = {2.0, -1.0};
        const auto mu = DiscreteMeasure::dirac(p);
        const std::vector<double> q = {5.0, 3.0};
        CHECK(eval_dtm(mu, 0.3, q) == doctest::Approx(5.0));
        CHECK(eval_dtm(mu, 1.0, q) == doctest::Approx(5.0));
    }
    SUBCASE("partial mass on the marginal atom") {
        DiscreteMeasure mu;
        mu.support = PointCloud(1, {0.0, 1.0});
        mu.masses = {0.5, 0.5};
        mu.denominator = 2;
        const std::vector<double> q = {0.0};
        CHECK(eval_dtm(mu, 0.75, q) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
    }
    SUBCASE("mass parameter out of range") {
        const auto mu = DiscreteMeasure::uniform_on(kLineCloud);
        const std::vector<double> q = {0.0, 0.0};
        CHECK_THROWS_AS(eval_dtm(mu, 0.0, q), std::invalid_argument);
        CHECK_THROWS_AS(eval_dtm(mu, 1.5, q), std::invalid_argument);
    }
    SUBCASE("uniform measure with m0 = k/N equals the k-distance") {
        Rng rng(13);
        for (int trial = 0; trial < 15; ++trial) {
            const int d = 1 + rng.uniform_int(3);
            const int n = 2 + rng.uniform_int(40);
            const auto cloud = oracles::random_cloud(rng, n, d);
            const NeighborIndex index(cloud);
            const auto mu = DiscreteMeasure::uniform_on(cloud);
            const int k = 1 + rng.uniform_int(n);
            const KDistance kd(index, k);
            for (int t = 0; t < 10; ++t) {
                const auto q = oracles::random_point(rng, d, 2.0);
                CHECK(eval_dtm(mu, static_cast<double>(k) / n, q) ==
                      doctest::Approx(kd.eval(q)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("witnessed sites") {
    SUBCASE("k = 1 keeps the input points with zero weight") {
        const auto w = witnessed_sites(kLineCloud, 1);
        REQUIRE(w.sites().size() == 3);
        for (int i = 0; i < 3; ++i) {
            const auto site = w.sites().site(i);
            CHECK(site.weight == 0.0);
            CHECK(dist2(site.center, kLineCloud.point(i)) == 0.0);
        }
    }
    SUBCASE("hand-checked k = 2 sites") {
        const auto w = witnessed_sites(kLineCloud, 2);
        REQUIRE(w.sites().size() == 3);
        const auto s0 = w.sites().site(0);
        const auto s1 = w.sites().site(1);
        const auto s2 = w.sites().site(2);
        CHECK(s0.center[0] == doctest::Approx(0.5));
        CHECK(s0.weight == doctest::Approx(-0.25));
        CHECK(s1.center[0] == doctest::Approx(0.5));
        CHECK(s1.weight == doctest::Approx(-0.25));
        CHECK(s2.center[0] == doctest::Approx(2.0));
        CHECK(s2.weight == doctest::Approx(-1.0));
    }
    SUBCASE("coincident points count with multiplicity") {
        const PointCloud dup(2, {0.0, 0.0, 0.0, 0.0, 1.0, 0.0});
        const auto w = witnessed_sites(dup, 2);
        REQUIRE(w.sites().size() == 3);
        CHECK(w.sites().site(0).weight == 0.0);  // two copies of the origin
        CHECK(w.sites().site(1).weight == 0.0);
        CHECK(w.sites().site(2).center[0] == doctest::Approx(0.5));
        CHECK(w.sites().site(2).weight == doctest::Approx(-0.25));
    }
    SUBCASE("k exceeding N is rejected") {
        CHECK_THROWS_WITH_AS(witnessed_sites(kLineCloud, 4), "k exceeds cloud size",
                             std::runtime_error);
    }
    SUBCASE("every witnessed site appears in the brute-force set") {
        Rng rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 3 + rng.uniform_int(8);
            const int k = 1 + rng.uniform_int(n);
            const auto cloud = oracles::random_cloud(rng, n, 2);
            const auto witnessed = witnessed_sites(cloud, k);
            const auto brute = brute_force_sites(cloud, k);
            for (int i = 0; i < witnessed.sites().size(); ++i) {
                const auto ws = witnessed.sites().site(i);
                double best = std::numeric_limits<double>::infinity();
                for (int j = 0; j < brute.size(); ++j) {
                    const auto bs = brute.site(j);
                    best = std::min(best, dist(ws.center, bs.center) +
                                              std::abs(ws.weight - bs.weight));
                }
                CHECK(best <= 1e-12);
            }
        }
    }
}

TEST_CASE("brute-force barycenter oracle") {
    CHECK(brute_force_sites(kLineCloud, 2).size() == 3);
    Rng rng(23);
    const auto six = oracles::random_cloud(rng, 6, 2);
    CHECK(brute_force_sites(six, 3).size() == 20);

    const auto fifty = oracles::random_cloud(rng, 50, 2);
    CHECK_THROWS_WITH_AS(brute_force_sites(fifty, 25), "instance too large for oracle",
                         guard_error);
}

TEST_CASE("power-distance identity: brute-force sites reproduce the k-distance") {
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + rng.uniform_int(3);
        const int n = 1 + rng.uniform_int(12);
        const auto cloud = oracles::random_cloud(rng, n, d);
        const NeighborIndex index(cloud);
        for (int k = 1; k <= n; ++k) {
            const auto brute = brute_force_sites(cloud, k);
            const KDistance kd(index, k);
            for (int t = 0; t < 15; ++t) {
                const bool far = t % 5 == 4;
                auto q = oracles::random_point(rng, d, far ? 20.0 : 1.5);
                REQUIRE(std::abs(brute.eval(q) - kd.eval(q)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("sandwich bound for the witnessed k-distance") {
    const double factor = 2.0 + std::sqrt(2.0);
    Rng rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const int dims[] = {1, 2, 3, 5};
        const int d = dims[rng.uniform_int(4)];
        const int n = 2 + rng.uniform_int(499);
        const int k = 1 + rng.uniform_int(std::min(n, 20));
        const auto cloud = oracles::random_cloud(rng, n, d);
        const NeighborIndex index(cloud);
        const KDistance kd(index, k);
        const WitnessedKDistance w(index, k);
        for (int t = 0; t < 40; ++t) {
            const bool far = t % 4 == 3;
            const auto q = oracles::random_point(rng, d, far ? 20.0 : 1.5);
            const double a = kd.eval(q);
            const double b = w.eval(q);
            REQUIRE(a <= b + 1e-9);
            REQUIRE(b <= factor * a + 1e-9);
        }
    }
}

TEST_CASE("distance-to-measure stability under W2 perturbations") {
    Rng rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        DiscreteMeasure mu, nu;
        for (DiscreteMeasure* m : {&mu, &nu}) {
            const int atoms = 1 + rng.uniform_int(8);
            std::vector<double> coords;
            std::vector<double> numer;
            double den = 0.0;
            for (int i = 0; i < atoms; ++i) {
                coords.push_back(rng.uniform());
                coords.push_back(rng.uniform());
                numer.push_back(1 + rng.uniform_int(9));
                den += numer.back();
            }
            m->support = PointCloud(2, std::move(coords));
            for (double x : numer) m->masses.push_back(x / den);
            m->denominator = static_cast<int64_t>(den);
        }
        const double w2 = w2_exact(mu, nu).distance;
        for (double m0 : {0.25, 0.5, 0.9}) {
            const double bound = w2 / std::sqrt(m0) + 1e-9;
            for (int t = 0; t < 50; ++t) {
                const std::vector<double> q = {rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
                REQUIRE(std::abs(eval_dtm(mu, m0, q) - eval_dtm(nu, m0, q)) <= bound);
            }
        }
    }
}

TEST_CASE("site-set serialization round trip") {
    Rng rng(43);
    const auto cloud = oracles::random_cloud(rng, 20, 3);
    const auto w = witnessed_sites(cloud, 4);
    const std::string csv = sites_to_csv(w.sites(), 4, cloud.size(), "witnessed");
    const PowerDistance restored = sites_from_csv(csv);
    REQUIRE(restored.size() == w.sites().size());
    for (int t = 0; t < 25; ++t) {
        const auto q = oracles::random_point(rng, 3, 2.0);
        CHECK(restored.eval(q) == w.sites().eval(q));  // %.17g round-trips doubles
    }
}
