#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "wkd/dtm.hpp"
#include "wkd/rng.hpp"
#include "wkd/transport.hpp"

using namespace wkd;

namespace {

DiscreteMeasure random_rational_measure(Rng& rng, int max_atoms, int max_numer = 9) {
    const int atoms = 1 + rng.uniform_int(max_atoms);
    std::vector<double> coords;
    std::vector<int64_t> numer;
    int64_t den = 0;
    for (int i = 0; i < atoms; ++i) {
        coords.push_back(rng.uniform());
        coords.push_back(rng.uniform());
        numer.push_back(1 + rng.uniform_int(max_numer));
        den += numer.back();
    }
    DiscreteMeasure mu;
    mu.support = PointCloud(2, std::move(coords));
    for (int64_t x : numer) {
        mu.masses.push_back(static_cast<double>(x) / static_cast<double>(den));
    }
    mu.denominator = den;
    return mu;
}

// Expands a rational measure into `scale` unit atoms (each of mass 1/scale),
// repeating support points by their integer mass.
PointCloud expand_to_units(const DiscreteMeasure& mu, int64_t scale) {
    std::vector<double> coords;
    for (size_t i = 0; i < mu.masses.size(); ++i) {
        const int64_t units = std::llround(mu.masses[i] * static_cast<double>(scale));
        for (int64_t u = 0; u < units; ++u) {
            auto p = mu.support.point(static_cast<int>(i));
            coords.insert(coords.end(), p.begin(), p.end());
        }
    }
    return PointCloud(mu.support.dim(), std::move(coords));
}

void check_plan(const W2Result& result, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> row(mu.masses.size(), 0.0);
    std::vector<double> col(nu.masses.size(), 0.0);
    for (const auto& e : result.plan.entries) {
        REQUIRE(e.mass > 0.0);
        row[e.src] += e.mass;
        col[e.tgt] += e.mass;
    }
    for (size_t i = 0; i < row.size(); ++i) REQUIRE(row[i] == doctest::Approx(mu.masses[i]).epsilon(1e-9));
    for (size_t j = 0; j < col.size(); ++j) REQUIRE(col[j] == doctest::Approx(nu.masses[j]).epsilon(1e-9));
    const double sq = result.plan.squared_cost(mu, nu);
    REQUIRE(result.distance * result.distance == doctest::Approx(sq).epsilon(1e-9));
}

}  // namespace

TEST_CASE("single dirac pair") {
    const std::vector<double> a = {0.0, 0.0};
    const std::vector<double> b = {3.0, 4.0};
    const auto result = w2_exact(DiscreteMeasure::dirac(a), DiscreteMeasure::dirac(b));
    CHECK(result.distance == doctest::Approx(5.0));
    REQUIRE(result.plan.entries.size() == 1);
    CHECK(result.plan.entries[0].mass == doctest::Approx(1.0));
}

TEST_CASE("two-point uniform measures") {
    const auto mu = DiscreteMeasure::uniform_on(PointCloud(2, {0.0, 0.0, 1.0, 0.0}));
    const auto nu = DiscreteMeasure::uniform_on(PointCloud(2, {0.0, 0.0, 0.0, 1.0}));
    CHECK(w2_exact(mu, nu).distance == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical measures transport for free") {
    Rng rng(3);
    const auto mu = random_rational_measure(rng, 6);
    CHECK(w2_exact(mu, mu).distance == doctest::Approx(0.0));
}

TEST_CASE("input validation") {
    const auto mu = DiscreteMeasure::uniform_on(PointCloud(2, {0.0, 0.0}));
    DiscreteMeasure heavy = mu;
    heavy.masses = {2.0};
    heavy.denominator = 1;
    CHECK_THROWS_WITH_AS(w2_exact(mu, heavy), "mass mismatch between measures",
                         std::runtime_error);

    DiscreteMeasure no_den = mu;
    no_den.denominator.reset();
    CHECK_THROWS_AS(w2_exact(no_den, mu), std::runtime_error);

    DiscreteMeasure irrational = mu;
    irrational.support = PointCloud(2, {0.0, 0.0, 1.0, 1.0});
    irrational.masses = {1.0 / std::sqrt(2.0), 1.0 - 1.0 / std::sqrt(2.0)};
    irrational.denominator = 10;
    CHECK_THROWS_AS(w2_exact(irrational, irrational), std::runtime_error);

    PointCloud big(1, std::vector<double>(4097, 0.0));
    CHECK_THROWS_AS(w2_exact(DiscreteMeasure::uniform_on(big), DiscreteMeasure::uniform_on(big)),
                    guard_error);
}

TEST_CASE("assignment solver basics") {
    const PointCloud a(1, {0.0, 1.0});
    SUBCASE("identical clouds") {
        CHECK(w2_assignment(a, a).distance == doctest::Approx(0.0));
    }
    SUBCASE("shifted line pair") {
        const PointCloud b(1, {2.0, 3.0});
        CHECK(w2_assignment(a, b).distance == doctest::Approx(2.0));
    }
    SUBCASE("size mismatch") {
        const PointCloud c(1, {0.0, 1.0, 2.0});
        CHECK_THROWS_AS(w2_assignment(a, c), std::runtime_error);
    }
}

TEST_CASE("the two exact solvers agree on uniform clouds") {
    Rng rng(101);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 50;
        const int d = 1 + rng.uniform_int(3);
        const auto a = oracles::random_cloud(rng, n, d);
        const auto b = oracles::random_cloud(rng, n, d);
        const double via_simplex =
            w2_exact(DiscreteMeasure::uniform_on(a), DiscreteMeasure::uniform_on(b)).distance;
        const double via_assignment = w2_assignment(a, b).distance;
        REQUIRE(std::abs(via_simplex - via_assignment) <= 1e-7);
    }
}

TEST_CASE("rational measures agree with their unit-atom expansions") {
    Rng rng(103);
    for (int trial = 0; trial < 8; ++trial) {
        const auto mu = random_rational_measure(rng, 5, 4);
        const auto nu = random_rational_measure(rng, 5, 4);
        const int64_t scale = std::lcm(*mu.denominator, *nu.denominator);
        if (scale > 120) continue;  // keep the oracle assignment small
        const auto exact = w2_exact(mu, nu);
        const auto expanded = w2_assignment(expand_to_units(mu, scale), expand_to_units(nu, scale));
        REQUIRE(std::abs(exact.distance - expanded.distance) <= 1e-9);
        check_plan(exact, mu, nu);
    }
}

TEST_CASE("metric and invariance properties") {
    Rng rng(107);
    SUBCASE("triangle inequality and symmetry") {
        for (int trial = 0; trial < 10; ++trial) {
            const auto mu = random_rational_measure(rng, 6);
            const auto nu = random_rational_measure(rng, 6);
            const auto rho = random_rational_measure(rng, 6);
            const double ab = w2_exact(mu, nu).distance;
            const double ba = w2_exact(nu, mu).distance;
            const double ac = w2_exact(mu, rho).distance;
            const double cb = w2_exact(rho, nu).distance;
            REQUIRE(std::abs(ab - ba) <= 1e-9);
            REQUIRE(ab <= ac + cb + 1e-7);
        }
    }
    SUBCASE("translation leaves W2 unchanged; scaling is linear") {
        for (int trial = 0; trial < 8; ++trial) {
            const auto mu = random_rational_measure(rng, 6);
            const auto nu = random_rational_measure(rng, 6);
            const double base = w2_exact(mu, nu).distance;

            const double tx = rng.uniform(-5.0, 5.0);
            const double ty = rng.uniform(-5.0, 5.0);
            const double lambda = 0.1 + 3.0 * rng.uniform();
            auto transform = [&](const DiscreteMeasure& m, bool scale) {
                DiscreteMeasure out = m;
                std::vector<double> coords = m.support.coords();
                for (size_t i = 0; i < coords.size(); i += 2) {
                    if (scale) {
                        coords[i] *= lambda;
                        coords[i + 1] *= lambda;
                    } else {
                        coords[i] += tx;
                        coords[i + 1] += ty;
                    }
                }
                out.support = PointCloud(2, std::move(coords));
                return out;
            };
            const double translated =
                w2_exact(transform(mu, false), transform(nu, false)).distance;
            const double scaled = w2_exact(transform(mu, true), transform(nu, true)).distance;
            REQUIRE(translated == doctest::Approx(base).epsilon(1e-9));
            REQUIRE(scaled == doctest::Approx(lambda * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("plan feasibility on random instances") {
    Rng rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mu = random_rational_measure(rng, 8);
        const auto nu = random_rational_measure(rng, 8);
        check_plan(w2_exact(mu, nu), mu, nu);
    }
}

TEST_CASE("empirical measure against a reference") {
    SUBCASE("matching support is free") {
        const PointCloud p(2, {0.0, 0.0, 1.0, 0.0});
        CHECK(w2_empirical_to_reference(p, DiscreteMeasure::uniform_on(p)) ==
              doctest::Approx(0.0));
    }
    SUBCASE("two points against their midpoint dirac") {
        const PointCloud p(1, {-1.0, 1.0});
        const std::vector<double> origin = {0.0};
        CHECK(w2_empirical_to_reference(p, DiscreteMeasure::dirac(origin)) ==
              doctest::Approx(1.0));
    }
    SUBCASE("larger samples from the reference get closer (median over trials)") {
        // 16-atom uniform reference on a circle; medians over 9 trials must
        // decrease as N grows.
        std::vector<double> ref_coords;
        for (int j = 0; j < 16; ++j) {
            const double a = 2.0 * M_PI * j / 16;
            ref_coords.push_back(std::cos(a));
            ref_coords.push_back(std::sin(a));
        }
        const auto ref = DiscreteMeasure::uniform_on(PointCloud(2, std::move(ref_coords)));
        std::vector<double> medians;
        for (int n : {16, 64, 256}) {
            std::vector<double> dists;
            for (int trial = 0; trial < 9; ++trial) {
                Rng rng(900 + trial);
                std::vector<double> coords;
                for (int i = 0; i < n; ++i) {
                    const int pick = rng.uniform_int(16);
                    auto p = ref.support.point(pick);
                    coords.insert(coords.end(), p.begin(), p.end());
                }
                dists.push_back(
                    w2_empirical_to_reference(PointCloud(2, std::move(coords)), ref));
            }
            std::sort(dists.begin(), dists.end());
            medians.push_back(dists[dists.size() / 2]);
        }
        CHECK(medians[1] < medians[0]);
        CHECK(medians[2] < medians[1]);
    }
}

TEST_CASE("degenerate instances with massive duplication") {
    // Duplicate support points produce tied costs and degenerate pivots;
    // the solver must still terminate at the exact optimum.
    SUBCASE("two fat atoms onto one") {
        std::vector<double> a_coords, b_coords;
        for (int i = 0; i < 60; ++i) {
            a_coords.insert(a_coords.end(), {0.0, 0.0});
            a_coords.insert(a_coords.end(), {2.0, 0.0});
            b_coords.insert(b_coords.end(), {1.0, 0.0});
            b_coords.insert(b_coords.end(), {1.0, 0.0});
        }
        const auto mu = DiscreteMeasure::uniform_on(PointCloud(2, std::move(a_coords)));
        const auto nu = DiscreteMeasure::uniform_on(PointCloud(2, std::move(b_coords)));
        const auto result = w2_exact(mu, nu);
        CHECK(result.distance == doctest::Approx(1.0).epsilon(1e-12));
        check_plan(result, mu, nu);
    }
    SUBCASE("random clouds with many coincident points") {
        Rng rng(127);
        for (int trial = 0; trial < 6; ++trial) {
            const int n = 40;
            std::vector<double> a(2 * n), b(2 * n);
            for (int i = 0; i < n; ++i) {
                // Snap to a coarse lattice so duplicates are common.
                a[2 * i] = rng.uniform_int(4) * 0.25;
                a[2 * i + 1] = rng.uniform_int(4) * 0.25;
                b[2 * i] = rng.uniform_int(4) * 0.25;
                b[2 * i + 1] = rng.uniform_int(4) * 0.25;
            }
            const PointCloud ca(2, std::move(a));
            const PointCloud cb(2, std::move(b));
            const double via_simplex =
                w2_exact(DiscreteMeasure::uniform_on(ca), DiscreteMeasure::uniform_on(cb))
                    .distance;
            const double via_assignment = w2_assignment(ca, cb).distance;
            REQUIRE(std::abs(via_simplex - via_assignment) <= 1e-9);
        }
    }
}

TEST_CASE("moderately sized exact solve stays consistent") {
    // 300 uniform atoms vs 257 rational atoms: exercises the simplex beyond
    // toy sizes and cross-checks the distance against the plan cost.
    Rng rng(113);
    const auto a = DiscreteMeasure::uniform_on(oracles::random_cloud(rng, 300, 2));
    const auto b = DiscreteMeasure::uniform_on(oracles::random_cloud(rng, 257, 2));
    const auto result = w2_exact(a, b);
    check_plan(result, a, b);
    CHECK(result.distance > 0.0);
}
