#include <doctest.h>

#include <cmath>

#include "wcs/errors.hpp"
#include "wcs/pid.hpp"
#include "wcs/plant.hpp"
#include "wcs/sim_time.hpp"

using namespace wcs;

namespace {

double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.m00), std::abs(m.m01)),
                    std::max(std::abs(m.m10), std::abs(m.m11)));
}

// Independent matrix-exponential oracle: scaling and squaring on a plain
// Taylor series. Also integrates Bd = (sum_k A^k dt^(k+1)/(k+1)!) B term by
// term, which avoids relying on A being invertible.
struct ExpmOracle {
    Mat2 Ad;
    Vec2 Bd;
};

ExpmOracle expm_series(const Mat2& A, double dt) {
    int squarings = 0;
    double scale = dt;
    while (max_abs(A) * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    const Mat2 As = A * scale;
    Mat2 expm = Mat2::identity();
    Mat2 integ = Mat2::identity() * scale;  // integral_0^scale exp(A s) ds
    Mat2 term = Mat2::identity();
    double factorial = 1.0;
    for (int k = 1; k <= 30; ++k) {
        term = term * As;
        factorial *= k;
        expm = expm + term * (1.0 / factorial);
        integ = integ + term * (scale / factorial / (k + 1.0));
    }
    // Doubling: exp(2t) = exp(t)^2; integ(2t) = integ(t) + exp(t) integ(t).
    for (int s = 0; s < squarings; ++s) {
        integ = integ + expm * integ;
        expm = expm * expm;
    }
    const Vec2 B{1.0, 1.0};
    return {expm, integ * B};
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("DC gain equals 2029.826 / (26.29 * 2.296)") {
    const PlantModel plant = dc_motor_plant();
    const double want = 2029.826 / (26.29 * 2.296);
    CHECK(std::abs(plant.dc_gain() - want) < 1e-9);
    CHECK(want == doctest::Approx(33.63).epsilon(1e-4));
}

TEST_CASE("ZOH discretization matches the series oracle to 1e-12") {
    const PlantModel plant = dc_motor_plant();
    for (double dt : {1e-3, 0.1e-3, 2e-3, 15e-3, 50e-3, 1.0}) {
        const ZohDiscretization d = zoh_discretize(plant, dt);
        const ExpmOracle o = expm_series(plant.A, dt);
        CHECK(rel_err(d.Ad.m00, o.Ad.m00) < 1e-12);
        CHECK(rel_err(d.Ad.m01, o.Ad.m01) < 1e-12);
        CHECK(rel_err(d.Ad.m10, o.Ad.m10) < 1e-12);
        CHECK(rel_err(d.Ad.m11, o.Ad.m11) < 1e-12);
        CHECK(rel_err(d.Bd.a, o.Bd.a) < 1e-12);
        CHECK(rel_err(d.Bd.b, o.Bd.b) < 1e-12);
    }
}

TEST_CASE("ZOH works for non-diagonal realizations too") {
    // Same eigenvalues, similarity-transformed so A has off-diagonal terms.
    PlantModel plant;
    plant.A = {-20.0, 6.0, 4.0, -8.0};  // eigenvalues real and distinct
    plant.B = {1.0, 1.0};
    plant.c0 = 1.0;
    plant.c1 = 0.0;
    const ZohDiscretization d = zoh_discretize(plant, 3e-3);
    const ExpmOracle o = expm_series(plant.A, 3e-3);
    CHECK(rel_err(d.Ad.m00, o.Ad.m00) < 1e-12);
    CHECK(rel_err(d.Ad.m01, o.Ad.m01) < 1e-12);
    CHECK(rel_err(d.Ad.m10, o.Ad.m10) < 1e-12);
    CHECK(rel_err(d.Ad.m11, o.Ad.m11) < 1e-12);
    CHECK(rel_err(d.Bd.a, o.Bd.a) < 1e-12);
    CHECK(rel_err(d.Bd.b, o.Bd.b) < 1e-12);
}

TEST_CASE("dt -> 0 limit: Ad -> I, Bd -> 0") {
    const PlantModel plant = dc_motor_plant();
    const ZohDiscretization d = zoh_discretize(plant, 1e-9);
    CHECK(std::abs(d.Ad.m00 - 1.0) < 1e-6);
    CHECK(std::abs(d.Ad.m11 - 1.0) < 1e-6);
    CHECK(std::abs(d.Ad.m01) < 1e-12);
    CHECK(std::abs(d.Ad.m10) < 1e-12);
    CHECK(std::abs(d.Bd.a) < 1e-6);
    CHECK(std::abs(d.Bd.b) < 1e-6);
}

TEST_CASE("nonpositive dt is a fault") {
    const PlantModel plant = dc_motor_plant();
    CHECK_THROWS_AS(zoh_discretize(plant, 0.0), SimFault);
    CHECK_THROWS_AS(zoh_discretize(plant, -1e-3), SimFault);
}

TEST_CASE("constant u=1 drives y to the DC gain") {
    PlantSim sim(dc_motor_plant());
    sim.advance(10 * kMicrosPerSecond, 1.0);  // ~23 time constants
    CHECK(std::abs(sim.y() - 33.63) < 0.01);
}

TEST_CASE("zero input, zero state is an equilibrium") {
    PlantSim sim(dc_motor_plant());
    sim.advance(kMicrosPerSecond, 0.0);
    CHECK(sim.y() == 0.0);
    CHECK(sim.state().a == 0.0);
    CHECK(sim.state().b == 0.0);
}

TEST_CASE("semigroup property: two half-steps equal one full step") {
    PlantSim once(dc_motor_plant());
    PlantSim twice(dc_motor_plant());
    const double u = 0.7;
    once.advance(30 * kMicrosPerMilli, u);
    twice.advance(15 * kMicrosPerMilli, u);
    twice.advance(30 * kMicrosPerMilli, u);
    CHECK(std::abs(once.y() - twice.y()) < 1e-10);
    CHECK(std::abs(once.state().a - twice.state().a) < 1e-10);
    CHECK(std::abs(once.state().b - twice.state().b) < 1e-10);
}

TEST_CASE("trajectory matches the closed-form LTI solution") {
    // x(t) = exp(At) x0 + integral, evaluated directly by the oracle in one
    // shot vs the sub-stepped PlantSim path.
    const PlantModel plant = dc_motor_plant();
    PlantSim sim(plant);
    sim.set_state({0.02, -0.01});
    const double u = 0.5;
    sim.advance(123 * kMicrosPerMilli, u);

    const ExpmOracle o = expm_series(plant.A, 0.123);
    const Vec2 x0{0.02, -0.01};
    const Vec2 xa = o.Ad * x0;
    const Vec2 want{xa.a + o.Bd.a * u, xa.b + o.Bd.b * u};
    CHECK(std::abs(sim.state().a - want.a) < 1e-10);
    CHECK(std::abs(sim.state().b - want.b) < 1e-10);
}

TEST_CASE("time reversal is a fault") {
    PlantSim sim(dc_motor_plant());
    sim.advance(1000, 0.0);
    CHECK_THROWS_AS(sim.advance(999, 0.0), SimFault);
}

TEST_CASE("ideal channel, h=15 ms: y settles to a unit step") {
    // Zero-delay loop closed directly (no network): sample, compute,
    // actuate at the same instant.
    PlantSim plant(dc_motor_plant());
    PidDiscrete pid = PidDiscrete::design(PidContinuous{}, 0.015);
    double u = 0.0;
    const SimTime h = 15 * kMicrosPerMilli;
    for (SimTime t = 0; t <= 3 * kMicrosPerSecond; t += h) {
        plant.advance(t, u);
        u = pid.compute(1.0, plant.y());
    }
    CHECK(std::abs(plant.y() - 1.0) < 0.02);
}
