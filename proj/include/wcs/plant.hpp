#pragma once

#include <array>
#include <functional>
#include <unordered_map>

#include "wcs/sim_time.hpp"

namespace wcs {

// Minimal fixed-size linear algebra for the 2x2 plant; no external matrix
// library is warranted at this size.
struct Vec2 {
    double a = 0, b = 0;
};

struct Mat2 {
    double m00 = 0, m01 = 0, m10 = 0, m11 = 0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    Mat2 operator*(const Mat2& o) const;
    Vec2 operator*(const Vec2& v) const;
    Mat2 operator+(const Mat2& o) const;
    Mat2 operator*(double s) const;
    double det() const { return m00 * m11 - m01 * m10; }
    Mat2 inverse() const;  // throws SimFault when singular
};

// Continuous LTI state-space x' = Ax + Bu, y = Cx.
struct PlantModel {
    Mat2 A;
    Vec2 B;
    double c0 = 0, c1 = 0;  // C row vector

    double output(const Vec2& x) const { return c0 * x.a + c1 * x.b; }
    double dc_gain() const;  // C (-A)^-1 B
};

// The DC-motor process 2029.826 / ((s + 26.29)(s + 2.296)), realized in
// modal coordinates.
PlantModel dc_motor_plant();

// Exact zero-order-hold discretization: Ad = exp(A dt),
// Bd = integral_0^dt exp(A s) ds B. Closed form via eigendecomposition;
// requires distinct real eigenvalues and invertible A (both hold for the
// motor plant). dt in seconds, dt > 0.
struct ZohDiscretization {
    Mat2 Ad;
    Vec2 Bd;
};
ZohDiscretization zoh_discretize(const PlantModel& plant, double dt_seconds);

// Plant trajectory integrator with a per-dt discretization cache. Advances
// on a sub-grid of at most 1 ms so the IAE integral is insensitive to the
// sampling period; the sink receives each trapezoid sub-interval.
class PlantSim {
  public:
    // sink(y_begin, y_end, dt_seconds) per sub-step; may be empty.
    using SubStepSink = std::function<void(double, double, double)>;

    explicit PlantSim(PlantModel model) : model_(std::move(model)) {}

    const PlantModel& model() const { return model_; }
    double y() const { return model_.output(x_); }
    const Vec2& state() const { return x_; }
    SimTime last_update() const { return last_update_; }

    void set_state(const Vec2& x) { x_ = x; }

    // Advances to `until` under constant input u (ZOH). Throws SimFault on
    // time reversal.
    void advance(SimTime until, double u, const SubStepSink& sink = {});

  private:
    const ZohDiscretization& step_for(SimTime dt_us);

    PlantModel model_;
    Vec2 x_{};
    SimTime last_update_ = 0;
    std::unordered_map<SimTime, ZohDiscretization> cache_;
};

}  // namespace wcs
