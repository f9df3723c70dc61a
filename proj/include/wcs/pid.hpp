#pragma once

namespace wcs {

// Continuous-time PID gains of the case-study controller.
struct PidContinuous {
    double kp = 0.1701;
    double ki = 0.378;
    double kd = 0.0;
};

enum class PidMethod { ForwardEuler, Tustin };

// Sampled PID, regenerated whenever the sampling period changes. The
// integral accumulator is carried across period changes to avoid bumps.
class PidDiscrete {
  public:
    PidDiscrete() = default;

    // h in seconds, must lie in [h_min, h_max] (enforced by the caller's
    // scheduler clamp; here only h > 0 is required).
    static PidDiscrete design(const PidContinuous& c, double h,
                              PidMethod method = PidMethod::ForwardEuler,
                              double carried_integral = 0.0);

    // Accumulate-then-sum: the integral term already includes this step's
    // error when the output is formed.
    double compute(double ref, double y);

    double h() const { return h_; }
    double kp() const { return kp_; }
    double ki_step() const { return ki_step_; }
    double kd_step() const { return kd_step_; }
    double integral() const { return integral_; }
    PidMethod method() const { return method_; }

  private:
    double kp_ = 0.0;
    double ki_step_ = 0.0;  // per-sample integral gain
    double kd_step_ = 0.0;
    double h_ = 0.0;
    double ki_ = 0.0;
    PidMethod method_ = PidMethod::ForwardEuler;
    double integral_ = 0.0;
    double prev_error_ = 0.0;
};

}  // namespace wcs
