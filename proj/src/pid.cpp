#include "wcs/pid.hpp"

#include "wcs/errors.hpp"

namespace wcs {

PidDiscrete PidDiscrete::design(const PidContinuous& c, double h,
                                PidMethod method, double carried_integral) {
    if (!(h > 0.0)) throw SimFault("PidDiscrete::design: h must be positive");
    PidDiscrete d;
    d.kp_ = c.kp;
    d.ki_ = c.ki;
    d.ki_step_ = c.ki * h;
    d.kd_step_ = c.kd / h;
    d.h_ = h;
    d.method_ = method;
    d.integral_ = carried_integral;
    return d;
}

double PidDiscrete::compute(double ref, double y) {
    const double e = ref - y;
    if (method_ == PidMethod::ForwardEuler) {
        integral_ += ki_step_ * e;
    } else {
        integral_ += ki_ * h_ * 0.5 * (e + prev_error_);
    }
    const double u = kp_ * e + integral_ + kd_step_ * (e - prev_error_);
    prev_error_ = e;
    return u;
}

}  // namespace wcs
