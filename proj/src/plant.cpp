#include "wcs/plant.hpp"

#include <cmath>

#include "wcs/errors.hpp"

namespace wcs {

Mat2 Mat2::operator*(const Mat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
}

Vec2 Mat2::operator*(const Vec2& v) const {
    return {m00 * v.a + m01 * v.b, m10 * v.a + m11 * v.b};
}

Mat2 Mat2::operator+(const Mat2& o) const {
    return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
}

Mat2 Mat2::operator*(double s) const {
    return {m00 * s, m01 * s, m10 * s, m11 * s};
}

Mat2 Mat2::inverse() const {
    const double d = det();
    if (d == 0.0) throw SimFault("Mat2::inverse: singular matrix");
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
}

double PlantModel::dc_gain() const {
    const Mat2 neg_a{-A.m00, -A.m01, -A.m10, -A.m11};
    const Vec2 v = neg_a.inverse() * B;
    return c0 * v.a + c1 * v.b;
}

PlantModel dc_motor_plant() {
    // k / ((s+p1)(s+p2)) in modal form: A = diag(-p1, -p2), B = (1, 1)^T,
    // C = k/(p2-p1) * (1, -1).
    constexpr double k = 2029.826;
    constexpr double p1 = 26.29;
    constexpr double p2 = 2.296;
    PlantModel m;
    m.A = {-p1, 0.0, 0.0, -p2};
    m.B = {1.0, 1.0};
    m.c0 = k / (p2 - p1);
    m.c1 = -k / (p2 - p1);
    return m;
}

ZohDiscretization zoh_discretize(const PlantModel& plant, double dt) {
    if (!(dt > 0.0)) throw SimFault("zoh_discretize: dt must be positive");
    const Mat2& A = plant.A;
    const double tr = A.m00 + A.m11;
    const double disc = tr * tr - 4.0 * A.det();
    if (!(disc > 0.0))
        throw SimFault("zoh_discretize: eigenvalues not real and distinct");
    const double root = std::sqrt(disc);
    const double l1 = 0.5 * (tr + root);
    const double l2 = 0.5 * (tr - root);

    // Eigenvectors; pick the better-conditioned candidate, falling back to
    // unit vectors when A is already diagonal.
    auto eigvec = [&](double l) -> Vec2 {
        const Vec2 c1{A.m01, l - A.m00};
        const Vec2 c2{l - A.m11, A.m10};
        const double n1 = c1.a * c1.a + c1.b * c1.b;
        const double n2 = c2.a * c2.a + c2.b * c2.b;
        if (n1 == 0.0 && n2 == 0.0)
            return std::abs(l - A.m00) <= std::abs(l - A.m11) ? Vec2{1.0, 0.0}
                                                              : Vec2{0.0, 1.0};
        return n1 >= n2 ? c1 : c2;
    };
    const Vec2 v1 = eigvec(l1);
    const Vec2 v2 = eigvec(l2);

    const Mat2 V{v1.a, v2.a, v1.b, v2.b};
    const Mat2 Vinv = V.inverse();
    const Mat2 expL{std::exp(l1 * dt), 0.0, 0.0, std::exp(l2 * dt)};

    ZohDiscretization d;
    d.Ad = V * expL * Vinv;
    // Bd = A^-1 (Ad - I) B; A is invertible for the plants handled here.
    const Mat2 AdMinusI = d.Ad + Mat2::identity() * -1.0;
    d.Bd = A.inverse() * (AdMinusI * plant.B);
    return d;
}

const ZohDiscretization& PlantSim::step_for(SimTime dt_us) {
    auto it = cache_.find(dt_us);
    if (it == cache_.end())
        it = cache_.emplace(dt_us, zoh_discretize(model_, to_seconds(dt_us)))
                 .first;
    return it->second;
}

void PlantSim::advance(SimTime until, double u, const SubStepSink& sink) {
    if (until < last_update_) throw SimFault("PlantSim::advance: time reversal");
    while (last_update_ < until) {
        const SimTime dt_us =
            std::min<SimTime>(kMicrosPerMilli, until - last_update_);
        const ZohDiscretization& d = step_for(dt_us);
        const double y0 = y();
        const Vec2 next = d.Ad * x_;
        x_ = {next.a + d.Bd.a * u, next.b + d.Bd.b * u};
        last_update_ += dt_us;
        if (sink) sink(y0, y(), to_seconds(dt_us));
    }
}

}  // namespace wcs
