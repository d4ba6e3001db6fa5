#include "rqt/geometry.hpp"

#include <stdexcept>

namespace rqt {

double center_distance(const Anchor3D& a, const Anchor3D& b) {
    return (a.center - b.center).norm();
}

Eigen::Vector2d yaw_to_unit(double yaw) {
    return {std::sin(yaw), std::cos(yaw)};
}

Anchor3D transform_anchor(const Anchor3D& a, const EgoPose& from, const EgoPose& to, double dt) {
    if (dt < 0.0) throw std::invalid_argument("transform_anchor: dt must be >= 0");
    if (!from.orthonormal() || !to.orthonormal())
        throw std::invalid_argument("transform_anchor: pose rotation not orthonormal");

    const Eigen::Vector3d v_global = from.rotation * a.velocity;
    const Eigen::Vector3d c_global = from.rotation * a.center + from.translation + v_global * dt;

    Anchor3D out;
    out.center = to.rotation.transpose() * (c_global - to.translation);
    out.dims = a.dims;
    out.velocity = to.rotation.transpose() * v_global;

    // Heading carried as a unit vector through the relative rotation.
    const Eigen::Matrix3d rel = to.rotation.transpose() * from.rotation;
    const Eigen::Vector3d h = rel * Eigen::Vector3d(std::cos(a.yaw), std::sin(a.yaw), 0.0);
    out.yaw = wrap_angle(std::atan2(h.y(), h.x()));
    return out;
}

}  // namespace rqt
