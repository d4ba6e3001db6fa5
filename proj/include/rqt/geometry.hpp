#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace rqt {

constexpr double kPi = 3.14159265358979323846;

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double yaw) {
    double y = std::fmod(yaw + kPi, 2.0 * kPi);
    if (y <= 0.0) y += 2.0 * kPi;
    return y - kPi;
}

// 3D box/state: center, extents (w, l, h), heading, velocity.
struct Anchor3D {
    Eigen::Vector3d center{0.0, 0.0, 0.0};
    Eigen::Vector3d dims{1.0, 1.0, 1.0};
    double yaw = 0.0;
    Eigen::Vector3d velocity{0.0, 0.0, 0.0};

    bool valid() const {
        return dims.minCoeff() > 0.0 && yaw > -kPi - 1e-12 && yaw <= kPi + 1e-12 &&
               center.allFinite() && velocity.allFinite();
    }
};

// SE(3) pose of the ego vehicle at a given time.
struct EgoPose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation{0.0, 0.0, 0.0};
    double timestamp = 0.0;

    bool orthonormal(double tol = 1e-9) const {
        return (rotation * rotation.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
               std::abs(rotation.determinant() - 1.0) <= tol;
    }
};

double center_distance(const Anchor3D& a, const Anchor3D& b);

// (sin yaw, cos yaw) heading encoding.
Eigen::Vector2d yaw_to_unit(double yaw);

// Constant-velocity advance by dt in the global frame, then re-expression of
// center/yaw/velocity in the destination ego frame. Dims are untouched.
Anchor3D transform_anchor(const Anchor3D& a, const EgoPose& from, const EgoPose& to, double dt);

}  // namespace rqt
