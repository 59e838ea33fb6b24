#pragma once

#include <utility>
#include <vector>

#include "percept/rng.hpp"
#include "percept/types.hpp"

namespace percept {

/// Planar pose of the robot body center. theta is kept in (-pi, pi].
struct Pose {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
};

/// Axis-aligned square world centered at the origin.
struct Arena {
  double side{10.0};

  double half() const { return side / 2.0; }
};

/// Physical parameters of the differential-drive body. Wheel commands are
/// ground-contact linear speeds in m/s, so no wheel radius appears here.
struct RobotParams {
  double body_radius{0.25};
  double wheel_separation{0.4};
  double max_speed{2.0};
  double dt{0.05};
};

/// Distance-to-value lookup row.
struct LookupRow {
  double distance{0.0};
  double value{0.0};
};

/// Ring of range sensors mounted on the body perimeter, pointing radially
/// outward. The response is a piecewise-linear lookup table over distance;
/// tolerance bounds the multiplicative read noise.
struct SensorModel {
  int count{16};
  double mount_radius{0.25};
  std::vector<LookupRow> lookup_table;
  double tolerance{0.1};
  double max_range{15.0};

  /// Mount angle of sensor i in the body frame.
  double mount_angle(int i) const { return 2.0 * kPi * i / count; }
};

/// One full sensor readout plus the compass value.
struct SensorFrame {
  std::vector<double> values;
  double yaw{0.0};
};

/// Quadratic-decay table v(d) = 1000 * (1 - d/max_range)^2 sampled at 11
/// equispaced distances from 0 to max_range.
std::vector<LookupRow> default_lookup_table(double max_range = 15.0);

SensorModel default_sensor_model(double body_radius = 0.25);

/// True when the body center keeps at least body_radius clearance from every
/// wall.
bool pose_legal(const Pose& pose, const Arena& arena, double body_radius);

/// Advances the pose by one constant-command step using the exact unicycle
/// arc: v = (v_left + v_right)/2, omega = (v_right - v_left)/wheel_separation.
/// |omega| < 1e-9 falls back to the straight-line limit. The result is
/// clamped to legal wall clearance (heading untouched) and theta-wrapped.
Pose integrate_pose(const Pose& pose, double v_left, double v_right, double dt,
                    const RobotParams& params, const Arena& arena);

/// Distance from origin to the nearest wall along the ray. Origins on the
/// boundary are accepted (distance can be 0); origins outside the arena are
/// invalid input.
double cast_ray(const Vec2& origin, double angle, const Arena& arena);

/// Piecewise-linear interpolation of the lookup table; distances beyond the
/// last row clamp to the last row's value.
double response_curve(double dist, const SensorModel& model);

/// Casts one ray per sensor from the body perimeter and maps distances
/// through the response curve. With noise enabled each value is scaled by
/// (1 + u), u ~ Uniform(-tolerance, +tolerance), drawn in sensor-index order.
/// yaw is reported noiseless.
SensorFrame read_sensors(const Pose& pose, const Arena& arena, const SensorModel& model,
                         bool noise_enabled, Rng& rng);

/// Noiseless readout.
SensorFrame read_sensors(const Pose& pose, const Arena& arena, const SensorModel& model);

}  // namespace percept
