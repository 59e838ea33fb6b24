#include "percept/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "percept/errors.hpp"

namespace percept {

namespace {

bool all_finite(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void validate_arena(const Arena& arena) {
  if (!(arena.side > 0.0) || !std::isfinite(arena.side)) {
    throw invalid_input("arena side must be positive and finite");
  }
}

void validate_model(const SensorModel& model) {
  if (model.count < 1) throw invalid_input("sensor count must be >= 1");
  if (model.tolerance < 0.0) throw invalid_input("sensor tolerance must be >= 0");
  if (model.mount_radius < 0.0) throw invalid_input("mount radius must be >= 0");
  const auto& table = model.lookup_table;
  if (table.size() < 2) throw invalid_input("lookup table needs at least two rows");
  if (table.front().distance != 0.0) throw invalid_input("lookup table must start at distance 0");
  if (table.back().distance != model.max_range) {
    throw invalid_input("lookup table must end at max_range");
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].distance > table[i - 1].distance)) {
      throw invalid_input("lookup table distances must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<LookupRow> default_lookup_table(double max_range) {
  std::vector<LookupRow> table;
  constexpr int kRows = 11;
  table.reserve(kRows);
  for (int i = 0; i < kRows; ++i) {
    const double d = max_range * i / (kRows - 1);
    const double frac = 1.0 - d / max_range;
    table.push_back({d, 1000.0 * frac * frac});
  }
  return table;
}

SensorModel default_sensor_model(double body_radius) {
  SensorModel model;
  model.mount_radius = body_radius;
  model.lookup_table = default_lookup_table(model.max_range);
  return model;
}

bool pose_legal(const Pose& pose, const Arena& arena, double body_radius) {
  const double limit = arena.half() - body_radius;
  return std::abs(pose.x) <= limit && std::abs(pose.y) <= limit;
}

Pose integrate_pose(const Pose& pose, double v_left, double v_right, double dt,
                    const RobotParams& params, const Arena& arena) {
  if (!all_finite({pose.x, pose.y, pose.theta, v_left, v_right, dt})) {
    throw invalid_input("integrate_pose: non-finite input");
  }
  if (!(dt > 0.0)) throw invalid_input("integrate_pose: dt must be positive");
  validate_arena(arena);
  const double limit = arena.half() - params.body_radius;
  if (limit < 0.0) throw invalid_input("integrate_pose: body does not fit in arena");

  const double v = (v_left + v_right) / 2.0;
  const double omega = (v_right - v_left) / params.wheel_separation;

  Pose next;
  if (std::abs(omega) < 1e-9) {
    next.x = pose.x + v * std::cos(pose.theta) * dt;
    next.y = pose.y + v * std::sin(pose.theta) * dt;
  } else {
    const double theta_new = pose.theta + omega * dt;
    next.x = pose.x + (v / omega) * (std::sin(theta_new) - std::sin(pose.theta));
    next.y = pose.y + (v / omega) * (std::cos(pose.theta) - std::cos(theta_new));
  }
  next.theta = wrap_angle(pose.theta + omega * dt);

  // Collision handling: project the body center to the nearest legal point.
  next.x = std::clamp(next.x, -limit, limit);
  next.y = std::clamp(next.y, -limit, limit);
  return next;
}

double cast_ray(const Vec2& origin, double angle, const Arena& arena) {
  if (!all_finite({origin.x, origin.y, angle})) {
    throw invalid_input("cast_ray: non-finite input");
  }
  validate_arena(arena);
  const double h = arena.half();
  constexpr double kEps = 1e-9;
  if (std::abs(origin.x) > h + kEps || std::abs(origin.y) > h + kEps) {
    throw invalid_input("cast_ray: origin outside arena");
  }
  const double ox = std::clamp(origin.x, -h, h);
  const double oy = std::clamp(origin.y, -h, h);
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);

  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double t, double other, double bound) {
    if (t >= 0.0 && std::abs(other) <= bound + kEps) best = std::min(best, t);
  };
  if (dx > 0.0) consider((h - ox) / dx, oy + (h - ox) / dx * dy, h);
  if (dx < 0.0) consider((-h - ox) / dx, oy + (-h - ox) / dx * dy, h);
  if (dy > 0.0) consider((h - oy) / dy, ox + (h - oy) / dy * dx, h);
  if (dy < 0.0) consider((-h - oy) / dy, ox + (-h - oy) / dy * dx, h);

  return std::max(best, 0.0);
}

double response_curve(double dist, const SensorModel& model) {
  if (!std::isfinite(dist) || dist < 0.0) {
    throw invalid_input("response_curve: distance must be finite and >= 0");
  }
  validate_model(model);
  const auto& table = model.lookup_table;
  if (dist >= table.back().distance) return table.back().value;

  auto hi = std::upper_bound(table.begin(), table.end(), dist,
                             [](double d, const LookupRow& row) { return d < row.distance; });
  auto lo = hi - 1;
  const double span = hi->distance - lo->distance;
  const double frac = (dist - lo->distance) / span;
  return lo->value + frac * (hi->value - lo->value);
}

SensorFrame read_sensors(const Pose& pose, const Arena& arena, const SensorModel& model,
                         bool noise_enabled, Rng& rng) {
  validate_model(model);
  SensorFrame frame;
  frame.values.reserve(model.count);
  for (int i = 0; i < model.count; ++i) {
    const double heading = pose.theta + model.mount_angle(i);
    const Vec2 origin{pose.x + model.mount_radius * std::cos(heading),
                      pose.y + model.mount_radius * std::sin(heading)};
    double value = response_curve(cast_ray(origin, heading, arena), model);
    if (noise_enabled) {
      const double u = rng.uniform(-model.tolerance, model.tolerance);
      value = std::max(0.0, value * (1.0 + u));
    }
    frame.values.push_back(value);
  }
  frame.yaw = pose.theta;
  return frame;
}

SensorFrame read_sensors(const Pose& pose, const Arena& arena, const SensorModel& model) {
  Rng unused(0);
  return read_sensors(pose, arena, model, false, unused);
}

}  // namespace percept
