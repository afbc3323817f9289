#include "simbiped/physics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "simbiped/errors.hpp"

namespace simbiped::physics {

namespace {

constexpr Vec2 kNormal{0.0, 1.0};
constexpr Vec2 kTangent{1.0, 0.0};

Vec2 corner_local(const Vec2& half, int corner) {
  switch (corner) {
    case 0:
      return {-half.x, -half.z};
    case 1:
      return {half.x, -half.z};
    case 2:
      return {half.x, half.z};
    default:
      return {-half.x, half.z};
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double mix_friction(double a, double b) { return std::sqrt(a * b); }

void WorldConfig::validate() const {
  if (!(dt > 0.0)) throw ParameterError("world dt must be > 0");
  if (substeps < 1 || velocity_iterations < 1 || position_iterations < 1) {
    throw ParameterError("substeps and solver iteration counts must be >= 1");
  }
  if (!(ground_friction >= 0.0)) throw ParameterError("ground friction must be >= 0");
  if (!(baumgarte > 0.0 && baumgarte <= 1.0)) {
    throw ParameterError("baumgarte factor must be in (0, 1]");
  }
}

World::World(WorldConfig config) : config_(config) { config_.validate(); }

int World::add_body(const BodyDef& def) {
  Body b;
  b.name = def.name;
  b.pose = def.pose;
  b.velocity = def.velocity;
  b.half_extents = def.half_extents;
  b.friction = def.friction;
  b.is_static = def.is_static;
  b.collides_with_ground = def.collides_with_ground;
  b.mass = def.mass;
  b.inertia = def.inertia > 0.0
                  ? def.inertia
                  : def.mass *
                        (4.0 * def.half_extents.x * def.half_extents.x +
                         4.0 * def.half_extents.z * def.half_extents.z) /
                        12.0;
  if (!b.is_static) {
    if (!(b.mass > 0.0) || !(b.inertia > 0.0)) {
      throw ParameterError("body '" + def.name + "' needs mass > 0 and inertia > 0");
    }
    b.inv_mass = 1.0 / b.mass;
    b.inv_inertia = 1.0 / b.inertia;
  } else {
    b.velocity = {};
  }
  bodies_.push_back(std::move(b));
  return static_cast<int>(bodies_.size()) - 1;
}

int World::add_joint(const JointDef& def) {
  const int n = body_count();
  if (def.parent < 0 || def.parent >= n || def.child < 0 || def.child >= n ||
      def.parent == def.child) {
    throw LookupError("joint '" + def.name + "' references unknown bodies");
  }
  if (!(def.torque_limit >= 0.0)) {
    throw ParameterError("joint '" + def.name + "' torque limit must be >= 0");
  }
  if (def.limit_enabled && def.lower > def.upper) {
    throw ParameterError("joint '" + def.name + "' has lower > upper");
  }
  joints_.push_back(def);
  joint_states_.emplace_back();
  return static_cast<int>(joints_.size()) - 1;
}

const Body& World::body(int id) const {
  if (id < 0 || id >= body_count()) throw LookupError("unknown body id " + std::to_string(id));
  return bodies_[static_cast<std::size_t>(id)];
}

Body& World::mutable_body(int id) {
  if (id < 0 || id >= body_count()) throw LookupError("unknown body id " + std::to_string(id));
  return bodies_[static_cast<std::size_t>(id)];
}

const JointDef& World::joint(int id) const {
  if (id < 0 || id >= joint_count()) throw LookupError("unknown joint id " + std::to_string(id));
  return joints_[static_cast<std::size_t>(id)];
}

JointDef& World::mutable_joint(int id) {
  if (id < 0 || id >= joint_count()) throw LookupError("unknown joint id " + std::to_string(id));
  return joints_[static_cast<std::size_t>(id)];
}

int World::find_body(const std::string& name) const {
  for (int i = 0; i < body_count(); ++i) {
    if (bodies_[static_cast<std::size_t>(i)].name == name) return i;
  }
  throw LookupError("unknown body '" + name + "'");
}

int World::find_joint(const std::string& name) const {
  for (int i = 0; i < joint_count(); ++i) {
    if (joints_[static_cast<std::size_t>(i)].name == name) return i;
  }
  throw LookupError("unknown joint '" + name + "'");
}

double World::joint_angle(const JointDef& j) const {
  return bodies_[static_cast<std::size_t>(j.child)].pose.angle -
         bodies_[static_cast<std::size_t>(j.parent)].pose.angle + j.angle_offset;
}

JointReadout World::joint_readout(int joint_id) const {
  const JointDef& j = joint(joint_id);
  const Body& p = bodies_[static_cast<std::size_t>(j.parent)];
  const Body& c = bodies_[static_cast<std::size_t>(j.child)];
  return {joint_angle(j), c.velocity.angular - p.velocity.angular};
}

double World::applied_torque(int joint_id) const {
  joint(joint_id);
  return joint_states_[static_cast<std::size_t>(joint_id)].applied_torque;
}

Vec2 World::linear_momentum() const {
  Vec2 p;
  for (const Body& b : bodies_) {
    if (!b.is_static) p += b.mass * b.velocity.linear;
  }
  return p;
}

void World::step(std::span<const double> joint_torques, double dt) {
  if (!(dt > 0.0)) throw ParameterError("step dt must be > 0");
  for (double t : joint_torques) {
    if (!std::isfinite(t)) throw ParameterError("joint torque command is not finite");
  }

  const int n = config_.substeps;
  const double h = dt / n;
  std::map<std::pair<int, int>, std::pair<double, double>> step_impulse;
  std::vector<double> step_torque(joints_.size(), 0.0);
  for (int sub = 0; sub < n; ++sub) {
    for (Body& b : bodies_) {
      if (!b.is_static) b.velocity.linear.z -= config_.gravity * h;
    }
    collect_contacts(h);
    init_joint_solves(joint_torques, h);
    warm_start();
    for (int i = 0; i < config_.velocity_iterations; ++i) solve_velocities(h);
    integrate_positions(h);
    for (int i = 0; i < config_.position_iterations; ++i) solve_positions();
    store_impulses(h);
    for (const ContactPoint& cp : contacts_) {
      auto& acc = step_impulse[{cp.body, cp.corner}];
      acc.first += cp.normal_impulse;
      acc.second += cp.tangent_impulse;
    }
    for (std::size_t i = 0; i < joints_.size(); ++i) {
      step_torque[i] += joint_states_[i].applied_torque / n;
    }
  }
  // Report impulses and torques over the whole step.
  for (ContactPoint& cp : contacts_) {
    const auto& acc = step_impulse[{cp.body, cp.corner}];
    cp.normal_impulse = acc.first;
    cp.tangent_impulse = acc.second;
  }
  for (std::size_t i = 0; i < joints_.size(); ++i) joint_states_[i].applied_torque = step_torque[i];

  time_ += dt;
  ++steps_;
  check_stability();
}

void World::collect_contacts(double dt) {
  manifolds_.clear();
  for (int bi = 0; bi < body_count(); ++bi) {
    const Body& b = bodies_[static_cast<std::size_t>(bi)];
    if (b.is_static || !b.collides_with_ground) continue;

    std::array<std::pair<double, int>, 4> candidates{};
    int n = 0;
    for (int c = 0; c < 4; ++c) {
      const Vec2 p = b.world_point(corner_local(b.half_extents, c));
      const double approach = std::max(0.0, -b.point_velocity(p).z) * dt;
      if (p.z < config_.contact_margin + approach) candidates[n++] = {p.z, c};
    }
    if (n == 0) continue;
    std::sort(candidates.begin(), candidates.begin() + n);

    Manifold m;
    m.body = bi;
    m.count = std::min(n, 2);
    const double friction = mix_friction(b.friction, config_.ground_friction);
    for (int k = 0; k < m.count; ++k) {
      ContactPoint& cp = m.points[k];
      cp.body = bi;
      cp.corner = candidates[static_cast<std::size_t>(k)].second;
      cp.point = b.world_point(corner_local(b.half_extents, cp.corner));
      cp.separation = cp.point.z;
      cp.friction = friction;
      if (auto it = impulse_cache_.find({bi, cp.corner}); it != impulse_cache_.end()) {
        cp.normal_impulse = it->second.first;
        cp.tangent_impulse = it->second.second;
      }
      const Vec2 r = cp.point - b.pose.position;
      m.r[k] = r;
      const double rn = cross(r, kNormal);
      const double rt = cross(r, kTangent);
      m.normal_mass[k] = 1.0 / (b.inv_mass + b.inv_inertia * rn * rn);
      m.tangent_mass[k] = 1.0 / (b.inv_mass + b.inv_inertia * rt * rt);
      // Speculative: a gap may close within this step but not overshoot.
      m.velocity_bias[k] = cp.separation > 0.0 ? -cp.separation / dt : 0.0;
    }
    if (m.count == 2) {
      const double rn1 = cross(m.r[0], kNormal);
      const double rn2 = cross(m.r[1], kNormal);
      m.k11 = b.inv_mass + b.inv_inertia * rn1 * rn1;
      m.k22 = b.inv_mass + b.inv_inertia * rn2 * rn2;
      m.k12 = b.inv_mass + b.inv_inertia * rn1 * rn2;
      const double det = m.k11 * m.k22 - m.k12 * m.k12;
      // Ill-conditioned pairs fall back to point-by-point solving.
      if (m.k11 * m.k11 < 1000.0 * det) {
        m.block = true;
        m.inv_k11 = m.k22 / det;
        m.inv_k22 = m.k11 / det;
        m.inv_k12 = -m.k12 / det;
      }
    }
    manifolds_.push_back(m);
  }
}

void World::init_joint_solves(std::span<const double> torques, double dt) {
  joint_solves_.resize(joints_.size());
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const JointDef& j = joints_[i];
    const Body& a = bodies_[static_cast<std::size_t>(j.parent)];
    const Body& b = bodies_[static_cast<std::size_t>(j.child)];
    JointSolve& s = joint_solves_[i];
    JointState& st = joint_states_[i];
    s.r_parent = rotate(j.anchor_parent, a.pose.angle);
    s.r_child = rotate(j.anchor_child, b.pose.angle);
    const double ma = a.inv_mass, mb = b.inv_mass;
    const double ia = a.inv_inertia, ib = b.inv_inertia;
    s.k11 = ma + mb + ia * s.r_parent.z * s.r_parent.z + ib * s.r_child.z * s.r_child.z;
    s.k12 = -ia * s.r_parent.x * s.r_parent.z - ib * s.r_child.x * s.r_child.z;
    s.k22 = ma + mb + ia * s.r_parent.x * s.r_parent.x + ib * s.r_child.x * s.r_child.x;
    s.axial_mass = ia + ib > 0.0 ? 1.0 / (ia + ib) : 0.0;

    const double cmd = i < torques.size() ? torques[i] : 0.0;
    const double u = std::clamp(cmd, -j.torque_limit, j.torque_limit);
    s.max_motor_impulse = std::abs(u) * dt;
    s.motor_speed = 0.0;
    s.velocity_motor = false;
    if (j.speed_limit > 0.0 && config_.motor_mode == MotorMode::kVelocityTarget) {
      s.velocity_motor = true;
      s.motor_speed = sign(u) * j.speed_limit;
      st.motor_impulse = std::clamp(st.motor_impulse, -s.max_motor_impulse,
                                    s.max_motor_impulse);
    } else {
      const double w = b.velocity.angular - a.velocity.angular;
      const bool past_limit = j.speed_limit > 0.0 && std::abs(w) > j.speed_limit;
      st.motor_impulse = past_limit && sign(u) == sign(w) ? 0.0 : u * dt;
    }
    if (!j.limit_enabled) {
      st.lower_impulse = 0.0;
      st.upper_impulse = 0.0;
    }
  }
}

void World::warm_start() {
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const JointDef& j = joints_[i];
    const JointSolve& s = joint_solves_[i];
    const JointState& st = joint_states_[i];
    Body& a = bodies_[static_cast<std::size_t>(j.parent)];
    Body& b = bodies_[static_cast<std::size_t>(j.child)];
    const Vec2 p = st.point_impulse;
    const double axial = st.motor_impulse + st.lower_impulse - st.upper_impulse;
    a.velocity.linear -= a.inv_mass * p;
    a.velocity.angular -= a.inv_inertia * (cross(s.r_parent, p) + axial);
    b.velocity.linear += b.inv_mass * p;
    b.velocity.angular += b.inv_inertia * (cross(s.r_child, p) + axial);
  }
  for (const Manifold& m : manifolds_) {
    Body& b = bodies_[static_cast<std::size_t>(m.body)];
    for (int k = 0; k < m.count; ++k) {
      const Vec2 p = m.points[k].normal_impulse * kNormal + m.points[k].tangent_impulse * kTangent;
      b.velocity.linear += b.inv_mass * p;
      b.velocity.angular += b.inv_inertia * cross(m.r[k], p);
    }
  }
}

void World::solve_velocities(double dt) {
  for (std::size_t i = 0; i < joints_.size(); ++i) solve_joint_velocity(i, dt);
  for (Manifold& m : manifolds_) solve_manifold_velocity(m);
}

void World::solve_joint_velocity(std::size_t idx, double dt) {
  const JointDef& j = joints_[idx];
  const JointSolve& s = joint_solves_[idx];
  JointState& st = joint_states_[idx];
  Body& a = bodies_[static_cast<std::size_t>(j.parent)];
  Body& b = bodies_[static_cast<std::size_t>(j.child)];
  const double ia = a.inv_inertia, ib = b.inv_inertia;

  if (s.velocity_motor && s.axial_mass > 0.0) {
    const double cdot = b.velocity.angular - a.velocity.angular - s.motor_speed;
    const double old = st.motor_impulse;
    st.motor_impulse = std::clamp(old - s.axial_mass * cdot, -s.max_motor_impulse,
                                  s.max_motor_impulse);
    const double impulse = st.motor_impulse - old;
    a.velocity.angular -= ia * impulse;
    b.velocity.angular += ib * impulse;
  }

  if (j.limit_enabled && s.axial_mass > 0.0) {
    const double angle = joint_angle(j);
    {
      const double c = angle - j.lower;
      const double bias = c > 0.0 ? c / dt : 0.0;
      const double cdot = b.velocity.angular - a.velocity.angular;
      const double old = st.lower_impulse;
      st.lower_impulse = std::max(old - s.axial_mass * (cdot + bias), 0.0);
      const double impulse = st.lower_impulse - old;
      a.velocity.angular -= ia * impulse;
      b.velocity.angular += ib * impulse;
    }
    {
      const double c = j.upper - angle;
      const double bias = c > 0.0 ? c / dt : 0.0;
      const double cdot = a.velocity.angular - b.velocity.angular;
      const double old = st.upper_impulse;
      st.upper_impulse = std::max(old - s.axial_mass * (cdot + bias), 0.0);
      const double impulse = st.upper_impulse - old;
      a.velocity.angular += ia * impulse;
      b.velocity.angular -= ib * impulse;
    }
  }

  const double det = s.k11 * s.k22 - s.k12 * s.k12;
  if (det <= 0.0) return;
  Vec2 cdot = b.velocity.linear + cross(b.velocity.angular, s.r_child) -
             a.velocity.linear - cross(a.velocity.angular, s.r_parent);
  if (config_.predictive_joints) {
    // Anchor gap after integrating the current velocities, rotation included.
    const Vec2 pb = b.pose.position + dt * b.velocity.linear +
                    rotate(j.anchor_child, b.pose.angle + dt * b.velocity.angular);
    const Vec2 pa = a.pose.position + dt * a.velocity.linear +
                    rotate(j.anchor_parent, a.pose.angle + dt * a.velocity.angular);
    cdot = (1.0 / dt) * (pb - pa);
  }
  const Vec2 impulse{-(s.k22 * cdot.x - s.k12 * cdot.z) / det,
                     -(s.k11 * cdot.z - s.k12 * cdot.x) / det};
  st.point_impulse += impulse;
  a.velocity.linear -= a.inv_mass * impulse;
  a.velocity.angular -= ia * cross(s.r_parent, impulse);
  b.velocity.linear += b.inv_mass * impulse;
  b.velocity.angular += ib * cross(s.r_child, impulse);
}

void World::solve_manifold_velocity(Manifold& m) {
  Body& b = bodies_[static_cast<std::size_t>(m.body)];
  const auto apply = [&](int k, Vec2 p) {
    b.velocity.linear += b.inv_mass * p;
    b.velocity.angular += b.inv_inertia * cross(m.r[k], p);
  };
  const auto rel_vel = [&](int k) {
    return b.velocity.linear + cross(b.velocity.angular, m.r[k]);
  };

  // Friction first, bounded by the current normal impulse.
  for (int k = 0; k < m.count; ++k) {
    ContactPoint& cp = m.points[k];
    const double vt = dot(rel_vel(k), kTangent);
    const double max_f = cp.friction * cp.normal_impulse;
    const double old = cp.tangent_impulse;
    cp.tangent_impulse = std::clamp(old - m.tangent_mass[k] * vt, -max_f, max_f);
    apply(k, (cp.tangent_impulse - old) * kTangent);
  }

  if (!m.block) {
    for (int k = 0; k < m.count; ++k) {
      ContactPoint& cp = m.points[k];
      const double vn = dot(rel_vel(k), kNormal);
      const double old = cp.normal_impulse;
      cp.normal_impulse = std::max(old - m.normal_mass[k] * (vn - m.velocity_bias[k]), 0.0);
      apply(k, (cp.normal_impulse - old) * kNormal);
    }
    return;
  }

  // Two-point mixed LCP, enumerated as in the classic block solver:
  // vn = A x + b, x >= 0, vn >= 0, x_i vn_i = 0.
  ContactPoint& c1 = m.points[0];
  ContactPoint& c2 = m.points[1];
  const double ax = c1.normal_impulse;
  const double ay = c2.normal_impulse;
  double b1 = dot(rel_vel(0), kNormal) - m.velocity_bias[0];
  double b2 = dot(rel_vel(1), kNormal) - m.velocity_bias[1];
  b1 -= m.k11 * ax + m.k12 * ay;
  b2 -= m.k12 * ax + m.k22 * ay;

  const auto commit = [&](double x1, double x2) {
    const double d1 = x1 - ax;
    const double d2 = x2 - ay;
    apply(0, d1 * kNormal);
    apply(1, d2 * kNormal);
    c1.normal_impulse = x1;
    c2.normal_impulse = x2;
  };

  // Both active.
  double x1 = -(m.inv_k11 * b1 + m.inv_k12 * b2);
  double x2 = -(m.inv_k12 * b1 + m.inv_k22 * b2);
  if (x1 >= 0.0 && x2 >= 0.0) {
    commit(x1, x2);
    return;
  }
  // Only point 1.
  x1 = -b1 / m.k11;
  x2 = 0.0;
  if (x1 >= 0.0 && m.k12 * x1 + b2 >= 0.0) {
    commit(x1, x2);
    return;
  }
  // Only point 2.
  x1 = 0.0;
  x2 = -b2 / m.k22;
  if (x2 >= 0.0 && m.k12 * x2 + b1 >= 0.0) {
    commit(x1, x2);
    return;
  }
  // Neither.
  if (b1 >= 0.0 && b2 >= 0.0) commit(0.0, 0.0);
}

void World::integrate_positions(double dt) {
  for (Body& b : bodies_) {
    if (b.is_static) continue;
    b.pose.position += dt * b.velocity.linear;
    b.pose.angle += dt * b.velocity.angular;
  }
}

void World::solve_positions() {
  for (const Manifold& m : manifolds_) {
    Body& b = bodies_[static_cast<std::size_t>(m.body)];
    for (int k = 0; k < m.count; ++k) {
      const Vec2 p = b.world_point(corner_local(b.half_extents, m.points[k].corner));
      const Vec2 r = p - b.pose.position;
      const double c = std::clamp(config_.baumgarte * (p.z + config_.linear_slop),
                                  -config_.max_linear_correction, 0.0);
      const double rn = cross(r, kNormal);
      const double k_eff = b.inv_mass + b.inv_inertia * rn * rn;
      if (k_eff <= 0.0 || c >= 0.0) continue;
      const double impulse = -c / k_eff;
      b.pose.position.z += b.inv_mass * impulse;
      b.pose.angle += b.inv_inertia * rn * impulse;
    }
  }

  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const JointDef& j = joints_[i];
    Body& a = bodies_[static_cast<std::size_t>(j.parent)];
    Body& b = bodies_[static_cast<std::size_t>(j.child)];
    const double ia = a.inv_inertia, ib = b.inv_inertia;
    const double ma = a.inv_mass, mb = b.inv_mass;

    if (j.limit_enabled && ia + ib > 0.0) {
      const double angle = joint_angle(j);
      double c = 0.0;
      if (j.upper - j.lower < 2.0 * config_.angular_slop) {
        c = std::clamp(angle - j.lower, -config_.max_angular_correction,
                       config_.max_angular_correction);
      } else if (angle <= j.lower) {
        c = std::clamp(angle - j.lower + config_.angular_slop,
                       -config_.max_angular_correction, 0.0);
      } else if (angle >= j.upper) {
        c = std::clamp(angle - j.upper - config_.angular_slop, 0.0,
                       config_.max_angular_correction);
      }
      const double impulse = -c / (ia + ib);
      a.pose.angle -= ia * impulse;
      b.pose.angle += ib * impulse;
    }

    const Vec2 ra = rotate(j.anchor_parent, a.pose.angle);
    const Vec2 rb = rotate(j.anchor_child, b.pose.angle);
    const Vec2 c = (b.pose.position + rb) - (a.pose.position + ra);
    const double k11 = ma + mb + ia * ra.z * ra.z + ib * rb.z * rb.z;
    const double k12 = -ia * ra.x * ra.z - ib * rb.x * rb.z;
    const double k22 = ma + mb + ia * ra.x * ra.x + ib * rb.x * rb.x;
    const double det = k11 * k22 - k12 * k12;
    if (det <= 0.0) continue;
    const Vec2 impulse{-(k22 * c.x - k12 * c.z) / det, -(k11 * c.z - k12 * c.x) / det};
    a.pose.position -= ma * impulse;
    a.pose.angle -= ia * cross(ra, impulse);
    b.pose.position += mb * impulse;
    b.pose.angle += ib * cross(rb, impulse);
  }
}

void World::store_impulses(double dt) {
  impulse_cache_.clear();
  contacts_.clear();
  for (const Manifold& m : manifolds_) {
    for (int k = 0; k < m.count; ++k) {
      const ContactPoint& cp = m.points[k];
      impulse_cache_[{cp.body, cp.corner}] = {cp.normal_impulse, cp.tangent_impulse};
      contacts_.push_back(cp);
    }
  }
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    joint_states_[i].applied_torque = joint_states_[i].motor_impulse / dt;
  }
}

void World::check_stability() const {
  for (const Body& b : bodies_) {
    const double v = std::max(length(b.velocity.linear), std::abs(b.velocity.angular));
    if (!std::isfinite(v) || v > config_.max_speed || !std::isfinite(b.pose.angle) ||
        !std::isfinite(b.pose.position.x) || !std::isfinite(b.pose.position.z)) {
      throw InstabilityError("body '" + b.name + "' diverged at t=" +
                             std::to_string(time_) + " s");
    }
  }
}

}  // namespace simbiped::physics
