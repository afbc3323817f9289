#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simbiped/vec2.hpp"

// Small deterministic planar rigid-body engine: boxes, revolute joints with
// torque-limited motors, and a flat ground halfplane at z = 0. Velocity
// constraints are solved with sequential impulses (warm started), positions
// with a few nonlinear Gauss-Seidel sweeps.

namespace simbiped::physics {

struct Pose {
  Vec2 position;
  double angle = 0.0;  // counterclockwise
};

struct Twist {
  Vec2 linear;
  double angular = 0.0;
};

struct BodyDef {
  std::string name;
  Pose pose;
  Twist velocity;
  double mass = 1.0;
  // 0 selects the uniform-rectangle value m (w^2 + h^2) / 12.
  double inertia = 0.0;
  Vec2 half_extents{0.1, 0.1};
  double friction = 0.1;
  bool is_static = false;
  bool collides_with_ground = true;
};

struct Body {
  std::string name;
  Pose pose;
  Twist velocity;
  double mass = 0.0;
  double inertia = 0.0;
  double inv_mass = 0.0;
  double inv_inertia = 0.0;
  Vec2 half_extents;
  double friction = 0.1;
  bool is_static = false;
  bool collides_with_ground = true;

  Vec2 world_point(Vec2 local) const { return pose.position + rotate(local, pose.angle); }
  Vec2 point_velocity(Vec2 world) const {
    return velocity.linear + cross(velocity.angular, world - pose.position);
  }
};

// Joint coordinate reported to controllers:
//   angle = (child.angle - parent.angle) + angle_offset
// Positive motor torque drives the coordinate up.
struct JointDef {
  std::string name;
  int parent = -1;
  int child = -1;
  Vec2 anchor_parent;  // body-local
  Vec2 anchor_child;   // body-local
  double angle_offset = 0.0;
  double torque_limit = 100.0;
  // Motor cannot accelerate the joint past this speed; <= 0 disables the cap.
  double speed_limit = 0.0;
  bool limit_enabled = false;
  double lower = 0.0;  // joint coordinate limits
  double upper = 0.0;
};

struct JointReadout {
  double angle = 0.0;
  double velocity = 0.0;
};

enum class MotorMode {
  // The command is applied as a torque; the part that would push the joint
  // further past its speed limit is dropped.
  kTorque,
  // Velocity motor aiming at sign(u) * speed_limit with at most |u| torque.
  kVelocityTarget,
};

struct WorldConfig {
  double gravity = 9.81;
  double dt = 1.0 / 60.0;
  // Each step is split into this many equal substeps.
  int substeps = 1;
  int velocity_iterations = 20;
  int position_iterations = 3;
  double ground_friction = 2.5;
  double baumgarte = 0.2;
  double linear_slop = 1e-3;
  double angular_slop = 2.0 / 180.0 * 3.14159265358979323846;
  double max_linear_correction = 0.2;
  double max_angular_correction = 8.0 / 180.0 * 3.14159265358979323846;
  // Corners within this distance of the ground get a speculative contact.
  double contact_margin = 0.02;
  double max_speed = 1e3;
  MotorMode motor_mode = MotorMode::kVelocityTarget;
  // Joint anchors are closed at the end-of-step pose instead of matching
  // anchor velocities. Conserves energy in swinging chains; the walking
  // gains were tuned with it off.
  bool predictive_joints = false;

  void validate() const;
};

struct ContactPoint {
  int body = -1;
  int corner = -1;
  Vec2 point;             // world position of the box corner
  double separation = 0;  // corner height above the ground at detection
  double normal_impulse = 0.0;
  double tangent_impulse = 0.0;
  double friction = 0.0;  // combined coefficient
};

// sqrt(mu_part * mu_ground)
double mix_friction(double a, double b);

class World {
 public:
  explicit World(WorldConfig config = {});

  int add_body(const BodyDef& def);
  int add_joint(const JointDef& def);

  // Advances one fixed step. `joint_torques` holds one command per joint
  // (missing entries count as zero) and is clamped to each torque limit.
  // Throws InstabilityError on runaway velocities; the world is left in the
  // diverged state.
  void step(std::span<const double> joint_torques, double dt);
  void step(std::span<const double> joint_torques) { step(joint_torques, config_.dt); }

  JointReadout joint_readout(int joint_id) const;
  // Torque applied by the motor during the last step.
  double applied_torque(int joint_id) const;

  const Body& body(int id) const;
  Body& mutable_body(int id);
  const JointDef& joint(int id) const;
  JointDef& mutable_joint(int id);
  int body_count() const { return static_cast<int>(bodies_.size()); }
  int joint_count() const { return static_cast<int>(joints_.size()); }
  int find_body(const std::string& name) const;
  int find_joint(const std::string& name) const;

  const WorldConfig& config() const { return config_; }
  WorldConfig& mutable_config() { return config_; }
  const std::vector<ContactPoint>& contacts() const { return contacts_; }
  double time() const { return time_; }
  std::uint64_t step_count() const { return steps_; }

  // Sum of m v over dynamic bodies.
  Vec2 linear_momentum() const;

 private:
  struct JointState {
    double motor_impulse = 0.0;
    double lower_impulse = 0.0;
    double upper_impulse = 0.0;
    Vec2 point_impulse;
    double applied_torque = 0.0;
  };

  // Solver scratch for one joint.
  struct JointSolve {
    Vec2 r_parent;
    Vec2 r_child;
    double k11, k12, k22;
    double axial_mass;
    double motor_speed;
    double max_motor_impulse;
    bool velocity_motor;
  };

  // Up to two points on one body touching the ground.
  struct Manifold {
    int body = -1;
    int count = 0;
    ContactPoint points[2];
    Vec2 r[2];
    double normal_mass[2] = {0, 0};
    double tangent_mass[2] = {0, 0};
    double velocity_bias[2] = {0, 0};
    // 2x2 block solve data
    double k11 = 0, k12 = 0, k22 = 0;
    double inv_k11 = 0, inv_k12 = 0, inv_k22 = 0;
    bool block = false;
  };

  double joint_angle(const JointDef& j) const;
  void collect_contacts(double dt);
  void init_joint_solves(std::span<const double> torques, double dt);
  void warm_start();
  void solve_velocities(double dt);
  void solve_joint_velocity(std::size_t idx, double dt);
  void solve_manifold_velocity(Manifold& m);
  void integrate_positions(double dt);
  void solve_positions();
  void store_impulses(double dt);
  void check_stability() const;

  WorldConfig config_;
  std::vector<Body> bodies_;
  std::vector<JointDef> joints_;
  std::vector<JointState> joint_states_;
  std::vector<JointSolve> joint_solves_;
  std::vector<Manifold> manifolds_;
  std::vector<ContactPoint> contacts_;
  // Warm-start cache keyed by (body, corner).
  std::map<std::pair<int, int>, std::pair<double, double>> impulse_cache_;
  double time_ = 0.0;
  std::uint64_t steps_ = 0;
};

}  // namespace simbiped::physics
