#pragma once

// World state and the fixed-step dynamics. The robot is integrated in
// reduced coordinates: the whole-robot CoM and base orientation carry the
// floating 6 DoF, joint angles carry the rest, and forward kinematics ties
// them together every step. Ground interaction is penalty contact.

#include "tailsim/contact.hpp"
#include "tailsim/controller.hpp"
#include "tailsim/robot.hpp"
#include "tailsim/terrain.hpp"

#include <optional>
#include <vector>

namespace tailsim {

struct BodyState {
  Pose pose;
  Vec3 lin_vel;   // of the frame origin, world
  Vec3 ang_vel;   // world
  double mass = 0.0;
  Vec3 inertia_diag;  // about the link CoM, link axes
};

struct ContactRecord {
  int point_index = -1;
  ContactTag tag = ContactTag::Body;
  int link = -1;
  Contact contact;
  Vec3 force;
  int tread = 0;
};

// Per contact-slot stiction memory: a tangential spring anchor that slides
// when the Coulomb cone clamps, giving true static friction without the
// chatter a purely velocity-based law produces on light links.
struct FrictionAnchor {
  bool active = false;
  Vec3 position;
  int tread = 0;
};

struct WorldState {
  double time = 0.0;
  Vec3 com_position;
  Vec3 com_velocity;
  Quat base_orientation;
  Vec3 base_angular_velocity;  // world
  std::vector<JointState> joints;
  ReelState reel;
  Vec3 gravity{0.0, 0.0, -9.81};

  std::vector<BodyState> bodies;            // world frame, refreshed after each step
  std::vector<ContactRecord> last_contacts; // evaluated at the pre-step state
  std::vector<FrictionAnchor> anchors;      // two slots per contact point
  double max_friction_ratio = 0.0;          // max |F_t|/(mu*F_n) seen so far
};

struct LinkKinematics {
  Pose pose;
  Vec3 lin_vel;  // of the frame origin
  Vec3 ang_vel;
  Vec3 com_world;
  Vec3 com_vel;
};

struct Kinematics {
  std::vector<LinkKinematics> links;
  Vec3 com_world;
};

Kinematics compute_kinematics(const ArticulatedRobot& robot, const WorldState& world);

// Velocity of a world-space point rigidly attached to a link.
Vec3 point_velocity(const LinkKinematics& link, const Vec3& point);

struct SpawnPose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;      // rad
  double clearance = 0.002;  // lowest contact sphere starts this far above ground
};

// Places the robot in neutral stance above the terrain; all joints at zero,
// reel relaxed, everything at rest.
WorldState init_world(const ArticulatedRobot& robot, const Terrain& terrain, const SpawnPose& spawn);

// Advances the world by dt: servo/spring/limit torques, penalty contacts,
// gravity, then semi-implicit integration. Deterministic for identical
// inputs. `commands` empty means servos unpowered.
// Throws NumericalDivergence when the state leaves sane bounds.
void step_world(WorldState& world, const ArticulatedRobot& robot,
                const std::optional<ServoCommandSet>& commands, const Terrain& terrain, double dt);

// Kinetic + gravitational + joint-spring + limit-stop + contact-spring
// energy, including the friction anchor springs. dt reproduces the step's
// stability-capped tangential stiffness.
double mechanical_energy(const ArticulatedRobot& robot, const WorldState& world,
                         const Terrain& terrain, double dt = 1.0e-3);

// Total linear momentum (total mass times CoM velocity).
Vec3 linear_momentum(const ArticulatedRobot& robot, const WorldState& world);

}  // namespace tailsim
