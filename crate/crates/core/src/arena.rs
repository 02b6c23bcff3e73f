//! Deterministic 2D kinematic world for a single differential drive robot.
//!
//! Axis-aligned rectangular obstacles sit inside a walled rectangle. The
//! robot carries a 24-beam planar lidar; observations combine the polar goal
//! offset with the inverted, cut-off lidar readings.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BEAM_COUNT: usize = 24;
pub const OBS_DIM: usize = 2 + BEAM_COUNT;
pub const ACTION_DIM: usize = 2;

pub const MAX_LINEAR_VELOCITY: f64 = 0.25;
pub const MAX_ANGULAR_VELOCITY: f64 = FRAC_PI_2;

pub const DEFAULT_MAX_RANGE: f64 = 3.5;
pub const DEFAULT_PROXIMITY_CUTOFF: f64 = 0.8;
pub const DEFAULT_DT: f64 = 0.1;

/// Wraps an angle into (−π, π].
pub fn normalize_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle in arena coordinates (meters).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Rect {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        Self {
            min_x,
            min_y,
            max_x,
            max_y,
        }
    }

    /// Closed containment test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        let dx = (self.min_x - x).max(0.0).max(x - self.max_x);
        let dy = (self.min_y - y).max(0.0).max(y - self.max_y);
        dx.hypot(dy)
    }

    /// Distance along the unit ray (ox, oy) + t·(dx, dy), t ≥ 0, to the first
    /// point of the rectangle, if any. A ray starting inside hits at 0.
    pub fn ray_hit(&self, ox: f64, oy: f64, dx: f64, dy: f64) -> Option<f64> {
        let mut t_near = f64::NEG_INFINITY;
        let mut t_far = f64::INFINITY;
        for (o, d, lo, hi) in [
            (ox, dx, self.min_x, self.max_x),
            (oy, dy, self.min_y, self.max_y),
        ] {
            if d == 0.0 {
                if o < lo || o > hi {
                    return None;
                }
            } else {
                let inv = 1.0 / d;
                let (t0, t1) = {
                    let a = (lo - o) * inv;
                    let b = (hi - o) * inv;
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                };
                t_near = t_near.max(t0);
                t_far = t_far.min(t1);
            }
        }
        if t_far < 0.0 || t_near > t_far {
            None
        } else {
            Some(t_near.max(0.0))
        }
    }
}

fn default_goal_radius() -> f64 {
    0.2
}
fn default_robot_radius() -> f64 {
    0.15
}
fn default_max_range() -> f64 {
    DEFAULT_MAX_RANGE
}
fn default_cutoff() -> f64 {
    DEFAULT_PROXIMITY_CUTOFF
}

/// Walled rectangular arena `[0, width] × [0, height]` with obstacles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaSpec {
    pub width: f64,
    pub height: f64,
    #[serde(default)]
    pub obstacles: Vec<Rect>,
    #[serde(default = "default_goal_radius")]
    pub goal_radius: f64,
    #[serde(default = "default_robot_radius")]
    pub robot_radius: f64,
    #[serde(default = "default_max_range")]
    pub max_range: f64,
    #[serde(default = "default_cutoff")]
    pub proximity_cutoff: f64,
}

impl ArenaSpec {
    pub fn open(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            obstacles: Vec::new(),
            goal_radius: default_goal_radius(),
            robot_radius: default_robot_radius(),
            max_range: default_max_range(),
            proximity_cutoff: default_cutoff(),
        }
    }

    pub fn with_obstacles(mut self, obstacles: Vec<Rect>) -> Self {
        self.obstacles = obstacles;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("width", self.width)?;
        positive("height", self.height)?;
        positive("goal_radius", self.goal_radius)?;
        positive("robot_radius", self.robot_radius)?;
        positive("max_range", self.max_range)?;
        positive("proximity_cutoff", self.proximity_cutoff)?;
        for (i, r) in self.obstacles.iter().enumerate() {
            let ok = r.min_x < r.max_x
                && r.min_y < r.max_y
                && r.min_x >= 0.0
                && r.min_y >= 0.0
                && r.max_x <= self.width
                && r.max_y <= self.height;
            if !ok {
                return Err(Error::param(
                    format!("obstacles[{i}]"),
                    "must be a non-degenerate rectangle inside the arena bounds",
                ));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x.is_finite() && y.is_finite() && x >= 0.0 && x <= self.width && y >= 0.0 && y <= self.height
    }

    /// Smallest distance from a point to any wall or obstacle.
    pub fn clearance(&self, x: f64, y: f64) -> f64 {
        let walls = x.min(self.width - x).min(y).min(self.height - y);
        self.obstacles
            .iter()
            .map(|r| r.distance_to(x, y))
            .fold(walls, f64::min)
    }

    /// Whether a disc of `radius` centered at (x, y) overlaps a wall or obstacle.
    pub fn disc_collides(&self, x: f64, y: f64, radius: f64) -> bool {
        self.clearance(x, y) < radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LidarScan {
    pub ranges: [f64; BEAM_COUNT],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub v: f64,
    pub omega: f64,
}

impl Action {
    pub fn new(v: f64, omega: f64) -> Self {
        Self { v, omega }
    }

    pub fn within_limits(&self) -> bool {
        (0.0..=MAX_LINEAR_VELOCITY).contains(&self.v)
            && (-MAX_ANGULAR_VELOCITY..=MAX_ANGULAR_VELOCITY).contains(&self.omega)
    }

    pub fn clamped(&self) -> Self {
        Self {
            v: self.v.clamp(0.0, MAX_LINEAR_VELOCITY),
            omega: self.omega.clamp(-MAX_ANGULAR_VELOCITY, MAX_ANGULAR_VELOCITY),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub d: f64,
    pub theta_d: f64,
    pub s_laser: [f64; BEAM_COUNT],
}

impl Observation {
    /// Network input layout: `[d, theta_d, s_laser[0..24]]`.
    pub fn features(&self) -> [f32; OBS_DIM] {
        let mut out = [0.0f32; OBS_DIM];
        out[0] = self.d as f32;
        out[1] = self.theta_d as f32;
        for (o, s) in out[2..].iter_mut().zip(self.s_laser.iter()) {
            *o = *s as f32;
        }
        out
    }

    pub fn max_laser(&self) -> f64 {
        self.s_laser.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewardParams {
    pub goal_reward: f64,
    pub collision_penalty: f64,
    pub progress_factor: f64,
    pub proximity_lambda: f64,
}

impl Default for RewardParams {
    fn default() -> Self {
        Self {
            goal_reward: 100.0,
            collision_penalty: -100.0,
            progress_factor: 4.0,
            proximity_lambda: std::f64::consts::LN_2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub r_g: f64,
    pub r_p: f64,
    pub r_c: f64,
    pub r_a: f64,
    pub total: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EpisodeStatus {
    Running,
    GoalReached,
    Collided,
    TimedOut,
}

impl EpisodeStatus {
    pub fn is_done(self) -> bool {
        self != EpisodeStatus::Running
    }

    /// Goal and collision end the trajectory for bootstrapping purposes; a
    /// timeout does not.
    pub fn is_terminal(self) -> bool {
        matches!(self, EpisodeStatus::GoalReached | EpisodeStatus::Collided)
    }
}

fn beam_angle(heading: f64, k: usize) -> f64 {
    heading + k as f64 * (TAU / BEAM_COUNT as f64)
}

/// Casts the 24 lidar beams from `pose`. Beam `k` points at
/// `heading + k·15°`; each range is the distance to the nearest wall or
/// obstacle along the beam, clamped to the arena's `max_range`.
pub fn raycast_scan(pose: &Pose, arena: &ArenaSpec) -> Result<LidarScan> {
    if !arena.contains(pose.x, pose.y) || !pose.heading.is_finite() {
        return Err(Error::InvalidWorld(format!(
            "pose ({}, {}) lies outside the {}x{} arena",
            pose.x, pose.y, arena.width, arena.height
        )));
    }
    let mut ranges = [0.0; BEAM_COUNT];
    for (k, range) in ranges.iter_mut().enumerate() {
        let (dy, dx) = beam_angle(pose.heading, k).sin_cos();
        let mut t = wall_distance(pose.x, pose.y, dx, dy, arena);
        for obstacle in &arena.obstacles {
            if let Some(hit) = obstacle.ray_hit(pose.x, pose.y, dx, dy) {
                t = t.min(hit);
            }
        }
        *range = t.clamp(0.0, arena.max_range);
    }
    Ok(LidarScan { ranges })
}

fn wall_distance(x: f64, y: f64, dx: f64, dy: f64, arena: &ArenaSpec) -> f64 {
    let tx = if dx > 0.0 {
        (arena.width - x) / dx
    } else if dx < 0.0 {
        -x / dx
    } else {
        f64::INFINITY
    };
    let ty = if dy > 0.0 {
        (arena.height - y) / dy
    } else if dy < 0.0 {
        -y / dy
    } else {
        f64::INFINITY
    };
    tx.min(ty)
}

/// Inverted proximity map: `clamp(1 − range / cutoff, 0, 1)`.
pub fn normalize_scan(scan: &LidarScan, cutoff: f64) -> [f64; BEAM_COUNT] {
    let mut out = [0.0; BEAM_COUNT];
    for (o, r) in out.iter_mut().zip(scan.ranges.iter()) {
        *o = (1.0 - r / cutoff).clamp(0.0, 1.0);
    }
    out
}

/// Unicycle integration over one control interval.
pub fn step_dynamics(pose: &Pose, action: &Action, dt: f64) -> Result<Pose> {
    if !action.within_limits() {
        return Err(Error::ActionOutOfLimits {
            v: action.v,
            omega: action.omega,
        });
    }
    let (s, c) = pose.heading.sin_cos();
    Ok(Pose {
        x: pose.x + action.v * c * dt,
        y: pose.y + action.v * s * dt,
        heading: normalize_angle(pose.heading + action.omega * dt),
    })
}

pub fn observe(pose: &Pose, goal: &Point, arena: &ArenaSpec) -> Result<Observation> {
    let scan = raycast_scan(pose, arena)?;
    let dx = goal.x - pose.x;
    let dy = goal.y - pose.y;
    Ok(Observation {
        d: dx.hypot(dy),
        theta_d: normalize_angle(dy.atan2(dx) - pose.heading),
        s_laser: normalize_scan(&scan, arena.proximity_cutoff),
    })
}

pub fn compute_reward(
    prev: &Observation,
    cur: &Observation,
    status: EpisodeStatus,
    params: &RewardParams,
) -> RewardBreakdown {
    let r_g = if status == EpisodeStatus::GoalReached {
        params.goal_reward
    } else {
        0.0
    };
    let r_c = if status == EpisodeStatus::Collided {
        params.collision_penalty
    } else {
        0.0
    };
    let delta = (prev.d - cur.d).abs();
    let r_p = if cur.d < prev.d {
        params.progress_factor * delta
    } else {
        -params.progress_factor * delta
    };
    let peak = cur.max_laser();
    let r_a = if peak > 0.0 {
        -(peak * params.proximity_lambda).exp()
    } else {
        0.0
    };
    RewardBreakdown {
        r_g,
        r_p,
        r_c,
        r_a,
        total: r_g + r_p + r_c + r_a,
    }
}

/// Precedence: goal, then collision, then step budget.
pub fn detect_termination(
    pose: &Pose,
    goal: &Point,
    arena: &ArenaSpec,
    step: usize,
    max_steps: usize,
) -> EpisodeStatus {
    if pose.position().distance(goal) <= arena.goal_radius {
        EpisodeStatus::GoalReached
    } else if arena.disc_collides(pose.x, pose.y, arena.robot_radius) {
        EpisodeStatus::Collided
    } else if step >= max_steps {
        EpisodeStatus::TimedOut
    } else {
        EpisodeStatus::Running
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StepOutcome {
    pub observation: Observation,
    pub reward: RewardBreakdown,
    pub status: EpisodeStatus,
}

const SPAWN_MARGIN: f64 = 0.1;
const MIN_GOAL_DISTANCE: f64 = 1.0;
const MAX_SPAWN_ATTEMPTS: usize = 100_000;

/// One robot in one arena, driven by an injected seeded generator.
#[derive(Clone, Debug)]
pub struct Env {
    arena: ArenaSpec,
    reward: RewardParams,
    dt: f64,
    max_steps: usize,
    rng: ChaCha8Rng,
    pose: Pose,
    goal: Point,
    step: usize,
    status: EpisodeStatus,
    obs: Observation,
}

impl Env {
    pub fn new(
        arena: ArenaSpec,
        reward: RewardParams,
        dt: f64,
        max_steps: usize,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        arena.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param("dt", "must be positive"));
        }
        let start = Pose::new(arena.width / 2.0, arena.height / 2.0, 0.0);
        let goal = Point::new(arena.width / 2.0, arena.height / 2.0);
        let obs = observe(&start, &goal, &arena)?;
        let mut env = Self {
            arena,
            reward,
            dt,
            max_steps,
            rng,
            pose: start,
            goal,
            step: 0,
            status: EpisodeStatus::Running,
            obs,
        };
        env.reset()?;
        Ok(env)
    }

    /// Samples a fresh collision-free start pose and a goal at least
    /// `MIN_GOAL_DISTANCE` away (relaxed for arenas too small for that).
    pub fn reset(&mut self) -> Result<Observation> {
        let start_clearance = self.arena.robot_radius + SPAWN_MARGIN;
        let goal_clearance = self.arena.robot_radius;
        let min_goal = MIN_GOAL_DISTANCE
            .min(0.5 * (self.arena.width.min(self.arena.height) - 2.0 * start_clearance));
        let start = self.sample_free_point(start_clearance)?;
        let mut goal = None;
        for _ in 0..MAX_SPAWN_ATTEMPTS {
            let p = self.sample_free_point(goal_clearance)?;
            if p.distance(&start) >= min_goal {
                goal = Some(p);
                break;
            }
        }
        let goal = goal.ok_or_else(|| {
            Error::InvalidWorld("could not place a goal away from the start".into())
        })?;
        let heading = normalize_angle(self.rng.random_range(-PI..PI));
        self.reset_to(Pose::new(start.x, start.y, heading), goal)
    }

    /// Places the robot and goal explicitly.
    pub fn reset_to(&mut self, pose: Pose, goal: Point) -> Result<Observation> {
        self.obs = observe(&pose, &goal, &self.arena)?;
        self.pose = pose;
        self.goal = goal;
        self.step = 0;
        self.status = EpisodeStatus::Running;
        Ok(self.obs)
    }

    fn sample_free_point(&mut self, clearance: f64) -> Result<Point> {
        let (w, h) = (self.arena.width, self.arena.height);
        if 2.0 * clearance >= w || 2.0 * clearance >= h {
            return Err(Error::InvalidWorld(
                "arena too small for the robot footprint".into(),
            ));
        }
        for _ in 0..MAX_SPAWN_ATTEMPTS {
            let x = self.rng.random_range(clearance..w - clearance);
            let y = self.rng.random_range(clearance..h - clearance);
            if self.arena.clearance(x, y) >= clearance {
                return Ok(Point::new(x, y));
            }
        }
        Err(Error::InvalidWorld("no collision-free spawn cell found".into()))
    }

    pub fn step(&mut self, action: &Action) -> Result<StepOutcome> {
        if self.status.is_done() {
            return Err(Error::InvalidWorld(format!(
                "episode already ended ({:?}); reset required",
                self.status
            )));
        }
        let pose = step_dynamics(&self.pose, action, self.dt)?;
        let step = self.step + 1;
        let status = detect_termination(&pose, &self.goal, &self.arena, step, self.max_steps);
        let obs = observe(&pose, &self.goal, &self.arena)?;
        let reward = compute_reward(&self.obs, &obs, status, &self.reward);
        self.pose = pose;
        self.step = step;
        self.status = status;
        self.obs = obs;
        Ok(StepOutcome {
            observation: obs,
            reward,
            status,
        })
    }

    pub fn arena(&self) -> &ArenaSpec {
        &self.arena
    }
    pub fn pose(&self) -> Pose {
        self.pose
    }
    pub fn goal(&self) -> Point {
        self.goal
    }
    pub fn observation(&self) -> Observation {
        self.obs
    }
    pub fn status(&self) -> EpisodeStatus {
        self.status
    }
    pub fn steps(&self) -> usize {
        self.step
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn obs_with(d: f64, peak: f64) -> Observation {
        let mut s_laser = [0.0; BEAM_COUNT];
        s_laser[3] = peak;
        Observation {
            d,
            theta_d: 0.0,
            s_laser,
        }
    }

    #[test]
    fn empty_arena_center_reads_max_range() {
        let arena = ArenaSpec::open(10.0, 10.0);
        let scan = raycast_scan(&Pose::new(5.0, 5.0, 0.3), &arena).unwrap();
        assert!(scan.ranges.iter().all(|&r| r == 3.5));
    }

    #[test]
    fn wall_ahead_is_hit_perpendicularly() {
        let arena = ArenaSpec::open(10.0, 10.0);
        let scan = raycast_scan(&Pose::new(9.0, 5.0, 0.0), &arena).unwrap();
        assert!(close(scan.ranges[0], 1.0, 1e-12));
        // beam 6 points along +y
        assert!(close(scan.ranges[6], 3.5, 0.0));
    }

    #[test]
    fn pose_outside_arena_is_rejected() {
        let arena = ArenaSpec::open(4.0, 4.0);
        let err = raycast_scan(&Pose::new(-0.1, 1.0, 0.0), &arena).unwrap_err();
        assert!(matches!(err, Error::InvalidWorld(_)));
    }

    #[test]
    fn normalization_endpoints() {
        let mut scan = LidarScan { ranges: [3.5; BEAM_COUNT] };
        scan.ranges[0] = 0.8;
        scan.ranges[1] = 0.0;
        scan.ranges[2] = 0.4;
        let s = normalize_scan(&scan, 0.8);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[1], 1.0);
        assert_eq!(s[2], 0.5);
        assert_eq!(s[3], 0.0);
    }

    #[test]
    fn dynamics_cases() {
        let p = Pose::new(1.0, 2.0, 0.0);
        assert_eq!(step_dynamics(&p, &Action::new(0.0, 0.0), 1.0).unwrap(), p);
        let q = step_dynamics(&p, &Action::new(0.25, 0.0), 1.0).unwrap();
        assert_eq!(q.x, 1.25);
        assert_eq!(q.y, 2.0);
        let r = step_dynamics(&p, &Action::new(0.0, FRAC_PI_2), 1.0).unwrap();
        assert_eq!((r.x, r.y), (1.0, 2.0));
        assert!(close(r.heading, FRAC_PI_2, 1e-15));
        assert!(matches!(
            step_dynamics(&p, &Action::new(0.3, 0.0), 1.0),
            Err(Error::ActionOutOfLimits { .. })
        ));
    }

    #[test]
    fn heading_wraps_into_half_open_interval() {
        let p = Pose::new(1.0, 1.0, PI - 0.05);
        let q = step_dynamics(&p, &Action::new(0.0, 1.0), 0.1).unwrap();
        assert!(q.heading > -PI && q.heading <= PI);
        assert!(close(q.heading, -PI + 0.05, 1e-12));
        assert_eq!(normalize_angle(-PI), PI);
        assert_eq!(normalize_angle(PI), PI);
    }

    #[test]
    fn observe_polar_goal() {
        let arena = ArenaSpec::open(10.0, 10.0);
        let pose = Pose::new(5.0, 5.0, 0.0);
        let o = observe(&pose, &Point::new(6.0, 5.0), &arena).unwrap();
        assert_eq!((o.d, o.theta_d), (1.0, 0.0));
        let o = observe(&pose, &Point::new(4.0, 5.0), &arena).unwrap();
        assert_eq!(o.d, 1.0);
        assert!(close(o.theta_d, PI, 1e-15));
        let o = observe(&pose, &Point::new(6.0, 6.0), &arena).unwrap();
        assert!(close(o.d, 2f64.sqrt(), 1e-15));
        assert!(close(o.theta_d, PI / 4.0, 1e-15));
    }

    #[test]
    fn reward_components() {
        let p = RewardParams::default();
        let a = obs_with(1.0, 0.0);
        let b = obs_with(0.95, 0.0);
        let r = compute_reward(&a, &b, EpisodeStatus::GoalReached, &p);
        assert_eq!(r.r_g, 100.0);
        assert!(close(r.r_p, 0.2, 1e-12));
        assert_eq!(r.r_a, 0.0);
        let r = compute_reward(&b, &a, EpisodeStatus::Collided, &p);
        assert_eq!(r.r_c, -100.0);
        assert!(close(r.r_p, -0.2, 1e-12));
        let r = compute_reward(&a, &obs_with(1.0, 1.0), EpisodeStatus::Running, &p);
        assert!(close(r.r_a, -2.0, 1e-12));
        assert_eq!(r.total, r.r_g + r.r_p + r.r_c + r.r_a);
    }

    #[test]
    fn termination_rules() {
        let mut arena = ArenaSpec::open(4.0, 4.0);
        // exactly representable so the boundary is hit exactly
        arena.goal_radius = 0.25;
        let goal = Point::new(2.0, 2.0);
        let on_boundary = Pose::new(2.0 + arena.goal_radius, 2.0, 0.0);
        assert_eq!(
            detect_termination(&on_boundary, &goal, &arena, 0, 10),
            EpisodeStatus::GoalReached
        );
        let near_wall = Pose::new(0.5 * arena.robot_radius, 1.0, 0.0);
        assert_eq!(
            detect_termination(&near_wall, &goal, &arena, 0, 10),
            EpisodeStatus::Collided
        );
        let far = Pose::new(1.0, 1.0, 0.0);
        assert_eq!(
            detect_termination(&far, &goal, &arena, 10, 10),
            EpisodeStatus::TimedOut
        );
        assert_eq!(
            detect_termination(&far, &goal, &arena, 9, 10),
            EpisodeStatus::Running
        );
    }

    #[test]
    fn env_is_deterministic_and_absorbing() {
        let arena = ArenaSpec::open(4.0, 4.0).with_obstacles(vec![Rect::new(1.5, 1.5, 2.5, 2.0)]);
        let run = || {
            let mut env = Env::new(
                arena.clone(),
                RewardParams::default(),
                DEFAULT_DT,
                50,
                stream_rng(3, 0, Stream::Env),
            )
            .unwrap();
            let mut trace = Vec::new();
            for i in 0..200 {
                if env.status().is_done() {
                    env.reset().unwrap();
                }
                let a = Action::new(0.25, if i % 7 == 0 { 1.0 } else { 0.0 });
                let o = env.step(&a).unwrap();
                trace.push((env.pose(), o.reward.total, o.status));
            }
            trace
        };
        assert_eq!(run(), run());

        let mut env = Env::new(arena, RewardParams::default(), DEFAULT_DT, 1, stream_rng(1, 0, Stream::Env)).unwrap();
        let out = env.step(&Action::new(0.0, 0.0)).unwrap();
        assert_eq!(out.status, EpisodeStatus::TimedOut);
        assert!(env.step(&Action::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn spawned_poses_are_collision_free() {
        let arena = ArenaSpec::open(3.0, 3.0).with_obstacles(vec![Rect::new(1.0, 1.0, 2.0, 2.0)]);
        let mut env = Env::new(arena.clone(), RewardParams::default(), DEFAULT_DT, 10, stream_rng(9, 0, Stream::Env)).unwrap();
        for _ in 0..200 {
            env.reset().unwrap();
            let p = env.pose();
            assert!(!arena.disc_collides(p.x, p.y, arena.robot_radius));
            assert!(arena.clearance(env.goal().x, env.goal().y) >= arena.robot_radius);
        }
    }

    #[test]
    fn arena_validation() {
        let bad = ArenaSpec::open(2.0, 2.0).with_obstacles(vec![Rect::new(1.0, 1.0, 2.5, 1.5)]);
        assert!(bad.validate().is_err());
        assert!(ArenaSpec::open(0.0, 1.0).validate().is_err());
    }
}
