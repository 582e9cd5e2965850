#pragma once

#include <utility>
#include <vector>

#include "trackrun/core.hpp"
#include "trackrun/rational.hpp"

namespace trackrun {

// A fence is a closed circle or an open segment, both of positive length.
struct Fence {
    enum class Kind { kCircle, kSegment };
    Kind kind = Kind::kCircle;
    Rational length;
};

Fence circle_fence(const Rational& length);
Fence segment_fence(const Rational& length);

// Periodic piecewise-linear trajectory: breakpoints (t, x) with t strictly
// increasing from 0 to the period, every slope bounded by max_speed, and the
// endpoints matching up (mod fence length on a circle).
struct AgentTrajectory {
    Rational max_speed;
    Rational period;
    std::vector<std::pair<Rational, Rational>> breakpoints;
};

struct PatrolSchedule {
    Fence fence;
    std::vector<AgentTrajectory> agents;
};

PatrolSchedule make_patrol(Fence fence, std::vector<AgentTrajectory> agents);

struct IdleReport {
    bool unbounded = false;
    bool exact = false;
    Rational idle_lo;  // == idle_hi in exact mode
    Rational idle_hi;
    Rational witness_point;
    std::pair<Rational, Rational> witness_gap;  // time interval, length = idle_lo
};

// Exact idle time of a constant-speed clockwise schedule on a circle. Each
// point x is visited by runner i in an arithmetic progression with gap
// L/v_i; the max cyclic gap, as a function of x, is piecewise linear and
// changes slope only where two visit times collide, so evaluating at those
// event positions (plus each start, for the transient from t = 0) gives the
// exact maximum with a witness.
IdleReport idle_time_exact(const RunnerSchedule& s);

// Certified bracket for a general patrolling schedule: samples the fence on
// a grid_dx grid (both endpoints of a segment included), computes each
// sample's exact max unvisited gap from trajectory crossings, and returns
// [g, g + 2*grid_dx/v_min] via the Lipschitz shift bound. A sample that is
// never visited makes the idle time unbounded.
IdleReport idle_time_estimate(const PatrolSchedule& s, const Rational& grid_dx);

// Constant-speed circular schedule as a patrol schedule (one lap per period).
PatrolSchedule to_patrol(const RunnerSchedule& s);

}  // namespace trackrun
