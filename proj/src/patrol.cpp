#include "trackrun/patrol.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "trackrun/errors.hpp"
#include "trackrun/interval_set.hpp"

namespace trackrun {

Fence circle_fence(const Rational& length) {
    if (sgn(length) <= 0) throw ValidationError("fence length must be positive");
    return Fence{Fence::Kind::kCircle, length};
}

Fence segment_fence(const Rational& length) {
    if (sgn(length) <= 0) throw ValidationError("fence length must be positive");
    return Fence{Fence::Kind::kSegment, length};
}

PatrolSchedule make_patrol(Fence fence, std::vector<AgentTrajectory> agents) {
    if (sgn(fence.length) <= 0) throw ValidationError("fence length must be positive");
    if (agents.empty()) throw ValidationError("patrol schedule needs at least one agent");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const AgentTrajectory& a = agents[i];
        const std::string who = "agent " + std::to_string(i);
        if (sgn(a.max_speed) <= 0) throw ValidationError(who + ": max speed must be positive");
        if (sgn(a.period) <= 0) throw ValidationError(who + ": period must be positive");
        if (a.breakpoints.size() < 2) {
            throw ValidationError(who + ": trajectory needs at least two breakpoints");
        }
        if (a.breakpoints.front().first != 0) {
            throw ValidationError(who + ": first breakpoint must be at t = 0");
        }
        if (a.breakpoints.back().first != a.period) {
            throw ValidationError(who + ": last breakpoint must be at t = period");
        }
        for (std::size_t s = 0; s + 1 < a.breakpoints.size(); ++s) {
            const auto& [t0, x0] = a.breakpoints[s];
            const auto& [t1, x1] = a.breakpoints[s + 1];
            if (t1 <= t0) {
                throw ValidationError(who + ": breakpoint times must strictly increase");
            }
            const Rational rise = x1 > x0 ? Rational(x1 - x0) : Rational(x0 - x1);
            if (rise > a.max_speed * (t1 - t0)) {
                throw ValidationError(who + ": segment " + std::to_string(s) +
                                      " exceeds the speed bound");
            }
        }
        const Rational& first_x = a.breakpoints.front().second;
        const Rational& last_x = a.breakpoints.back().second;
        if (fence.kind == Fence::Kind::kCircle) {
            if (mod_positive(last_x - first_x, fence.length) != 0) {
                throw ValidationError(who + ": trajectory is not periodic mod fence length");
            }
        } else {
            if (last_x != first_x) {
                throw ValidationError(who + ": trajectory is not periodic");
            }
            for (const auto& [t, x] : a.breakpoints) {
                if (sgn(x) < 0 || x > fence.length) {
                    throw ValidationError(who + ": breakpoint leaves the segment");
                }
            }
        }
    }
    return PatrolSchedule{fence, std::move(agents)};
}

namespace {

struct GapResult {
    Rational length;
    Rational gap_start;
    Rational gap_end;
};

// Largest cyclic gap between consecutive visit times on the time circle.
GapResult max_cyclic_gap(std::vector<Rational> times, const Rational& period) {
    std::sort(times.begin(), times.end());
    GapResult best{Rational(-1), 0, 0};
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const Rational g = times[i + 1] - times[i];
        if (g > best.length) best = GapResult{g, times[i], times[i + 1]};
    }
    const Rational seam = times.front() + period - times.back();
    if (seam > best.length) {
        best = GapResult{seam, times.back(), times.front() + period};
    }
    return best;
}

// Visit times of point x within one common period for a constant-speed
// schedule, plus the transient gap from t = 0 to the first visit.
struct PointVisits {
    std::vector<Rational> times;
    Rational first_visit;
};

PointVisits visits_at(const RunnerSchedule& s, const Rational& x, const Rational& common) {
    PointVisits out;
    bool have_first = false;
    for (const Runner& r : s.runners) {
        const Rational p = s.circle.length / r.speed.coeff;
        const Rational phase = mod_positive((x - r.start) / r.speed.coeff, p);
        if (!have_first || phase < out.first_visit) {
            out.first_visit = phase;
            have_first = true;
        }
        for (Rational t = phase; t < common; t += p) {
            out.times.push_back(t);
        }
    }
    return out;
}

}  // namespace

IdleReport idle_time_exact(const RunnerSchedule& s) {
    require_rational_speeds(s);
    if (s.runners.empty()) throw ValidationError("schedule has no runners");
    const Rational& L = s.circle.length;

    Rational common = L / s.runners.front().speed.coeff;
    for (std::size_t i = 1; i < s.runners.size(); ++i) {
        common = rational_lcm(common, L / s.runners[i].speed.coeff);
    }

    // Candidate positions: pairwise visit collisions plus each start (where
    // a visit phase wraps, which matters for the transient check).
    std::set<Rational> events;
    events.insert(Rational(0));
    for (const Runner& r : s.runners) events.insert(r.start);
    for (std::size_t i = 0; i < s.runners.size(); ++i) {
        for (std::size_t j = i + 1; j < s.runners.size(); ++j) {
            const Rational& vi = s.runners[i].speed.coeff;
            const Rational& vj = s.runners[j].speed.coeff;
            if (vi == vj) continue;  // parallel visit trains never collide
            const Rational diff = 1 / vi - 1 / vj;
            const Rational lattice = rational_gcd(L / vi, L / vj);
            const Rational c0 = s.runners[i].start / vi - s.runners[j].start / vj;
            // Solutions of diff*x = c0 (mod lattice) in [0, L).
            const Rational stride =
                sgn(diff) > 0 ? Rational(lattice / diff) : Rational(lattice / -diff);
            for (Rational x = mod_positive(c0 / diff, stride); x < L; x += stride) {
                events.insert(x);
            }
        }
    }

    IdleReport best;
    best.exact = true;
    best.idle_lo = -1;
    for (const Rational& x : events) {
        PointVisits pv = visits_at(s, x, common);
        GapResult gap = max_cyclic_gap(std::move(pv.times), common);
        // Transient from t = 0 never beats the steady-state gap that ends at
        // the same first visit, but report the max of both as defined.
        if (pv.first_visit > gap.length) {
            gap = GapResult{pv.first_visit, Rational(0), pv.first_visit};
        }
        if (gap.length > best.idle_lo) {
            best.idle_lo = gap.length;
            best.idle_hi = gap.length;
            best.witness_point = x;
            best.witness_gap = {gap.gap_start, gap.gap_end};
        }
    }
    return best;
}

namespace {

// Visit set of level x for one agent over the agent's own period: a point
// per transversal crossing, an interval per dwell at the level.
PeriodicIntervalSet agent_visits(const AgentTrajectory& a, const Fence& fence,
                                 const Rational& x) {
    std::vector<std::pair<Rational, Rational>> pieces;
    for (std::size_t s = 0; s + 1 < a.breakpoints.size(); ++s) {
        const auto& [t0, x0] = a.breakpoints[s];
        const auto& [t1, x1] = a.breakpoints[s + 1];
        const Rational lo = std::min(x0, x1);
        const Rational hi = std::max(x0, x1);
        // Levels identified with x on the fence.
        std::vector<Rational> levels;
        if (fence.kind == Fence::Kind::kSegment) {
            if (x >= lo && x <= hi) levels.push_back(x);
        } else {
            const Rational& L = fence.length;
            for (Rational lvl = x + Rational(floor_to_integer((lo - x) / L)) * L;
                 lvl <= hi; lvl += L) {
                if (lvl >= lo) levels.push_back(lvl);
            }
        }
        if (x0 == x1) {
            if (!levels.empty()) pieces.emplace_back(t0, t1);  // dwell
            continue;
        }
        const Rational slope = (x1 - x0) / (t1 - t0);
        for (const Rational& lvl : levels) {
            const Rational tc = t0 + (lvl - x0) / slope;
            pieces.emplace_back(tc, tc);
        }
    }
    return PeriodicIntervalSet::from_intervals(a.period, pieces);
}

// Largest gap on the circle not covered by the set (0 when it covers
// everything); also reports the gap's arc.
GapResult max_uncovered_gap(const PeriodicIntervalSet& v) {
    const Rational& P = v.period();
    if (v.covers_period()) return GapResult{Rational(0), 0, 0};
    const auto& parts = v.parts();
    if (parts.size() == 1) {
        const CirclePart& p = parts.front();
        if (p.wraps()) return GapResult{p.lo - p.hi, p.hi, p.lo};
        return GapResult{P - (p.hi - p.lo), p.hi, p.lo + P};
    }
    GapResult best{Rational(-1), 0, 0};
    const bool last_wraps = parts.back().wraps();
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const Rational g = parts[i + 1].lo - parts[i].hi;
        if (g > best.length) best = GapResult{g, parts[i].hi, parts[i + 1].lo};
    }
    if (last_wraps) {
        const Rational g = parts.front().lo - parts.back().hi;
        if (g > best.length) best = GapResult{g, parts.back().hi, parts.front().lo};
    } else {
        const Rational g = P - parts.back().hi + parts.front().lo;
        if (g > best.length) best = GapResult{g, parts.back().hi, parts.front().lo + P};
    }
    return best;
}

}  // namespace

IdleReport idle_time_estimate(const PatrolSchedule& s, const Rational& grid_dx) {
    if (sgn(grid_dx) <= 0) throw ValidationError("grid step must be positive");

    Rational v_min = s.agents.front().max_speed;
    for (const AgentTrajectory& a : s.agents) v_min = std::min(v_min, a.max_speed);

    std::vector<Rational> samples;
    for (Rational x = 0; x < s.fence.length; x += grid_dx) samples.push_back(x);
    if (s.fence.kind == Fence::Kind::kSegment) {
        if (samples.empty() || samples.back() != s.fence.length) {
            samples.push_back(s.fence.length);
        }
    }

    IdleReport best;
    best.exact = false;
    best.idle_lo = -1;
    for (const Rational& x : samples) {
        PeriodicIntervalSet visits = agent_visits(s.agents.front(), s.fence, x);
        for (std::size_t i = 1; i < s.agents.size(); ++i) {
            visits = set_union(visits, agent_visits(s.agents[i], s.fence, x));
        }
        if (visits.is_empty()) {
            IdleReport r;
            r.unbounded = true;
            r.witness_point = x;
            return r;
        }
        const GapResult gap = max_uncovered_gap(visits);
        if (gap.length > best.idle_lo) {
            best.idle_lo = gap.length;
            best.witness_point = x;
            best.witness_gap = {gap.gap_start, gap.gap_end};
        }
    }
    best.idle_hi = best.idle_lo + 2 * grid_dx / v_min;
    return best;
}

PatrolSchedule to_patrol(const RunnerSchedule& s) {
    require_rational_speeds(s);
    std::vector<AgentTrajectory> agents;
    agents.reserve(s.runners.size());
    for (const Runner& r : s.runners) {
        const Rational period = s.circle.length / r.speed.coeff;
        AgentTrajectory a;
        a.max_speed = r.speed.coeff;
        a.period = period;
        a.breakpoints = {{Rational(0), r.start}, {period, r.start + s.circle.length}};
        agents.push_back(std::move(a));
    }
    return make_patrol(circle_fence(s.circle.length), std::move(agents));
}

}  // namespace trackrun
