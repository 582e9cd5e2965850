#include "trackrun/constructions.hpp"

#include <string>

#include "trackrun/errors.hpp"

namespace trackrun {

unsigned long min_runner_count(const Rational& a, unsigned long cap) {
    if (sgn(a) <= 0 || a > 1) {
        throw ValidationError("complement length a must lie in (0, 1], got " +
                              to_compact_string(a));
    }
    const Rational target = 1 / a;
    // H_k <= 1 + ln k <= 1 + (7/10) ceil(log2 k); if even the cap cannot
    // reach the target, report the paper-scale answer without looping.
    unsigned long log2cap = 0;
    while ((1ul << log2cap) < cap && log2cap < 63) ++log2cap;
    const Rational cap_upper = 1 + make_rational(7, 10) * Rational(static_cast<long>(log2cap));
    if (target > cap_upper) {
        throw InfeasibleScaleError("infeasible scale: required runner count k ~ exp(" +
                                   to_compact_string(target) + ") exceeds cap " +
                                   std::to_string(cap));
    }
    const unsigned long k = harmonic_threshold(target, cap);
    if (k == 0) {
        throw InfeasibleScaleError("infeasible scale: required runner count k ~ exp(" +
                                   to_compact_string(target) + ") exceeds cap " +
                                   std::to_string(cap));
    }
    return k;
}

NoShadeConstruction build_no_shade(const Arc& shade_arc,
                                   std::optional<unsigned long> k, unsigned long cap) {
    const Circle circle = unit_circle();
    if (shade_arc.length >= 1) {
        throw ValidationError("shade arc length must be < 1, got " +
                              to_compact_string(shade_arc.length));
    }
    if (sgn(shade_arc.length) <= 0) {
        throw ValidationError("shade arc length must be positive");
    }
    const Rational a = 1 - shade_arc.length;
    unsigned long count;
    if (k) {
        count = *k;
        if (count == 0) throw ValidationError("k must be at least 1");
        if (count > cap) {
            throw InfeasibleScaleError("k=" + std::to_string(count) +
                                       " exceeds the runner cap " + std::to_string(cap));
        }
        if (!harmonic_at_least(count, 1 / a)) {
            throw ValidationError("k=" + std::to_string(count) +
                                  " is below the covering threshold: H_k < 1/a = " +
                                  to_compact_string(1 / a));
        }
    } else {
        count = min_runner_count(a, cap);
    }

    // Internally the complement is [0, a]; rotate back by the complement's
    // actual start.
    const Rational offset = mod_positive(shade_arc.start + shade_arc.length, circle.length);
    std::vector<Runner> runners;
    runners.reserve(count);
    std::vector<Rational> exits;
    exits.reserve(count + 1);
    Rational h = 0;  // H_{i-1}
    exits.push_back(Rational(0));
    for (unsigned long i = 1; i <= count; ++i) {
        const Rational speed(static_cast<long>(i));
        const Rational internal_start = mod_positive(-speed * a * h, circle.length);
        runners.push_back(Runner{make_speed(speed),
                                 mod_positive(internal_start + offset, circle.length)});
        h += make_rational(1, static_cast<long>(i));
        exits.push_back(a * h);
    }
    RunnerSchedule schedule = make_schedule(circle, std::move(runners));
    return NoShadeConstruction{std::move(schedule), shade_arc, a, count, std::move(exits)};
}

Verdict verify_no_shade(const RunnerSchedule& schedule, const Arc& shade_arc) {
    require_rational_speeds(schedule);
    if (schedule.runners.empty()) {
        throw ValidationError("schedule has no runners");
    }
    if (shade_arc.length >= schedule.circle.length) {
        // Shade covers the whole circle; every time is a violation.
        return Verdict{false, Rational(0)};
    }
    const Arc comp = complement_arc(shade_arc, schedule.circle);
    PeriodicIntervalSet covered = occupancy(schedule.runners.front(), comp, schedule.circle);
    for (std::size_t i = 1; i < schedule.runners.size(); ++i) {
        covered = set_union(covered, occupancy(schedule.runners[i], comp, schedule.circle));
    }
    if (covered.covers_period()) return Verdict{true, std::nullopt};

    // Midpoint of the first gap: every runner is strictly inside the shade
    // arc there (gap endpoints can have a runner exactly on the boundary,
    // which still counts as covered).
    const PeriodicIntervalSet gaps = set_complement(covered);
    if (gaps.is_empty()) throw Error("uncovered set has no gap");
    const CirclePart& g = gaps.parts().front();
    Rational witness;
    if (g.wraps()) {
        witness = mod_positive(g.lo + (gaps.period() - g.lo + g.hi) / 2, gaps.period());
    } else {
        witness = (g.lo + g.hi) / 2;
    }
    for (const Runner& r : schedule.runners) {
        if (!in_arc(position(r, witness, schedule.circle), shade_arc, schedule.circle)) {
            throw Error("internal: witness fails direct position check");
        }
    }
    return Verdict{false, witness};
}

std::vector<SpeedValue> build_rendezvous_speeds(unsigned long k, const Rational& a) {
    if (k == 0) throw ValidationError("k must be at least 1");
    if (sgn(a) <= 0 || a >= 1) {
        throw ValidationError("arc length a must lie in (0, 1), got " +
                              to_compact_string(a));
    }
    // Level i of the recursion sees the arc halved k-i times.
    std::vector<SpeedValue> speeds;
    speeds.reserve(k);
    speeds.push_back(make_speed(Rational(1)));
    Rational v(1);
    for (unsigned long i = 2; i <= k; ++i) {
        Rational level_a = a;
        for (unsigned long halvings = 0; halvings < k - i; ++halvings) level_a /= 2;
        v = (2 / level_a) * v;
        speeds.push_back(make_speed(v));
    }
    return speeds;
}

std::optional<Rational> find_rendezvous_time(const RunnerSchedule& schedule,
                                             const Arc& arc, const Rational& after_t) {
    require_rational_speeds(schedule);
    if (schedule.runners.empty()) throw ValidationError("schedule has no runners");
    if (sgn(after_t) < 0) throw ValidationError("T must be >= 0");
    PeriodicIntervalSet inside = occupancy(schedule.runners.front(), arc, schedule.circle);
    for (std::size_t i = 1; i < schedule.runners.size(); ++i) {
        if (inside.is_empty()) break;
        inside = set_intersect(inside, occupancy(schedule.runners[i], arc, schedule.circle));
    }
    return inside.first_point_strictly_after(after_t);
}

}  // namespace trackrun
