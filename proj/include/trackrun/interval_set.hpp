#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "trackrun/core.hpp"
#include "trackrun/rational.hpp"

namespace trackrun {

// One maximal closed arc of the time circle [0, P). lo == hi is a single
// point; lo > hi wraps through the seam and means [lo, P) followed by
// [0, hi]. At most one part of a set wraps.
struct CirclePart {
    Rational lo;
    Rational hi;

    bool wraps() const { return lo > hi; }
    bool is_point() const { return lo == hi; }
    bool operator==(const CirclePart& o) const { return lo == o.lo && hi == o.hi; }
};

// An exact periodic subset of the time axis: a period P > 0 plus a canonical
// list of closed, pairwise non-touching arcs of the circle [0, P).
// Membership of any t >= 0 is decided by t mod P. Values are immutable;
// operations return fresh sets.
class PeriodicIntervalSet {
  public:
    static PeriodicIntervalSet empty(const Rational& period);
    static PeriodicIntervalSet all(const Rational& period);

    // Builds a set from arbitrary closed intervals [lo, hi] of the real
    // line (hi >= lo); each is reduced mod period, and overlapping or
    // touching pieces are merged. An interval of length >= period covers
    // everything.
    static PeriodicIntervalSet from_intervals(
        const Rational& period,
        const std::vector<std::pair<Rational, Rational>>& intervals);

    const Rational& period() const { return period_; }
    bool is_empty() const { return !full_ && parts_.empty(); }
    bool covers_period() const { return full_; }
    const std::vector<CirclePart>& parts() const { return parts_; }

    Rational measure_per_period() const;
    bool contains(const Rational& t) const;

    // Same set expressed with period new_period, which must be a positive
    // integer multiple of the current one.
    PeriodicIntervalSet lift_to(const Rational& new_period) const;

    // Smallest member t >= from (from >= 0); nullopt iff the set is empty.
    // When present, the result is < from + period.
    std::optional<Rational> first_point_at_or_after(const Rational& from) const;

    // A member strictly greater than `from`: the smallest one when `from`
    // is not interior to a part; the far endpoint of the containing part
    // when it is (a closed set has no smallest member > an interior point);
    // from + period when the set covers everything.
    std::optional<Rational> first_point_strictly_after(const Rational& from) const;

    // Split linear form over [0, P]: wrap parts emit [0, hi] and [lo, P];
    // the full set emits [0, P]. Sorted by lower endpoint.
    std::vector<std::pair<Rational, Rational>> split_intervals() const;

    // "period,P" header then one "lo,hi" row per split interval.
    void write_csv(std::ostream& os) const;

    bool operator==(const PeriodicIntervalSet& o) const;

  private:
    PeriodicIntervalSet(Rational period, bool full, std::vector<CirclePart> parts)
        : period_(std::move(period)), full_(full), parts_(std::move(parts)) {}

    enum class BoolOp { kUnion, kIntersect };
    static PeriodicIntervalSet boolean_op(const PeriodicIntervalSet& a,
                                          const PeriodicIntervalSet& b, BoolOp op);

    friend PeriodicIntervalSet set_union(const PeriodicIntervalSet&,
                                         const PeriodicIntervalSet&);
    friend PeriodicIntervalSet set_intersect(const PeriodicIntervalSet&,
                                             const PeriodicIntervalSet&);
    friend PeriodicIntervalSet set_complement(const PeriodicIntervalSet&);
    friend PeriodicIntervalSet occupancy(const Runner&, const Arc&, const Circle&);

    Rational period_;
    bool full_ = false;
    std::vector<CirclePart> parts_;
};

// Exact boolean algebra. Binary operations lift both operands to the least
// common period first. Complement returns the closure of the open
// complement, so zero-length gaps vanish and isolated points get swallowed.
PeriodicIntervalSet set_union(const PeriodicIntervalSet& a, const PeriodicIntervalSet& b);
PeriodicIntervalSet set_intersect(const PeriodicIntervalSet& a, const PeriodicIntervalSet& b);
PeriodicIntervalSet set_complement(const PeriodicIntervalSet& a);

// Least common period of the given sets (lcm of the rational periods).
Rational common_period(const std::vector<PeriodicIntervalSet>& sets);

// {t >= 0 : position(r, t) in arc} for a rational-speed runner: a single
// arc of the time circle with period L/v and measure arc.length/v.
PeriodicIntervalSet occupancy(const Runner& r, const Arc& arc, const Circle& c);

}  // namespace trackrun
