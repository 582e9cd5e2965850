#pragma once

#include <optional>
#include <vector>

#include "trackrun/core.hpp"
#include "trackrun/interval_set.hpp"

namespace trackrun {

// Schedule with integer speeds 1..k whose union of complement-arc visits
// covers the whole period, so at every t >= 0 some runner is outside the
// shade arc. Runner i has speed i and start (-i*a*H_{i-1}) mod 1 before
// rotation; exit_times holds t_0..t_k with t_i = a*H_i.
struct NoShadeConstruction {
    RunnerSchedule schedule;
    Arc shade_arc;
    Rational complement_length;  // a = 1 - shade length
    unsigned long runner_count = 0;
    std::vector<Rational> exit_times;
};

struct Verdict {
    bool holds = false;
    // Present iff holds is false: a time at which every runner sits inside
    // the shade arc, checkable by direct position evaluation.
    std::optional<Rational> witness;
};

inline constexpr unsigned long kDefaultRunnerCap = 10'000'000;

// Smallest k with H_k >= 1/a for a in (0, 1]. Throws InfeasibleScaleError
// with the paper-scale bound (k ~ exp(1/a)) when k would exceed the cap.
unsigned long min_runner_count(const Rational& a,
                               unsigned long cap = kDefaultRunnerCap);

// Builds the covering construction for a shade arc of length < 1 on the
// unit circle. If k is absent, the smallest feasible k is used; an explicit
// k must satisfy H_k >= 1/a. Coordinates are rotated so the complement of
// the shade arc plays the role of [0, a], then rotated back.
NoShadeConstruction build_no_shade(const Arc& shade_arc,
                                   std::optional<unsigned long> k = std::nullopt,
                                   unsigned long cap = kDefaultRunnerCap);

// Checks that at every time some runner is outside shade_arc, by testing
// whether the union of complement-arc occupancy sets covers the common
// period. On failure the witness is the midpoint of the first uncovered gap.
Verdict verify_no_shade(const RunnerSchedule& schedule, const Arc& shade_arc);

// Speeds v_1..v_k from the recursion v_1 = 1, speeds(k, a) =
// speeds(k-1, a/2) + [(2/a) * last]; strictly increasing for a < 1.
std::vector<SpeedValue> build_rendezvous_speeds(unsigned long k, const Rational& a);

// Smallest time strictly greater than after_t at which every runner is
// inside the closed arc, via exact intersection of occupancy sets; nullopt
// iff the intersection is provably empty. When after_t lies inside an
// intersection interval, the interval's far endpoint is returned (a closed
// set has no smallest member beyond an interior point).
std::optional<Rational> find_rendezvous_time(const RunnerSchedule& schedule,
                                             const Arc& arc, const Rational& after_t);

}  // namespace trackrun
