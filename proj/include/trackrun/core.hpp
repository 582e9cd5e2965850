#pragma once

#include <cstdint>
#include <vector>

#include "trackrun/rational.hpp"

namespace trackrun {

struct Circle {
    Rational length;
};

Circle unit_circle();
Circle make_circle(const Rational& length);  // length > 0

// Closed arc [start, start + length] mod circle length. May wrap.
struct Arc {
    Rational start;
    Rational length;
};

// Normalizes start into [0, L) and validates 0 < length <= L.
Arc make_arc(const Circle& c, const Rational& start, const Rational& length);

// The closed arc covering everything the given arc does not, sharing its
// boundary points. Requires length < L.
Arc complement_arc(const Arc& arc, const Circle& c);

// A speed is coeff * sqrt(radicand) with coeff > 0 rational and radicand a
// squarefree positive integer; radicand 1 means the speed is rational.
struct SpeedValue {
    Rational coeff;
    std::uint64_t radicand = 1;
};

SpeedValue make_speed(const Rational& coeff, std::uint64_t radicand = 1);
bool is_rational_speed(const SpeedValue& v);
bool speed_equal(const SpeedValue& a, const SpeedValue& b);
bool speed_less(const SpeedValue& a, const SpeedValue& b);
double speed_to_double(const SpeedValue& v);

// 0 if d is squarefree, otherwise the smallest prime p with p*p | d.
std::uint64_t square_factor(std::uint64_t d);

struct Runner {
    SpeedValue speed;
    Rational start;  // position in [0, L)
};

struct RunnerSchedule {
    Circle circle;
    std::vector<Runner> runners;
};

// Validates positive speeds and start positions in [0, L). Distinct speeds
// are NOT enforced here; the operations whose theorems need them call
// require_distinct_speeds.
RunnerSchedule make_schedule(const Circle& c, std::vector<Runner> runners);

void require_distinct_speeds(const RunnerSchedule& s);
void require_rational_speeds(const RunnerSchedule& s);

// nth harmonic number, exactly. harmonic(0) = 0.
Rational harmonic(unsigned long n);

// Decides H_n >= target with certified arithmetic; works for n far beyond
// what an exact sum could reach.
bool harmonic_at_least(unsigned long n, const Rational& target);

// Smallest n <= limit with H_n >= target (target > 0), or 0 when H_limit
// stays below the target.
unsigned long harmonic_threshold(const Rational& target, unsigned long limit);

// (start + v t) mod L for rational v; throws on irrational speed (those go
// through kronecker::eval_position).
Rational position(const Runner& r, const Rational& t, const Circle& c);

// Closed-arc membership; endpoints count as inside.
bool in_arc(const Rational& x, const Arc& arc, const Circle& c);

}  // namespace trackrun
