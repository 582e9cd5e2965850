#include <cmath>
#include <random>

#include <doctest.h>

#include "trackrun/constructions.hpp"
#include "trackrun/errors.hpp"
#include "trackrun/interval_set.hpp"

using namespace trackrun;

namespace {

// Independent oracle: smallest k with H_k >= 1/a by direct exact summation.
unsigned long min_count_oracle(const Rational& a) {
    const Rational target = 1 / a;
    Rational h = 0;
    for (unsigned long k = 1;; ++k) {
        h += make_rational(1, static_cast<long>(k));
        if (h >= target) return k;
    }
}

Rational random_start(std::mt19937& rng, long den = 1000) {
    std::uniform_int_distribution<long> num(0, den - 1);
    return make_rational(num(rng), den);
}

// The proof's constructive rendezvous time: find t' > T recursively for the
// first k-1 runners in the half arc, then wait for runner k to reach the
// arc's start; the slower runners cannot have drifted past the half mark.
// Pure positional reasoning, independent of the interval engine.
Rational recursive_rendezvous_oracle(const RunnerSchedule& s, const Arc& arc,
                                     const Rational& after) {
    const Circle& c = s.circle;
    const std::size_t k = s.runners.size();
    if (k == 1) {
        const Runner& r = s.runners.front();
        const Rational pos = position(r, after, c);
        const Rational to_start = mod_positive(arc.start - pos, c.length);
        Rational t = after + to_start / r.speed.coeff;
        if (t == after) t += c.length / r.speed.coeff;  // strictly later lap
        return t;
    }
    RunnerSchedule prefix{c, {s.runners.begin(), s.runners.end() - 1}};
    const Arc half = make_arc(c, arc.start, arc.length / 2);
    const Rational t1 = recursive_rendezvous_oracle(prefix, half, after);
    const Runner& last = s.runners.back();
    const Rational pos = position(last, t1, c);
    const Rational to_start = mod_positive(arc.start - pos, c.length);
    return t1 + to_start / last.speed.coeff;
}

}  // namespace

TEST_CASE("min_runner_count matches the exact-summation oracle") {
    CHECK(min_runner_count(Rational(1)) == 1);
    CHECK(min_runner_count(make_rational(1, 2)) == 4);
    CHECK(min_runner_count(make_rational(1, 3)) == 11);
    for (long num = 1; num <= 9; ++num) {
        const Rational a = make_rational(num, 10);
        CHECK(min_runner_count(a) == min_count_oracle(a));
    }
    CHECK_THROWS_AS(min_runner_count(Rational(0)), ValidationError);
    CHECK_THROWS_AS(min_runner_count(Rational(2)), ValidationError);
}

TEST_CASE("min_runner_count stays below the paper's exponential bound") {
    for (long den = 2; den <= 6; ++den) {
        const Rational a = make_rational(1, den);
        const unsigned long k = min_runner_count(a);
        const double bound = std::exp(to_double(1 / a));
        CHECK(static_cast<double>(k) <= std::ceil(bound) + 0.5);
    }
}

TEST_CASE("infeasible scale reports the exponential requirement") {
    try {
        min_runner_count(make_rational(1, 1000));
        FAIL("expected InfeasibleScaleError");
    } catch (const InfeasibleScaleError& e) {
        CHECK(std::string(e.what()).find("exp(1000)") != std::string::npos);
    }
}

TEST_CASE("no-shade construction for shade length 1/2") {
    const Circle c = unit_circle();
    const Arc shade = make_arc(c, make_rational(1, 2), make_rational(1, 2));
    const NoShadeConstruction built = build_no_shade(shade);
    CHECK(built.runner_count == 4);
    CHECK(built.complement_length == make_rational(1, 2));
    REQUIRE(built.schedule.runners.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(built.schedule.runners[i].speed.coeff == Rational(static_cast<long>(i + 1)));
        CHECK(built.schedule.runners[i].speed.radicand == 1);
    }
    CHECK(built.schedule.runners[0].start == 0);
    CHECK(built.schedule.runners[1].start == 0);
    CHECK(built.schedule.runners[2].start == make_rational(3, 4));
    CHECK(built.schedule.runners[3].start == make_rational(1, 3));
    REQUIRE(built.exit_times.size() == 5);
    CHECK(built.exit_times[0] == 0);
    CHECK(built.exit_times[1] == make_rational(1, 2));
    CHECK(built.exit_times[2] == make_rational(3, 4));
    CHECK(built.exit_times[3] == make_rational(11, 12));
    CHECK(built.exit_times[4] == make_rational(25, 24));
    CHECK(built.exit_times.back() >= 1);  // a * H_k >= 1 closes the period
}

TEST_CASE("runner i owns the covering window [a H_{i-1}, a H_i]") {
    const Circle c = unit_circle();
    const Arc shade = make_arc(c, make_rational(1, 2), make_rational(1, 2));
    const NoShadeConstruction built = build_no_shade(shade);
    const Arc comp = complement_arc(shade, c);
    for (std::size_t i = 0; i < built.schedule.runners.size(); ++i) {
        const auto occ = occupancy(built.schedule.runners[i], comp, c).lift_to(Rational(1));
        const auto window = PeriodicIntervalSet::from_intervals(
            Rational(1), {{built.exit_times[i], built.exit_times[i + 1]}});
        CHECK(set_intersect(occ, window) == window);
    }
}

TEST_CASE("verification of the construction and its truncation") {
    const Circle c = unit_circle();
    const Arc shade = make_arc(c, make_rational(1, 2), make_rational(1, 2));
    const NoShadeConstruction built = build_no_shade(shade);
    CHECK(verify_no_shade(built.schedule, shade).holds);

    RunnerSchedule truncated{c, {built.schedule.runners.begin(),
                                 built.schedule.runners.begin() + 3}};
    const Verdict v = verify_no_shade(truncated, shade);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness > make_rational(11, 12));
    CHECK(*v.witness < 1);
    for (const Runner& r : truncated.runners) {
        CHECK(in_arc(position(r, *v.witness, c), shade, c));
    }
}

TEST_CASE("construction verifies across a grid of shade lengths") {
    const Circle c = unit_circle();
    for (long num = 1; num <= 15; ++num) {
        const Rational len = make_rational(num, 20);  // 1/20 .. 3/4
        const Arc shade = make_arc(c, Rational(1) - len, len);
        const NoShadeConstruction built = build_no_shade(shade);
        CHECK(verify_no_shade(built.schedule, shade).holds);
    }
    // Rotated shade arcs verify too.
    const Arc rotated = make_arc(c, make_rational(1, 3), make_rational(1, 2));
    CHECK(verify_no_shade(build_no_shade(rotated).schedule, rotated).holds);
}

TEST_CASE("degenerate no-shade inputs are rejected") {
    const Circle c = unit_circle();
    CHECK_THROWS_AS(build_no_shade(make_arc(c, Rational(0), Rational(1))),
                    ValidationError);
    const Arc shade = make_arc(c, make_rational(1, 2), make_rational(1, 2));
    CHECK_THROWS_AS(build_no_shade(shade, 3ul), ValidationError);  // H_3 < 2
    CHECK(build_no_shade(shade, 5ul).runner_count == 5);           // larger k is fine
}

TEST_CASE("rendezvous speed recursion") {
    CHECK(build_rendezvous_speeds(1, make_rational(1, 2)).size() == 1);
    CHECK(build_rendezvous_speeds(1, make_rational(9, 10)).front().coeff == 1);

    const auto two = build_rendezvous_speeds(2, make_rational(1, 2));
    REQUIRE(two.size() == 2);
    CHECK(two[0].coeff == 1);
    CHECK(two[1].coeff == 4);

    const auto four = build_rendezvous_speeds(4, make_rational(1, 2));
    REQUIRE(four.size() == 4);
    CHECK(four[0].coeff == 1);
    CHECK(four[1].coeff == 16);
    CHECK(four[2].coeff == 128);
    CHECK(four[3].coeff == 512);
    // Last ratio is exactly 2/a, and dropping the last runner recovers the
    // recursion at the halved arc.
    CHECK(four[3].coeff / four[2].coeff == 2 / make_rational(1, 2));
    const auto three = build_rendezvous_speeds(3, make_rational(1, 4));
    for (std::size_t i = 0; i < 3; ++i) CHECK(four[i].coeff == three[i].coeff);
    for (std::size_t i = 0; i + 1 < four.size(); ++i) {
        CHECK(speed_less(four[i], four[i + 1]));
    }
    CHECK_THROWS_AS(build_rendezvous_speeds(2, Rational(1)), ValidationError);
    CHECK_THROWS_AS(build_rendezvous_speeds(0, make_rational(1, 2)), ValidationError);
}

TEST_CASE("rendezvous time finds the first intersection point after T") {
    const Circle c = unit_circle();
    const RunnerSchedule s = make_schedule(
        c, {Runner{make_speed(Rational(1)), Rational(0)},
            Runner{make_speed(Rational(4)), Rational(0)}});
    const Arc arc = make_arc(c, Rational(0), make_rational(1, 2));
    const auto t = find_rendezvous_time(s, arc, make_rational(1, 5));
    REQUIRE(t.has_value());
    CHECK(*t == make_rational(1, 4));

    // All runners start inside: some strictly positive time exists.
    const auto t0 = find_rendezvous_time(s, arc, Rational(0));
    REQUIRE(t0.has_value());
    CHECK(*t0 > 0);
    for (const Runner& r : s.runners) CHECK(in_arc(position(r, *t0, c), arc, c));
}

TEST_CASE("no interval of shade time exists against a no-shade construction") {
    const Circle c = unit_circle();
    const Arc shade = make_arc(c, make_rational(1, 2), make_rational(1, 2));
    const NoShadeConstruction built = build_no_shade(shade);

    PeriodicIntervalSet inside = occupancy(built.schedule.runners.front(), shade, c);
    for (std::size_t i = 1; i < built.schedule.runners.size(); ++i) {
        inside = set_intersect(inside, occupancy(built.schedule.runners[i], shade, c));
    }
    // Closed arcs share boundary points with the closed complement, so the
    // handoff instants (runner i leaving [0,a] exactly as runner i+1 enters)
    // survive in the intersection; but they are isolated points. Covering
    // holds iff the simultaneous-shade set has measure zero.
    CHECK(inside.measure_per_period() == 0);
    const auto t = find_rendezvous_time(built.schedule, shade, Rational(0));
    if (t.has_value()) {
        const Arc comp = complement_arc(shade, c);
        bool someone_on_boundary = false;
        for (const Runner& r : built.schedule.runners) {
            const Rational pos = position(r, *t, c);
            CHECK(in_arc(pos, shade, c));
            someone_on_boundary = someone_on_boundary || in_arc(pos, comp, c);
        }
        CHECK(someone_on_boundary);
    }

    // Strictly inside the shade interior the intersection really is empty.
    const Arc interior_band = make_arc(c, make_rational(5, 8), make_rational(1, 4));
    CHECK_FALSE(find_rendezvous_time(built.schedule, interior_band, Rational(0)).has_value());
}

TEST_CASE("duality between covering and rendezvous on random schedules") {
    const Circle c = unit_circle();
    std::mt19937 rng(43);
    std::uniform_int_distribution<long> d(1, 8);
    for (int i = 0; i < 40; ++i) {
        std::vector<Runner> runners;
        const int k = 1 + static_cast<int>(d(rng) % 3);
        for (int j = 0; j < k; ++j) {
            runners.push_back(Runner{make_speed(make_rational(d(rng), d(rng))),
                                     random_start(rng, 24)});
        }
        const RunnerSchedule s = make_schedule(c, std::move(runners));
        const Rational len = make_rational(d(rng), 9);
        if (len >= 1) continue;
        const Arc arc = make_arc(c, random_start(rng, 24), len);
        const bool holds = verify_no_shade(s, arc).holds;
        const bool rendezvous = find_rendezvous_time(s, arc, Rational(0)).has_value();
        CHECK(holds == !rendezvous);
    }
}

TEST_CASE("rendezvous schedules meet after any horizon, and the exact answer "
          "is never later than the proof's constructive time") {
    const Circle c = unit_circle();
    std::mt19937 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const unsigned long k = 2 + trial % 3;
        const Rational a = make_rational(1 + trial % 3, 4);
        const auto speeds = build_rendezvous_speeds(k, a);
        std::vector<Runner> runners;
        for (const auto& sp : speeds) runners.push_back(Runner{sp, random_start(rng)});
        const RunnerSchedule s = make_schedule(c, std::move(runners));
        const Arc arc = make_arc(c, Rational(0), a);
        for (const long T : {0l, 10l, 1000l}) {
            const auto found = find_rendezvous_time(s, arc, Rational(T));
            REQUIRE(found.has_value());
            CHECK(*found > T);
            for (const Runner& r : s.runners) {
                CHECK(in_arc(position(r, *found, c), arc, c));
            }
            const Rational oracle = recursive_rendezvous_oracle(s, arc, Rational(T));
            CHECK(oracle > T);
            for (const Runner& r : s.runners) {
                CHECK(in_arc(position(r, oracle, c), arc, c));
            }
            // The exact search returns the earliest rendezvous whenever T
            // itself is not one, so the constructive time cannot beat it.
            bool inside_at_T = true;
            for (const Runner& r : s.runners) {
                inside_at_T = inside_at_T && in_arc(position(r, Rational(T), c), arc, c);
            }
            if (!inside_at_T) CHECK(*found <= oracle);
        }
    }
}
