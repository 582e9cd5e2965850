#include "trackrun/core.hpp"

#include <algorithm>
#include <cmath>

#include "trackrun/errors.hpp"

namespace trackrun {

Circle unit_circle() { return Circle{make_rational(1)}; }

Circle make_circle(const Rational& length) {
    if (sgn(length) <= 0) throw ValidationError("circle length must be positive");
    return Circle{length};
}

Arc make_arc(const Circle& c, const Rational& start, const Rational& length) {
    if (sgn(length) <= 0 || length > c.length) {
        throw ValidationError("arc length must lie in (0, L], got " +
                              to_compact_string(length));
    }
    return Arc{mod_positive(start, c.length), length};
}

Arc complement_arc(const Arc& arc, const Circle& c) {
    if (arc.length >= c.length) {
        throw ValidationError("arc covers the whole circle; complement is empty");
    }
    return Arc{mod_positive(arc.start + arc.length, c.length),
               c.length - arc.length};
}

std::uint64_t square_factor(std::uint64_t d) {
    std::uint64_t rest = d;
    auto check = [&rest](std::uint64_t p) -> bool {
        if (rest % p == 0) {
            rest /= p;
            if (rest % p == 0) return true;
        }
        return false;
    };
    if (check(2)) return 2;
    for (std::uint64_t p = 3; p <= 10'000'000 && p * p <= rest; p += 2) {
        if (check(p)) return p;
    }
    // Whatever is left has no prime factor <= 1e7, so it is 1, a prime, a
    // product of two distinct primes, or a prime square. Only the square is
    // non-squarefree, and an integer sqrt detects it.
    if (rest > 1) {
        Integer z(static_cast<unsigned long>(rest));
        Integer r = sqrt(z);
        if (r * r == z) return static_cast<std::uint64_t>(r.get_ui());
    }
    return 0;
}

SpeedValue make_speed(const Rational& coeff, std::uint64_t radicand) {
    if (sgn(coeff) <= 0) {
        throw ValidationError("speed coefficient must be positive");
    }
    if (radicand == 0) throw ValidationError("radicand must be a positive integer");
    if (std::uint64_t p = square_factor(radicand); p != 0) {
        throw ValidationError("radicand " + std::to_string(radicand) +
                              " is not squarefree (square factor " +
                              std::to_string(p) + "^2)");
    }
    return SpeedValue{coeff, radicand};
}

bool is_rational_speed(const SpeedValue& v) { return v.radicand == 1; }

bool speed_equal(const SpeedValue& a, const SpeedValue& b) {
    return a.radicand == b.radicand && a.coeff == b.coeff;
}

bool speed_less(const SpeedValue& a, const SpeedValue& b) {
    // Both positive, so compare squares: coeff^2 * radicand.
    Rational lhs = a.coeff * a.coeff * make_rational(static_cast<long>(a.radicand));
    Rational rhs = b.coeff * b.coeff * make_rational(static_cast<long>(b.radicand));
    return lhs < rhs;
}

double speed_to_double(const SpeedValue& v) {
    return to_double(v.coeff) * std::sqrt(static_cast<double>(v.radicand));
}

RunnerSchedule make_schedule(const Circle& c, std::vector<Runner> runners) {
    for (std::size_t i = 0; i < runners.size(); ++i) {
        const Runner& r = runners[i];
        if (sgn(r.start) < 0 || r.start >= c.length) {
            throw ValidationError("runner " + std::to_string(i) +
                                  ": start position " + to_compact_string(r.start) +
                                  " outside [0, L)");
        }
        if (sgn(r.speed.coeff) <= 0) {
            throw ValidationError("runner " + std::to_string(i) +
                                  ": speed must be positive");
        }
    }
    return RunnerSchedule{c, std::move(runners)};
}

void require_distinct_speeds(const RunnerSchedule& s) {
    for (std::size_t i = 0; i < s.runners.size(); ++i) {
        for (std::size_t j = i + 1; j < s.runners.size(); ++j) {
            if (speed_equal(s.runners[i].speed, s.runners[j].speed)) {
                throw ValidationError("runners " + std::to_string(i) + " and " +
                                      std::to_string(j) + " share the same speed");
            }
        }
    }
}

void require_rational_speeds(const RunnerSchedule& s) {
    for (std::size_t i = 0; i < s.runners.size(); ++i) {
        if (!is_rational_speed(s.runners[i].speed)) {
            throw ValidationError("runner " + std::to_string(i) +
                                  " has an irrational speed; this operation "
                                  "needs rational speeds");
        }
    }
}

Rational harmonic(unsigned long n) {
    Rational h = 0;
    for (unsigned long i = 1; i <= n; ++i) {
        h += make_rational(1, static_cast<long>(i));
    }
    return h;
}

namespace {

// Smallest n <= limit with H_n >= target (target > 0), or 0 when H_limit
// stays below. Exact mpq summation is fine for a few thousand terms; past
// that the denominators explode (~e^n), so the tail runs on certified
// fixed-point bounds: sum of floor(2^prec / i) <= 2^prec * H <= sum of
// ceil(2^prec / i), total slack <= n / 2^prec. Ambiguity (target inside the
// bound gap) escalates precision and, as a last resort, falls back to exact
// summation near the straddle point.
constexpr unsigned long kExactTerms = 4096;

unsigned long harmonic_threshold_impl(const Rational& target, unsigned long limit) {
    if (sgn(target) <= 0) throw ValidationError("harmonic threshold target must be positive");
    Rational h = 0;
    const unsigned long exact_cap = std::min(limit, kExactTerms);
    for (unsigned long n = 1; n <= exact_cap; ++n) {
        h += make_rational(1, static_cast<long>(n));
        if (h >= target) return n;
    }
    if (limit <= exact_cap) return 0;

    const Integer tnum = target.get_num();
    const Integer tden = target.get_den();
    for (unsigned prec : {96u, 224u, 480u}) {
        Integer scale = Integer(1) << prec;
        Integer lo = (h.get_num() << prec) / h.get_den();  // floor
        Integer hi = lo + 1;
        const Integer rhs = tnum << prec;  // compare lo*tden vs tnum*2^prec
        unsigned long n = exact_cap;
        long ambiguous_at = -1;
        while (n < limit) {
            ++n;
            Integer t_lo, t_hi;
            mpz_fdiv_q_ui(t_lo.get_mpz_t(), scale.get_mpz_t(), n);
            mpz_cdiv_q_ui(t_hi.get_mpz_t(), scale.get_mpz_t(), n);
            lo += t_lo;
            hi += t_hi;
            if (lo * tden >= rhs) return n;
            if (hi * tden >= rhs) {
                ambiguous_at = static_cast<long>(n);
                break;
            }
        }
        if (ambiguous_at < 0) return 0;
        if (static_cast<unsigned long>(ambiguous_at) <= kExactTerms * 8) {
            // Close enough to resolve exactly from the checkpoint.
            Rational he = h;
            for (unsigned long m = exact_cap + 1; m <= limit; ++m) {
                he += make_rational(1, static_cast<long>(m));
                if (he >= target) return m;
            }
            return 0;
        }
        // Retry the whole tail at higher precision.
    }
    throw PrecisionExhaustedError(
        "harmonic threshold straddles the certified bounds at maximum precision");
}

}  // namespace

bool harmonic_at_least(unsigned long n, const Rational& target) {
    return harmonic_threshold_impl(target, n) != 0;
}

// Shared with constructions::min_runner_count.
unsigned long harmonic_threshold(const Rational& target, unsigned long limit) {
    return harmonic_threshold_impl(target, limit);
}

Rational position(const Runner& r, const Rational& t, const Circle& c) {
    if (!is_rational_speed(r.speed)) {
        throw ValidationError(
            "position() is exact-only; irrational speeds go through "
            "kronecker eval_position");
    }
    return mod_positive(r.start + r.speed.coeff * t, c.length);
}

bool in_arc(const Rational& x, const Arc& arc, const Circle& c) {
    if (arc.length == c.length) return true;
    Rational rel = mod_positive(x - arc.start, c.length);
    return rel <= arc.length;
}

}  // namespace trackrun
