#pragma once

#include <gmpxx.h>

#include <string>

namespace trackrun {

// All exact arithmetic rides on GMP. mpq_class keeps results of +,-,*,/
// canonical (lowest terms, positive denominator); anything built from raw
// numerator/denominator pairs goes through make_rational, which canonicalizes
// and rejects zero denominators.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

// Parses "p/q" or a bare integer "p". Throws ValidationError on anything
// else, including "3/0".
Rational parse_rational(const std::string& text);

// Canonical wire form "p/q" with the denominator always spelled out:
// "1/2", "0/1", "25/12".
std::string to_rational_string(const Rational& x);

// "p" when the denominator is 1, else "p/q"; for human-facing messages.
std::string to_compact_string(const Rational& x);

Integer floor_to_integer(const Rational& x);

// x mod m in [0, m); requires m > 0.
Rational mod_positive(const Rational& x, const Rational& m);

// Nearest integer to x, ties rounded up.
Integer round_to_integer(const Rational& x);

// For positive rationals a/b, c/d in lowest terms:
//   lcm = lcm(a,c)/gcd(b,d)   (smallest rational both divide integrally)
//   gcd = gcd(a,c)/lcm(b,d)   (largest rational dividing both integrally)
Rational rational_lcm(const Rational& x, const Rational& y);
Rational rational_gcd(const Rational& x, const Rational& y);

double to_double(const Rational& x);

}  // namespace trackrun
