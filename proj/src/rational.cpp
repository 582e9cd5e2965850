#include "trackrun/rational.hpp"

#include <cctype>

#include "trackrun/errors.hpp"

namespace trackrun {

Rational make_rational(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) {
        throw ValidationError("rational with zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational make_rational(long num, long den) {
    return make_rational(Integer(num), Integer(den));
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Integer parse_integer(const std::string& text, const std::string& whole) {
    std::string digits = text;
    bool negative = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        negative = digits[0] == '-';
        digits.erase(0, 1);
    }
    if (!all_digits(digits)) {
        throw ValidationError("malformed rational \"" + whole + "\"");
    }
    Integer v(digits, 10);
    return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rational(parse_integer(text, text));
    }
    if (text.find('/', slash + 1) != std::string::npos) {
        throw ValidationError("malformed rational \"" + text + "\"");
    }
    Integer num = parse_integer(text.substr(0, slash), text);
    std::string den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
        throw ValidationError("malformed rational \"" + text + "\"");
    }
    Integer den(den_text, 10);
    if (sgn(den) == 0) {
        throw ValidationError("rational \"" + text + "\" has zero denominator");
    }
    return make_rational(num, den);
}

std::string to_rational_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_compact_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return to_rational_string(x);
}

Integer floor_to_integer(const Rational& x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

Rational mod_positive(const Rational& x, const Rational& m) {
    if (sgn(m) <= 0) throw ValidationError("modulus must be positive");
    Rational r = x - Rational(floor_to_integer(x / m)) * m;
    // Guard against the representable edge r == m (cannot happen with exact
    // arithmetic, but cheap to assert the contract).
    if (sgn(r) < 0 || r >= m) throw Error("mod_positive out of range");
    return r;
}

Integer round_to_integer(const Rational& x) {
    return floor_to_integer(x + make_rational(1, 2));
}

Rational rational_lcm(const Rational& x, const Rational& y) {
    if (sgn(x) <= 0 || sgn(y) <= 0) {
        throw ValidationError("rational_lcm needs positive operands");
    }
    Integer n = lcm(x.get_num(), y.get_num());
    Integer d = gcd(x.get_den(), y.get_den());
    return make_rational(n, d);
}

Rational rational_gcd(const Rational& x, const Rational& y) {
    if (sgn(x) <= 0 || sgn(y) <= 0) {
        throw ValidationError("rational_gcd needs positive operands");
    }
    Integer n = gcd(x.get_num(), y.get_num());
    Integer d = lcm(x.get_den(), y.get_den());
    return make_rational(n, d);
}

double to_double(const Rational& x) { return x.get_d(); }

}  // namespace trackrun
