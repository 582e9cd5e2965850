#include "trackrun/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trackrun/errors.hpp"
#include "trackrun/prefilter.hpp"

namespace trackrun {

IndependenceCertificate check_independence(const std::vector<SpeedValue>& speeds) {
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        if (std::uint64_t p = square_factor(speeds[i].radicand); p != 0) {
            throw ValidationError("speed " + std::to_string(i) + ": radicand " +
                                  std::to_string(speeds[i].radicand) +
                                  " is not squarefree (square factor " +
                                  std::to_string(p) + "^2)");
        }
        if (sgn(speeds[i].coeff) <= 0) {
            throw ValidationError("speed " + std::to_string(i) + " must be positive");
        }
    }
    std::map<std::uint64_t, std::size_t> seen;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        auto [it, inserted] = seen.emplace(speeds[i].radicand, i);
        if (!inserted) {
            return IndependenceCertificate{
                false, std::make_pair(it->second, i),
                "speeds " + std::to_string(it->second) + " and " + std::to_string(i) +
                    " share radicand " + std::to_string(speeds[i].radicand) +
                    ": integer relation q2*x_i - q1*x_j = 0"};
        }
    }
    return IndependenceCertificate{true, std::nullopt, "distinct squarefree radicands"};
}

namespace {

// Certified enclosure of t*coeff*sqrt(d) with width <= 2^-bits. For
// n/m = t*coeff, sqrt(n^2 d * 4^bits) truncated to an integer s gives
// s <= 2^bits * n * sqrt(d) < s + 1, so the value lies in
// [s, s+1] / (m * 2^bits). The integer grows with log2(t*speed); the
// enclosure width does not.
std::pair<Rational, Rational> product_enclosure(const Rational& t, const SpeedValue& v,
                                                unsigned bits) {
    Rational r = t * v.coeff;
    if (v.radicand == 1 || sgn(r) == 0) return {r, r};
    const Integer& n = r.get_num();
    const Integer& m = r.get_den();
    Integer arg = n * n * Integer(static_cast<unsigned long>(v.radicand));
    arg <<= 2 * bits;
    Integer s = sqrt(arg);
    Integer scaled_den = m << bits;
    return {make_rational(s, scaled_den), make_rational(s + 1, scaled_den)};
}

// Tight rational upper bound on coeff*sqrt(d) (64 fractional bits).
Rational speed_upper_bound(const SpeedValue& v) {
    if (v.radicand == 1) return v.coeff;
    Integer arg = Integer(static_cast<unsigned long>(v.radicand)) << 128;
    Integer s = sqrt(arg) + 1;
    return v.coeff * make_rational(s, Integer(1) << 64);
}

enum class ArcClass { kInside, kOutside, kUndecided };

ArcClass classify_against_arc(const PositionEnclosure& e, const Arc& arc) {
    if (arc.length >= 1) return ArcClass::kInside;
    const Rational rel = mod_positive(e.lo - arc.start, Rational(1));
    const Rational width = e.hi - e.lo;
    if (rel + width <= arc.length) return ArcClass::kInside;
    if (rel > arc.length && rel + width < 1) return ArcClass::kOutside;
    return ArcClass::kUndecided;
}

// |g - p - alpha| over the enclosure g in [glo, ghi], for the integer p
// minimizing the certified upper bound (round-to-nearest can sit on the
// wrong side of a half-integer at enclosure width; trying p-1, p, p+1
// settles it deterministically).
struct MarginResult {
    Integer p;
    Rational lo;
    Rational hi;
};

MarginResult certified_margin(const Rational& glo, const Rational& ghi,
                              const Rational& alpha) {
    const Integer p0 = round_to_integer((glo + ghi) / 2 - alpha);
    MarginResult best;
    bool have = false;
    for (int d = -1; d <= 1; ++d) {
        const Integer p = p0 + d;
        const Rational elo = glo - Rational(p) - alpha;
        const Rational ehi = ghi - Rational(p) - alpha;
        Rational mlo, mhi;
        if (sgn(elo) >= 0) {
            mlo = elo;
            mhi = ehi;
        } else if (sgn(ehi) <= 0) {
            mlo = -ehi;
            mhi = -elo;
        } else {
            mlo = 0;
            mhi = std::max(Rational(-elo), ehi);
        }
        if (!have || mhi < best.hi) {
            best = MarginResult{p, mlo, mhi};
            have = true;
        }
    }
    return best;
}

}  // namespace

PositionEnclosure eval_position(const Runner& r, const Rational& t,
                                unsigned precision_bits) {
    if (sgn(t) < 0) throw ValidationError("evaluation time must be >= 0");
    if (precision_bits == 0) throw ValidationError("precision_bits must be positive");
    unsigned bits = precision_bits;
    for (int attempt = 0; attempt < 16; ++attempt) {
        auto [plo, phi] = product_enclosure(t, r.speed, bits);
        const Rational xlo = r.start + plo;
        const Rational xhi = r.start + phi;
        const Integer f = floor_to_integer(xlo);
        if (floor_to_integer(xhi) == f) {
            return PositionEnclosure{xlo - Rational(f), xhi - Rational(f)};
        }
        // Enclosure straddles an integer; the true value is irrational, so
        // narrowing must separate them.
        bits *= 2;
    }
    throw PrecisionExhaustedError("position enclosure keeps straddling an integer");
}

KroneckerQuery make_query(std::vector<Runner> runners, const Arc& arc,
                          const Rational& after, unsigned long budget,
                          unsigned precision_bits) {
    if (runners.empty()) throw ValidationError("query needs at least one runner");
    if (budget == 0) throw ValidationError("budget must be positive");
    if (precision_bits < 64) throw ValidationError("precision_bits must be >= 64");
    if (sgn(arc.length) <= 0 || arc.length > 1) {
        throw ValidationError("arc must live on the unit circle");
    }
    for (std::size_t i = 0; i < runners.size(); ++i) {
        if (sgn(runners[i].start) < 0 || runners[i].start >= 1) {
            throw ValidationError("runner " + std::to_string(i) +
                                  ": start must lie in [0, 1)");
        }
        if (sgn(runners[i].speed.coeff) <= 0) {
            throw ValidationError("runner " + std::to_string(i) +
                                  ": speed must be positive");
        }
    }
    KroneckerQuery q;
    q.arc = arc;
    q.after = after;
    q.budget = budget;
    q.precision_bits = precision_bits;
    q.epsilon = arc.length / 3;
    q.alphas.reserve(runners.size());
    for (const Runner& r : runners) {
        const Rational rotated = mod_positive(r.start - arc.start, Rational(1));
        q.alphas.push_back(arc.length / 2 + 1 - rotated);
    }
    q.runners = std::move(runners);
    return q;
}

SearchResult kronecker_search(const KroneckerQuery& q) {
    if (q.runners.empty()) throw ValidationError("query has no runners");
    if (q.alphas.size() != q.runners.size()) {
        throw ValidationError("query has " + std::to_string(q.alphas.size()) +
                              " targets for " + std::to_string(q.runners.size()) +
                              " runners");
    }
    if (sgn(q.epsilon) <= 0) throw ValidationError("epsilon must be positive");

    const std::size_t n = q.runners.size();
    Rational max_speed_up = speed_upper_bound(q.runners.front().speed);
    for (std::size_t i = 1; i < n; ++i) {
        max_speed_up = std::max(max_speed_up, speed_upper_bound(q.runners[i].speed));
    }
    const Rational step = q.arc.length / (3 * max_speed_up);

    // Prefilter model in the rotated frame: position_m(j) ~
    // frac(beta'_m + speed_m*(T + j*step)), accepted when the circle
    // distance to a/2 is <= epsilon. The double-precision model y = A + j*S
    // carries absolute error below 2^-48 * (1 + |A| + budget*|S|): inputs
    // are correctly rounded (<= 4 ulps combined), the fma adds half an ulp
    // of the result, and circle distance is 1-Lipschitz in y even across
    // the frac wrap. Probes outside threshold = epsilon + error are
    // certifiably rejectable; candidates still get the exact treatment.
    std::vector<ProbeBand> bands(n);
    const double step_d = to_double(step);
    const double after_d = to_double(q.after);
    const double center = to_double(q.arc.length / 2);
    const double eps_d = to_double(q.epsilon);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = speed_to_double(q.runners[i].speed);
        const double beta_rot =
            to_double(mod_positive(q.runners[i].start - q.arc.start, Rational(1)));
        const double a_term = beta_rot + xi * after_d;
        const double s_term = xi * step_d;
        const double err = std::ldexp(1.0 + std::fabs(a_term) +
                                          static_cast<double>(q.budget) * std::fabs(s_term),
                                      -48);
        bands[i] = ProbeBand{a_term, s_term, center,
                             eps_d + err + std::ldexp(1.0, -50)};
    }
    const PrefilterFn prefilter = select_prefilter();

    constexpr std::size_t kBlock = 4096;
    std::uint64_t words[kBlock / 64];

    for (std::uint64_t block_start = 1; block_start <= q.budget; block_start += kBlock) {
        const std::size_t count = static_cast<std::size_t>(
            std::min<std::uint64_t>(kBlock, q.budget - block_start + 1));
        prefilter(bands.data(), n, block_start, count, words);
        for (std::size_t w = 0; w < (count + 63) / 64; ++w) {
            std::uint64_t bitset = words[w];
            while (bitset != 0) {
                const int bit = __builtin_ctzll(bitset);
                bitset &= bitset - 1;
                const std::uint64_t j = block_start + w * 64 + static_cast<std::uint64_t>(bit);
                const Rational t = q.after + Rational(static_cast<long>(j)) * step;

                bool accepted = true;
                std::vector<Integer> ps(n);
                std::vector<std::pair<Rational, Rational>> margins(n);
                for (std::size_t i = 0; i < n && accepted; ++i) {
                    unsigned bits = q.precision_bits;
                    for (;;) {
                        auto [glo, ghi] = product_enclosure(t, q.runners[i].speed, bits);
                        const MarginResult m = certified_margin(glo, ghi, q.alphas[i]);
                        if (m.hi <= q.epsilon) {
                            ps[i] = m.p;
                            margins[i] = {m.lo, m.hi};
                            break;
                        }
                        if (m.lo > q.epsilon) {
                            accepted = false;
                            break;
                        }
                        if (bits > q.precision_bits * 1024) {
                            throw PrecisionExhaustedError(
                                "margin undecidable against epsilon at escalated "
                                "precision (probe " + std::to_string(j) + ")");
                        }
                        bits *= 2;
                    }
                }
                if (!accepted) continue;

                KroneckerWitness witness;
                witness.t = t;
                witness.p = std::move(ps);
                witness.margins = std::move(margins);
                witness.probes_used = static_cast<unsigned long>(j);
                witness.precision_bits = q.precision_bits;
                // margin <= a/3 puts every position in [a/6, 5a/6]; confirm
                // arc membership with an independent position enclosure.
                witness.all_in_arc = true;
                for (std::size_t i = 0; i < n; ++i) {
                    unsigned bits = q.precision_bits;
                    ArcClass c;
                    while ((c = classify_against_arc(
                                eval_position(q.runners[i], t, bits), q.arc)) ==
                           ArcClass::kUndecided) {
                        bits *= 2;
                        if (bits > q.precision_bits * 1024) {
                            throw PrecisionExhaustedError(
                                "arc membership undecidable for accepted witness");
                        }
                    }
                    if (c != ArcClass::kInside) {
                        throw Error("internal: accepted witness fails arc membership");
                    }
                }
                return SearchResult{SearchStatus::kFound, std::move(witness),
                                    static_cast<unsigned long>(j), step};
            }
        }
    }
    return SearchResult{SearchStatus::kBudgetExhausted, std::nullopt, q.budget, step};
}

WitnessCheck verify_witness(const std::vector<Runner>& runners, const Arc& arc,
                            const Rational& t, unsigned precision_bits) {
    if (runners.empty()) throw ValidationError("verify_witness needs runners");
    WitnessCheck out;
    out.all_in_arc = true;
    out.margins.reserve(runners.size());
    out.boundary_distance_lo.reserve(runners.size());
    for (const Runner& r : runners) {
        const PositionEnclosure e = eval_position(r, t, precision_bits);
        const ArcClass c = classify_against_arc(e, arc);
        if (c == ArcClass::kUndecided) {
            throw PrecisionExhaustedError(
                "position enclosure straddles the arc boundary; retry with more bits");
        }
        if (c == ArcClass::kInside && arc.length < 1) {
            const Rational rel = mod_positive(e.lo - arc.start, Rational(1));
            const Rational width = e.hi - e.lo;
            out.boundary_distance_lo.push_back(
                std::min(rel, Rational(arc.length - rel - width)));
        } else if (c == ArcClass::kInside) {
            out.boundary_distance_lo.push_back(Rational(0));
        } else {
            out.all_in_arc = false;
            out.boundary_distance_lo.push_back(Rational(0));
        }
        const Rational rotated = mod_positive(r.start - arc.start, Rational(1));
        const Rational alpha = arc.length / 2 + 1 - rotated;
        auto [glo, ghi] = product_enclosure(t, r.speed, precision_bits);
        const MarginResult m = certified_margin(glo, ghi, alpha);
        out.margins.emplace_back(m.lo, m.hi);
    }
    return out;
}

}  // namespace trackrun
