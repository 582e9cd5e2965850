#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trackrun/core.hpp"
#include "trackrun/rational.hpp"

namespace trackrun {

// Speeds of the form q*sqrt(d) with distinct squarefree radicands are
// rationally independent (classical linear independence of surds); two
// speeds sharing a radicand satisfy an integer relation.
struct IndependenceCertificate {
    bool independent = false;
    std::optional<std::pair<std::size_t, std::size_t>> dependent_pair;
    std::string reason;
};

IndependenceCertificate check_independence(const std::vector<SpeedValue>& speeds);

// Certified enclosure of a position on the unit circle; lo <= true < ... the
// true position lies in [lo, hi] with hi - lo <= 2^-precision_bits.
struct PositionEnclosure {
    Rational lo;
    Rational hi;
};

// Rigorous evaluation of (start + speed*t) mod 1. Rational speed gives an
// exact point enclosure. Irrational speeds use an integer square root at
// scaled precision, so the enclosure width is <= 2^-precision_bits no matter
// how large t gets (the working integer grows with log2(t*speed) instead).
PositionEnclosure eval_position(const Runner& r, const Rational& t,
                                unsigned precision_bits);

struct KroneckerQuery {
    std::vector<Runner> runners;  // on the unit circle
    Arc arc;
    Rational after;                 // T: probe times are strictly greater
    Rational epsilon;               // acceptance bound, default a/3
    std::vector<Rational> alphas;   // targets, default a/2 + 1 - rotated start
    unsigned long budget = 10'000'000;
    unsigned precision_bits = 128;
};

// Fills in the derived targets: rotating so the arc is [0, a], alpha_m =
// a/2 + 1 - beta'_m and epsilon = a/3. Both may be overridden afterwards.
KroneckerQuery make_query(std::vector<Runner> runners, const Arc& arc,
                          const Rational& after, unsigned long budget = 10'000'000,
                          unsigned precision_bits = 128);

struct KroneckerWitness {
    Rational t;
    std::vector<Integer> p;
    // Certified bounds [lo, hi] on |t*speed_m - p_m - alpha_m|; acceptance
    // requires hi <= epsilon for every runner, which places each position in
    // the middle band of the arc.
    std::vector<std::pair<Rational, Rational>> margins;
    bool all_in_arc = false;
    unsigned long probes_used = 0;
    unsigned precision_bits = 0;
};

enum class SearchStatus { kFound, kBudgetExhausted };

struct SearchResult {
    SearchStatus status = SearchStatus::kBudgetExhausted;
    std::optional<KroneckerWitness> witness;
    unsigned long probes_used = 0;
    Rational step;  // the rational probe step actually used
};

// Grid search over t = T + j*step, j = 1..budget, with step a rational
// lower bound for a/(3*max speed) so no runner moves more than a/3 between
// probes. A probe is accepted when every certified margin is <= epsilon;
// the smallest accepted probe index wins. A double-precision prefilter
// (scalar or AVX2, see prefilter.hpp) discards probes whose positions are
// certifiably outside the acceptance band.
SearchResult kronecker_search(const KroneckerQuery& q);

struct WitnessCheck {
    bool all_in_arc = false;
    std::vector<std::pair<Rational, Rational>> margins;
    // Certified lower bound on each runner's distance to the nearer arc
    // boundary (0 when the enclosure is not inside).
    std::vector<Rational> boundary_distance_lo;
};

// Independent recomputation at the given precision; true iff every position
// enclosure lies inside the closed arc. Throws PrecisionExhaustedError when
// an enclosure straddles an arc boundary at this precision.
WitnessCheck verify_witness(const std::vector<Runner>& runners, const Arc& arc,
                            const Rational& t, unsigned precision_bits);

}  // namespace trackrun
