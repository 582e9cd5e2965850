#include "trackrun/interval_set.hpp"

#include <algorithm>
#include <cstddef>

#include "trackrun/errors.hpp"

namespace trackrun {

namespace {

struct SweepResult {
    bool full = false;
    std::vector<CirclePart> parts;
};

// Endpoint sweep. The grid `pts` (sorted, unique circle positions in [0, P))
// cuts the circle into 2m pieces: point p0, open segment (p0, p1), point p1,
// ..., closing with the segment from p_{m-1} back around to p0. A set whose
// part endpoints all lie on the grid is constant on every piece, so one
// membership bit per piece describes it exactly. Stitching maximal runs of
// true pieces yields the canonical arc list; runs always start and end on
// point pieces because the operands are closed sets.
SweepResult stitch(const std::vector<Rational>& pts, const std::vector<char>& point_val,
                   const std::vector<char>& seg_val) {
    const std::size_t m = pts.size();
    std::vector<char> val(2 * m);
    bool any_false = false, any_true = false;
    for (std::size_t i = 0; i < m; ++i) {
        val[2 * i] = point_val[i];
        val[2 * i + 1] = seg_val[i];
        any_false |= !point_val[i] || !seg_val[i];
        any_true |= point_val[i] || seg_val[i];
    }
    SweepResult result;
    if (!any_false) {
        result.full = true;
        return result;
    }
    if (!any_true) return result;

    std::size_t f = 0;
    while (val[f]) ++f;

    bool open = false;
    std::size_t run_start = 0, run_end = 0;
    for (std::size_t k = 1; k <= 2 * m; ++k) {
        const std::size_t idx = (f + k) % (2 * m);
        if (val[idx]) {
            if (!open) {
                open = true;
                run_start = idx;
            }
            run_end = idx;
        } else if (open) {
            open = false;
            if (run_start % 2 != 0 || run_end % 2 != 0) {
                throw Error("interval sweep produced a run not bounded by points");
            }
            result.parts.push_back(CirclePart{pts[run_start / 2], pts[run_end / 2]});
        }
    }
    std::sort(result.parts.begin(), result.parts.end(),
              [](const CirclePart& x, const CirclePart& y) { return x.lo < y.lo; });
    return result;
}

// Representative interior point of grid segment i.
Rational segment_rep(const std::vector<Rational>& pts, std::size_t i, const Rational& period) {
    const std::size_t m = pts.size();
    Rational hi = (i + 1 < m) ? pts[i + 1] : pts[0] + period;
    return mod_positive((pts[i] + hi) / 2, period);
}

void sort_unique(std::vector<Rational>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace

PeriodicIntervalSet PeriodicIntervalSet::empty(const Rational& period) {
    if (sgn(period) <= 0) throw ValidationError("period must be positive");
    return PeriodicIntervalSet(period, false, {});
}

PeriodicIntervalSet PeriodicIntervalSet::all(const Rational& period) {
    if (sgn(period) <= 0) throw ValidationError("period must be positive");
    return PeriodicIntervalSet(period, true, {});
}

Rational PeriodicIntervalSet::measure_per_period() const {
    if (full_) return period_;
    Rational total = 0;
    for (const CirclePart& p : parts_) {
        total += p.wraps() ? Rational(period_ - p.lo + p.hi) : Rational(p.hi - p.lo);
    }
    return total;
}

bool PeriodicIntervalSet::contains(const Rational& t) const {
    if (full_) return true;
    if (parts_.empty()) return false;
    const Rational x = mod_positive(t, period_);
    auto it = std::upper_bound(
        parts_.begin(), parts_.end(), x,
        [](const Rational& v, const CirclePart& p) { return v < p.lo; });
    if (it != parts_.begin()) {
        const CirclePart& p = *std::prev(it);
        if (p.wraps() ? x >= p.lo : x <= p.hi) return true;
    }
    const CirclePart& last = parts_.back();
    return last.wraps() && x <= last.hi;
}

PeriodicIntervalSet PeriodicIntervalSet::lift_to(const Rational& new_period) const {
    Rational ratio = new_period / period_;
    if (sgn(ratio) <= 0 || ratio.get_den() != 1) {
        throw ValidationError("lift_to needs a positive integer multiple of the period");
    }
    if (full_) return all(new_period);
    const unsigned long copies = static_cast<unsigned long>(ratio.get_num().get_ui());
    std::vector<CirclePart> parts;
    parts.reserve(parts_.size() * copies);
    for (const CirclePart& p : parts_) {
        for (unsigned long j = 0; j < copies; ++j) {
            const Rational shift = Rational(static_cast<long>(j)) * period_;
            if (!p.wraps()) {
                parts.push_back(CirclePart{p.lo + shift, p.hi + shift});
            } else if (j + 1 < copies) {
                // The wrap continues into the next copy of the old period.
                parts.push_back(CirclePart{p.lo + shift, p.hi + shift + period_});
            } else {
                parts.push_back(CirclePart{p.lo + shift, p.hi});
            }
        }
    }
    std::sort(parts.begin(), parts.end(),
              [](const CirclePart& x, const CirclePart& y) { return x.lo < y.lo; });
    return PeriodicIntervalSet(new_period, false, std::move(parts));
}

std::optional<Rational> PeriodicIntervalSet::first_point_at_or_after(
    const Rational& from) const {
    if (is_empty()) return std::nullopt;
    if (full_) return from;
    const Rational x = mod_positive(from, period_);
    const Rational base = from - x;
    std::optional<Rational> best;
    auto offer = [&best](const Rational& v) {
        if (!best || v < *best) best = v;
    };
    for (const CirclePart& p : parts_) {
        if (p.wraps()) {
            if (x <= p.hi || x >= p.lo) offer(x);
            else offer(p.lo);
        } else {
            if (x <= p.lo) offer(p.lo);
            else if (x <= p.hi) offer(x);
        }
    }
    if (best) return base + *best;
    // No member in [x, P); wrap to the earliest member of the next period.
    Rational first0 = parts_.front().lo;
    for (const CirclePart& p : parts_) {
        if (p.wraps()) { first0 = 0; break; }
        if (p.lo < first0) first0 = p.lo;
    }
    return base + period_ + first0;
}

std::optional<Rational> PeriodicIntervalSet::first_point_strictly_after(
    const Rational& from) const {
    if (is_empty()) return std::nullopt;
    if (full_) return from + period_;
    const Rational x = mod_positive(from, period_);
    const Rational base = from - x;
    // Inside a part with room ahead: the part's far endpoint is a member > from.
    for (const CirclePart& p : parts_) {
        if (p.wraps()) {
            if (x >= p.lo) return from + (period_ - x) + p.hi;
            if (x < p.hi) return from + (p.hi - x);
        } else {
            if (x >= p.lo && x < p.hi) return from + (p.hi - x);
        }
    }
    // Outside the set, or exactly on a right endpoint / isolated point:
    // take the smallest member > x.
    std::optional<Rational> next;
    for (const CirclePart& p : parts_) {
        if (p.lo > x && (!next || p.lo < *next)) next = p.lo;
    }
    if (next) return base + *next;
    Rational first0 = parts_.front().lo;
    for (const CirclePart& p : parts_) {
        if (p.wraps()) { first0 = 0; break; }
        if (p.lo < first0) first0 = p.lo;
    }
    return base + period_ + first0;
}

std::vector<std::pair<Rational, Rational>> PeriodicIntervalSet::split_intervals() const {
    std::vector<std::pair<Rational, Rational>> out;
    if (full_) {
        out.emplace_back(Rational(0), period_);
        return out;
    }
    for (const CirclePart& p : parts_) {
        if (p.wraps()) {
            out.emplace_back(Rational(0), p.hi);
            out.emplace_back(p.lo, period_);
        } else {
            out.emplace_back(p.lo, p.hi);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void PeriodicIntervalSet::write_csv(std::ostream& os) const {
    os << "period," << to_rational_string(period_) << "\n";
    for (const auto& [lo, hi] : split_intervals()) {
        os << to_rational_string(lo) << "," << to_rational_string(hi) << "\n";
    }
}

bool PeriodicIntervalSet::operator==(const PeriodicIntervalSet& o) const {
    return period_ == o.period_ && full_ == o.full_ && parts_ == o.parts_;
}

namespace {

void append_lifted_endpoints(const PeriodicIntervalSet& s, const Rational& common,
                             std::vector<Rational>& out) {
    Rational ratio = common / s.period();
    if (ratio.get_den() != 1) {
        throw Error("common period is not an integer multiple of a set period");
    }
    const unsigned long copies = static_cast<unsigned long>(ratio.get_num().get_ui());
    for (const CirclePart& p : s.parts()) {
        for (unsigned long j = 0; j < copies; ++j) {
            const Rational shift = Rational(static_cast<long>(j)) * s.period();
            out.push_back(p.lo + shift);
            out.push_back(p.hi + shift);
        }
    }
}

}  // namespace

PeriodicIntervalSet set_union(const PeriodicIntervalSet& a, const PeriodicIntervalSet& b) {
    return PeriodicIntervalSet::boolean_op(a, b, PeriodicIntervalSet::BoolOp::kUnion);
}

PeriodicIntervalSet set_intersect(const PeriodicIntervalSet& a,
                                  const PeriodicIntervalSet& b) {
    return PeriodicIntervalSet::boolean_op(a, b, PeriodicIntervalSet::BoolOp::kIntersect);
}

PeriodicIntervalSet PeriodicIntervalSet::boolean_op(const PeriodicIntervalSet& a,
                                                    const PeriodicIntervalSet& b,
                                                    BoolOp op) {
    const Rational common = rational_lcm(a.period(), b.period());
    if (op == BoolOp::kUnion) {
        if (a.covers_period() || b.covers_period()) return PeriodicIntervalSet::all(common);
        if (a.is_empty()) return b.lift_to(common);
        if (b.is_empty()) return a.lift_to(common);
    } else {
        if (a.is_empty() || b.is_empty()) return PeriodicIntervalSet::empty(common);
        if (a.covers_period()) return b.lift_to(common);
        if (b.covers_period()) return a.lift_to(common);
    }

    std::vector<Rational> pts;
    append_lifted_endpoints(a, common, pts);
    append_lifted_endpoints(b, common, pts);
    sort_unique(pts);

    const std::size_t m = pts.size();
    std::vector<char> point_val(m), seg_val(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool pa = a.contains(pts[i]), pb = b.contains(pts[i]);
        point_val[i] = op == BoolOp::kUnion ? (pa || pb) : (pa && pb);
        const Rational rep = segment_rep(pts, i, common);
        const bool sa = a.contains(rep), sb = b.contains(rep);
        seg_val[i] = op == BoolOp::kUnion ? (sa || sb) : (sa && sb);
    }
    SweepResult r = stitch(pts, point_val, seg_val);
    return PeriodicIntervalSet(common, r.full, std::move(r.parts));
}

PeriodicIntervalSet set_complement(const PeriodicIntervalSet& a) {
    if (a.covers_period()) return PeriodicIntervalSet::empty(a.period());
    if (a.is_empty()) return PeriodicIntervalSet::all(a.period());

    std::vector<Rational> pts;
    append_lifted_endpoints(a, a.period(), pts);
    sort_unique(pts);

    const std::size_t m = pts.size();
    std::vector<char> seg_val(m), point_val(m);
    for (std::size_t i = 0; i < m; ++i) {
        seg_val[i] = !a.contains(segment_rep(pts, i, a.period()));
    }
    // Closure rule: every grid point is a part endpoint and hence a member
    // of a; it belongs to the closed complement iff one of its adjacent open
    // segments lies outside a.
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t left = (i + m - 1) % m;
        point_val[i] = seg_val[left] || seg_val[i];
    }
    SweepResult r = stitch(pts, point_val, seg_val);
    return PeriodicIntervalSet(a.period(), r.full, std::move(r.parts));
}

PeriodicIntervalSet PeriodicIntervalSet::from_intervals(
    const Rational& period, const std::vector<std::pair<Rational, Rational>>& intervals) {
    if (sgn(period) <= 0) throw ValidationError("period must be positive");
    std::vector<CirclePart> raw;
    for (const auto& [lo, hi] : intervals) {
        if (hi < lo) throw ValidationError("interval with hi < lo");
        if (hi - lo >= period) return all(period);
        const Rational start = mod_positive(lo, period);
        const Rational end = start + (hi - lo);
        if (end < period) {
            raw.push_back(CirclePart{start, end});
        } else {
            raw.push_back(CirclePart{start, end - period});  // wraps (or touches 0)
        }
    }
    if (raw.empty()) return empty(period);

    std::vector<Rational> pts;
    pts.reserve(raw.size() * 2);
    for (const CirclePart& p : raw) {
        pts.push_back(p.lo);
        pts.push_back(p.hi);
    }
    sort_unique(pts);

    auto bag_contains = [&raw](const Rational& x) {
        for (const CirclePart& p : raw) {
            if (p.wraps() ? (x >= p.lo || x <= p.hi) : (x >= p.lo && x <= p.hi)) {
                return true;
            }
        }
        return false;
    };

    const std::size_t m = pts.size();
    std::vector<char> point_val(m), seg_val(m);
    for (std::size_t i = 0; i < m; ++i) {
        point_val[i] = bag_contains(pts[i]);
        seg_val[i] = bag_contains(segment_rep(pts, i, period));
    }
    SweepResult r = stitch(pts, point_val, seg_val);
    return PeriodicIntervalSet(period, r.full, std::move(r.parts));
}

Rational common_period(const std::vector<PeriodicIntervalSet>& sets) {
    if (sets.empty()) throw ValidationError("common_period needs a nonempty list");
    Rational p = sets.front().period();
    for (std::size_t i = 1; i < sets.size(); ++i) {
        p = rational_lcm(p, sets[i].period());
    }
    return p;
}

PeriodicIntervalSet occupancy(const Runner& r, const Arc& arc, const Circle& c) {
    if (!is_rational_speed(r.speed)) {
        throw ValidationError("occupancy needs a rational speed; irrational "
                              "speeds are handled by the kronecker search");
    }
    const Rational& v = r.speed.coeff;
    if (sgn(v) <= 0) throw ValidationError("runner speed must be positive");
    const Rational period = c.length / v;
    if (arc.length >= c.length) return PeriodicIntervalSet::all(period);
    const Rational entry = mod_positive((arc.start - r.start) / v, period);
    const Rational exit = entry + arc.length / v;
    std::vector<CirclePart> parts;
    if (exit < period) {
        parts.push_back(CirclePart{entry, exit});
    } else {
        parts.push_back(CirclePart{entry, exit - period});
    }
    return PeriodicIntervalSet(period, false, std::move(parts));
}

}  // namespace trackrun
