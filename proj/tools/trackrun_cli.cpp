// trackrun: construct, verify, and search circular track-runner schedules,
// and evaluate patrolling idle times. All schedule files are JSON with
// rationals as "p/q" strings; see README.md for the schemas.

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trackrun/constructions.hpp"
#include "trackrun/core.hpp"
#include "trackrun/errors.hpp"
#include "trackrun/interval_set.hpp"
#include "trackrun/kronecker.hpp"
#include "trackrun/patrol.hpp"
#include "trackrun/schedule_io.hpp"

using nlohmann::json;
namespace tr = trackrun;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;  // verify failed / exact search provably empty
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

struct GlobalOpts {
    bool json_output = false;
    unsigned long seed = 1;
    unsigned precision = 128;
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        tr::write_file(out_path, text);
    }
}

tr::Arc arc_from_flags(const std::vector<std::string>& arc_flag, const tr::Circle& circle,
                       const std::optional<tr::ConstructionInfo>& info) {
    if (arc_flag.size() == 2) {
        return tr::make_arc(circle, tr::parse_rational(arc_flag[0]),
                            tr::parse_rational(arc_flag[1]));
    }
    if (info && info->arc_start && info->arc_length) {
        return tr::make_arc(circle, *info->arc_start, *info->arc_length);
    }
    throw tr::ValidationError(
        "no arc given: pass --arc START LENGTH or use a file with construction metadata");
}

int cmd_construct(const std::string& kind, const std::string& shade_length,
                  const std::string& shade_start, const std::string& arc_length,
                  const std::string& arc_start, std::optional<unsigned long> k,
                  const std::string& starts_csv, bool random_starts,
                  const GlobalOpts& g, const std::string& out_path) {
    const tr::Circle circle = tr::unit_circle();
    tr::ScheduleDocument doc;
    if (kind == "no-shade") {
        if (shade_length.empty()) {
            throw tr::ValidationError("construct no-shade needs --shade-length p/q");
        }
        const tr::Rational len = tr::parse_rational(shade_length);
        if (len >= 1) {
            throw tr::ValidationError("shade arc length must be < 1, got " +
                                      tr::to_compact_string(len));
        }
        // Default placement puts the complement at [0, a].
        const tr::Rational start =
            shade_start.empty() ? tr::Rational(1 - len) : tr::parse_rational(shade_start);
        const tr::Arc shade = tr::make_arc(circle, start, len);
        tr::NoShadeConstruction built = tr::build_no_shade(shade, k);
        tr::ConstructionInfo info;
        info.kind = "no-shade";
        info.a = built.complement_length;
        info.k = built.runner_count;
        info.exit_times = built.exit_times;
        info.arc_start = built.shade_arc.start;
        info.arc_length = built.shade_arc.length;
        doc.schedule = std::move(built.schedule);
        doc.construction = std::move(info);
    } else if (kind == "rendezvous") {
        if (!k || arc_length.empty()) {
            throw tr::ValidationError("construct rendezvous needs --k N and --arc-length p/q");
        }
        const tr::Rational a = tr::parse_rational(arc_length);
        const tr::Rational start =
            arc_start.empty() ? tr::Rational(0) : tr::parse_rational(arc_start);
        const tr::Arc arc = tr::make_arc(circle, start, a);
        std::vector<tr::SpeedValue> speeds = tr::build_rendezvous_speeds(*k, a);
        std::vector<tr::Rational> starts(speeds.size(), tr::Rational(0));
        if (!starts_csv.empty()) {
            std::stringstream ss(starts_csv);
            std::string item;
            std::size_t i = 0;
            while (std::getline(ss, item, ',')) {
                if (i >= starts.size()) {
                    throw tr::ValidationError("--starts lists more values than runners");
                }
                starts[i++] = tr::mod_positive(tr::parse_rational(item), circle.length);
            }
            if (i != starts.size()) {
                throw tr::ValidationError("--starts lists fewer values than runners");
            }
        } else if (random_starts) {
            std::mt19937_64 rng(g.seed);
            std::uniform_int_distribution<long> num(0, 999);
            for (auto& s : starts) s = tr::make_rational(num(rng), 1000);
        }
        std::vector<tr::Runner> runners;
        for (std::size_t i = 0; i < speeds.size(); ++i) {
            runners.push_back(tr::Runner{speeds[i], starts[i]});
        }
        tr::ConstructionInfo info;
        info.kind = "rendezvous";
        info.a = a;
        info.k = *k;
        info.arc_start = arc.start;
        info.arc_length = arc.length;
        doc.schedule = tr::make_schedule(circle, std::move(runners));
        doc.construction = std::move(info);
    } else {
        throw tr::ValidationError("unknown construction kind \"" + kind +
                                  "\" (expected no-shade or rendezvous)");
    }
    emit(tr::schedule_to_json(doc), out_path);
    return kExitOk;
}

int cmd_verify(const std::string& file, const std::vector<std::string>& arc_flag,
               const std::string& emit_intervals, const GlobalOpts& g) {
    const tr::ScheduleDocument doc = tr::schedule_from_json(tr::read_file(file));
    const tr::Arc shade = arc_from_flags(arc_flag, doc.schedule.circle, doc.construction);
    const tr::Verdict verdict = tr::verify_no_shade(doc.schedule, shade);

    if (!emit_intervals.empty()) {
        const tr::Arc comp = tr::complement_arc(shade, doc.schedule.circle);
        tr::PeriodicIntervalSet covered =
            tr::occupancy(doc.schedule.runners.front(), comp, doc.schedule.circle);
        for (std::size_t i = 1; i < doc.schedule.runners.size(); ++i) {
            covered = tr::set_union(
                covered, tr::occupancy(doc.schedule.runners[i], comp, doc.schedule.circle));
        }
        std::ostringstream csv;
        covered.write_csv(csv);
        tr::write_file(emit_intervals, csv.str());
    }

    if (g.json_output) {
        json j;
        j["holds"] = verdict.holds;
        if (verdict.witness) j["witness"] = tr::to_rational_string(*verdict.witness);
        std::cout << j.dump(2) << "\n";
    } else if (verdict.holds) {
        std::cout << "holds: some runner is outside the shade arc at every time\n";
    } else {
        std::cout << "violated: all runners inside the shade arc at t = "
                  << tr::to_rational_string(*verdict.witness) << "\n";
    }
    return verdict.holds ? kExitOk : kExitViolated;
}

int cmd_search(const std::string& file, const std::vector<std::string>& arc_flag,
               const std::string& after, unsigned long budget, const GlobalOpts& g) {
    const tr::ScheduleDocument doc = tr::schedule_from_json(tr::read_file(file));
    const tr::Arc arc = arc_from_flags(arc_flag, doc.schedule.circle, doc.construction);
    const tr::Rational after_t = after.empty() ? tr::Rational(0) : tr::parse_rational(after);

    bool all_rational = true;
    for (const tr::Runner& r : doc.schedule.runners) {
        all_rational = all_rational && tr::is_rational_speed(r.speed);
    }

    if (all_rational) {
        const auto witness = tr::find_rendezvous_time(doc.schedule, arc, after_t);
        json j;
        j["method"] = "exact-intersection";
        if (witness) {
            j["t"] = tr::to_rational_string(*witness);
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }
        j["result"] = "provably-empty";
        std::cout << j.dump(2) << "\n";
        std::cerr << "error: no rendezvous time exists (occupancy intersection is empty)\n";
        return kExitViolated;
    }

    if (doc.schedule.circle.length != 1) {
        throw tr::ValidationError("kronecker search needs the unit circle");
    }
    std::vector<tr::SpeedValue> speeds;
    for (const tr::Runner& r : doc.schedule.runners) speeds.push_back(r.speed);
    const tr::IndependenceCertificate cert = tr::check_independence(speeds);
    if (!cert.independent) {
        std::cerr << "warning: speeds are not rationally independent (" << cert.reason
                  << "); the search may exhaust its budget\n";
    }
    tr::KroneckerQuery q =
        tr::make_query(doc.schedule.runners, arc, after_t, budget, g.precision);
    const tr::SearchResult result = tr::kronecker_search(q);
    if (result.status == tr::SearchStatus::kBudgetExhausted) {
        std::cerr << "error: budget exhausted after " << result.probes_used
                  << " probes; raise --budget, move --after, or check independence\n";
        return kExitBudget;
    }
    const tr::KroneckerWitness& w = *result.witness;
    json j;
    j["method"] = "kronecker-grid";
    j["t"] = tr::to_rational_string(w.t);
    j["probes_used"] = w.probes_used;
    j["precision_bits"] = w.precision_bits;
    json ps = json::array();
    for (const tr::Integer& p : w.p) {
        if (!p.fits_slong_p()) {
            throw tr::ValidationError("witness integer p exceeds the int64 output range");
        }
        ps.push_back(static_cast<std::int64_t>(p.get_si()));
    }
    j["p"] = std::move(ps);
    json margins = json::array();
    for (const auto& [lo, hi] : w.margins) {
        margins.push_back(json{{"lo", tr::to_rational_string(lo)},
                               {"hi", tr::to_rational_string(hi)}});
    }
    j["margins"] = std::move(margins);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_idle(const std::string& file, const std::string& grid, const GlobalOpts&) {
    const std::string text = tr::read_file(file);
    tr::IdleReport report;
    if (tr::json_is_patrol(text)) {
        if (grid.empty()) {
            throw tr::ValidationError("piecewise schedules need --grid DX for the estimate");
        }
        report = tr::idle_time_estimate(tr::patrol_from_json(text), tr::parse_rational(grid));
    } else {
        const tr::ScheduleDocument doc = tr::schedule_from_json(text);
        if (!grid.empty()) {
            report = tr::idle_time_estimate(tr::to_patrol(doc.schedule),
                                            tr::parse_rational(grid));
        } else {
            report = tr::idle_time_exact(doc.schedule);
        }
    }
    json j;
    if (report.unbounded) {
        j["idle"] = "unbounded";
        j["witness_point"] = tr::to_rational_string(report.witness_point);
    } else if (report.exact) {
        j["idle"] = tr::to_rational_string(report.idle_lo);
        j["witness_point"] = tr::to_rational_string(report.witness_point);
        j["witness_gap"] = json::array({tr::to_rational_string(report.witness_gap.first),
                                        tr::to_rational_string(report.witness_gap.second)});
    } else {
        j["idle_lo"] = tr::to_rational_string(report.idle_lo);
        j["idle_hi"] = tr::to_rational_string(report.idle_hi);
        j["witness_point"] = tr::to_rational_string(report.witness_point);
        j["witness_gap"] = json::array({tr::to_rational_string(report.witness_gap.first),
                                        tr::to_rational_string(report.witness_gap.second)});
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_trace(const std::string& file, const std::string& until, const std::string& step,
              const GlobalOpts& g, const std::string& out_path) {
    const tr::ScheduleDocument doc = tr::schedule_from_json(tr::read_file(file));
    const tr::Rational t_end = tr::parse_rational(until);
    const tr::Rational dt = tr::parse_rational(step);
    if (sgn(dt) <= 0) throw tr::ValidationError("--step must be positive");
    if (sgn(t_end) < 0) throw tr::ValidationError("--until must be >= 0");

    std::ostringstream csv;
    csv << "t";
    for (std::size_t i = 0; i < doc.schedule.runners.size(); ++i) csv << ",runner_" << i;
    csv << "\n";
    for (tr::Rational t = 0; t <= t_end; t += dt) {
        csv << tr::to_rational_string(t);
        for (const tr::Runner& r : doc.schedule.runners) {
            if (tr::is_rational_speed(r.speed)) {
                csv << "," << tr::to_rational_string(tr::position(r, t, doc.schedule.circle));
            } else {
                const tr::PositionEnclosure e = tr::eval_position(r, t, g.precision);
                csv << "," << tr::to_double((e.lo + e.hi) / 2);
            }
        }
        csv << "\n";
    }
    emit(csv.str(), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"schedules of constant-speed runners on a circle: coverage "
                 "constructions, exact verification, rendezvous search, idle time"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_flag("--json", g.json_output, "JSON output for verify");
    app.add_option("--seed", g.seed, "seed for randomized construction starts");
    app.add_option("--precision", g.precision,
                   "working precision in bits for irrational speeds (default 128)");

    // construct
    auto* construct = app.add_subcommand("construct", "build a schedule document");
    std::string kind, shade_length, shade_start, arc_length, arc_start, starts_csv, out_path;
    std::optional<unsigned long> k_opt;
    bool random_starts = false;
    construct->add_option("kind", kind, "no-shade | rendezvous")->required();
    construct->add_option("--shade-length", shade_length, "shade arc length (no-shade)");
    construct->add_option("--shade-start", shade_start,
                          "shade arc start (default 1 - length)");
    construct->add_option("--arc-length", arc_length, "target arc length (rendezvous)");
    construct->add_option("--arc-start", arc_start, "target arc start (default 0)");
    construct->add_option("--k", k_opt, "runner count");
    construct->add_option("--starts", starts_csv, "comma-separated start positions");
    construct->add_flag("--random-starts", random_starts, "random starts (uses --seed)");
    construct->add_option("-o,--output", out_path, "write the document here");

    // verify
    auto* verify = app.add_subcommand("verify", "check the no-shade covering property");
    std::string verify_file, emit_intervals;
    std::vector<std::string> verify_arc;
    verify->add_option("file", verify_file, "schedule document")->required();
    verify->add_option("--arc", verify_arc, "shade arc START LENGTH")->expected(2);
    verify->add_option("--emit-intervals", emit_intervals,
                       "write the covering set as CSV");

    // search
    auto* search = app.add_subcommand(
        "search", "find t > T with every runner inside the arc");
    std::string search_file, search_after;
    std::vector<std::string> search_arc;
    unsigned long budget = 10'000'000;
    search->add_option("file", search_file, "schedule document")->required();
    search->add_option("--arc", search_arc, "target arc START LENGTH")->expected(2);
    search->add_option("--after", search_after, "lower bound T (default 0)");
    search->add_option("--budget", budget, "max probes for the grid search");

    // idle-time
    auto* idle = app.add_subcommand("idle-time", "longest unvisited gap over all points");
    std::string idle_file, idle_grid;
    idle->add_option("file", idle_file, "schedule or patrol document")->required();
    idle->add_option("--grid", idle_grid, "grid step DX for the certified estimate");

    // trace
    auto* trace = app.add_subcommand("trace", "sample positions to CSV for plotting");
    std::string trace_file, trace_until, trace_step, trace_out;
    trace->add_option("file", trace_file, "schedule document")->required();
    trace->add_option("--until", trace_until, "end time")->required();
    trace->add_option("--step", trace_step, "sample step")->required();
    trace->add_option("-o,--output", trace_out, "write the CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) {
            return cmd_construct(kind, shade_length, shade_start, arc_length, arc_start,
                                 k_opt, starts_csv, random_starts, g, out_path);
        }
        if (verify->parsed()) return cmd_verify(verify_file, verify_arc, emit_intervals, g);
        if (search->parsed()) return cmd_search(search_file, search_arc, search_after, budget, g);
        if (idle->parsed()) return cmd_idle(idle_file, idle_grid, g);
        if (trace->parsed()) return cmd_trace(trace_file, trace_until, trace_step, g, trace_out);
    } catch (const tr::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const tr::PrecisionExhaustedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const tr::Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitOk;
}
