// Acceptance suite: one line per criterion, nonzero exit if any fails.
// argv[1] is the path to the trackrun CLI binary.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trackrun/constructions.hpp"
#include "trackrun/core.hpp"
#include "trackrun/errors.hpp"
#include "trackrun/interval_set.hpp"
#include "trackrun/kronecker.hpp"
#include "trackrun/patrol.hpp"
#include "trackrun/schedule_io.hpp"

using namespace trackrun;
using nlohmann::json;

namespace {

std::string g_cli;
int g_failures = 0;

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) throw Error("popen failed for: " + cmd);
    CommandResult result;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

void criterion(int number, const std::string& label, double budget_seconds,
               const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && elapsed > budget_seconds) {
        std::ostringstream os;
        os << "runtime " << elapsed << "s exceeds " << budget_seconds << "s";
        failure = os.str();
    }
    std::ostringstream line;
    line << "criterion " << number << " (" << label << "): "
         << (failure.empty() ? "PASS" : "FAIL") << " [" << std::fixed;
    line.precision(2);
    line << elapsed << "s]";
    if (!failure.empty()) line << " -- " << failure;
    std::cout << line.str() << std::endl;
    if (!failure.empty()) ++g_failures;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(what);
}

Rational random_start(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(0, 999);
    return make_rational(num(rng), 1000);
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/trackrun_acceptance_") + name;
}

// 1. The ell = 1/2 construction, end to end through the CLI, with the exact
// speeds, starts, and exit times, and a passing verification.
void criterion1() {
    const CommandResult built = run_cli("construct no-shade --shade-length 1/2");
    require(built.exit_code == 0, "construct exited " + std::to_string(built.exit_code));
    const ScheduleDocument doc = schedule_from_json(built.output);
    require(doc.schedule.runners.size() == 4, "expected 4 runners");
    const Rational expected_starts[4] = {Rational(0), Rational(0), make_rational(3, 4),
                                         make_rational(1, 3)};
    for (std::size_t i = 0; i < 4; ++i) {
        require(doc.schedule.runners[i].speed.radicand == 1 &&
                    doc.schedule.runners[i].speed.coeff == Rational(static_cast<long>(i + 1)),
                "speed " + std::to_string(i + 1) + " wrong");
        require(doc.schedule.runners[i].start == expected_starts[i],
                "start " + std::to_string(i) + " wrong");
    }
    require(doc.construction.has_value(), "missing construction metadata");
    const Rational expected_exits[4] = {make_rational(1, 2), make_rational(3, 4),
                                        make_rational(11, 12), make_rational(25, 24)};
    require(doc.construction->exit_times.size() == 5, "expected exit times t_0..t_4");
    for (std::size_t i = 0; i < 4; ++i) {
        require(doc.construction->exit_times[i + 1] == expected_exits[i],
                "exit time " + std::to_string(i + 1) + " wrong");
    }
    const std::string file = temp_path("c1.json");
    write_file(file, built.output);
    const CommandResult verified = run_cli("verify " + file);
    require(verified.exit_code == 0, "verify exited " + std::to_string(verified.exit_code));

    // Exact library-level verification as well.
    const Arc shade = make_arc(unit_circle(), *doc.construction->arc_start,
                               *doc.construction->arc_length);
    require(verify_no_shade(doc.schedule, shade).holds, "exact verification failed");
}

// 2. ell = 7/10: the covering threshold is 16 runners, and the full exact
// verification of the 16-runner construction stays well inside 30 s.
void criterion2() {
    require(min_runner_count(make_rational(3, 10)) == 16, "min_runner_count(3/10) != 16");
    require(harmonic(15) < make_rational(10, 3), "H_15 should be below 10/3");
    require(harmonic(16) >= make_rational(10, 3), "H_16 should reach 10/3");
    const Arc shade = make_arc(unit_circle(), make_rational(3, 10), make_rational(7, 10));
    const NoShadeConstruction built = build_no_shade(shade);
    require(built.runner_count == 16, "construction should use 16 runners");
    require(verify_no_shade(built.schedule, shade).holds, "verification failed");
}

// 3. ell = 999/1000 is refused with the paper-scale reason.
void criterion3() {
    const CommandResult r = run_cli("construct no-shade --shade-length 999/1000");
    require(r.exit_code == 2, "expected exit 2, got " + std::to_string(r.exit_code));
    require(r.output.find("exp(1000)") != std::string::npos,
            "reason should mention exp(1000); got: " + r.output);
}

// 4. Dropping runner 4 produces an exact witness in (11/12, 1) at which all
// remaining runners sit inside the shade arc; the CLI reports it with exit 1.
void criterion4() {
    const Arc shade = make_arc(unit_circle(), make_rational(1, 2), make_rational(1, 2));
    const NoShadeConstruction built = build_no_shade(shade);
    RunnerSchedule truncated{built.schedule.circle,
                             {built.schedule.runners.begin(),
                              built.schedule.runners.begin() + 3}};
    const Verdict v = verify_no_shade(truncated, shade);
    require(!v.holds, "truncated schedule should fail");
    require(v.witness.has_value(), "missing witness");
    require(*v.witness > make_rational(11, 12) && *v.witness < 1,
            "witness " + to_rational_string(*v.witness) + " outside (11/12, 1)");
    for (const Runner& r : truncated.runners) {
        require(in_arc(position(r, *v.witness, truncated.circle), shade, truncated.circle),
                "runner not inside the shade at the witness");
    }

    ScheduleDocument doc;
    doc.schedule = truncated;
    ConstructionInfo info;
    info.kind = "no-shade";
    info.a = built.complement_length;
    info.k = 3;
    info.arc_start = shade.start;
    info.arc_length = shade.length;
    doc.construction = info;
    const std::string file = temp_path("c4.json");
    write_file(file, schedule_to_json(doc));
    const CommandResult r = run_cli("verify " + file + " --json");
    require(r.exit_code == 1, "expected exit 1, got " + std::to_string(r.exit_code));
    const json parsed = json::parse(r.output);
    const Rational wit = parse_rational(parsed.at("witness").get<std::string>());
    require(wit > make_rational(11, 12) && wit < 1, "CLI witness outside (11/12, 1)");
}

// 5. The recursive speeds are exactly [1, 16, 128, 512]; across 100 random
// start vectors and three horizons the exact search always produces a
// verified rendezvous strictly after the horizon.
void criterion5() {
    const auto speeds = build_rendezvous_speeds(4, make_rational(1, 2));
    const long expected[4] = {1, 16, 128, 512};
    require(speeds.size() == 4, "expected 4 speeds");
    for (std::size_t i = 0; i < 4; ++i) {
        require(speeds[i].radicand == 1 && speeds[i].coeff == Rational(expected[i]),
                "speed " + std::to_string(i) + " wrong");
    }
    const Circle c = unit_circle();
    const Arc arc = make_arc(c, Rational(0), make_rational(1, 2));
    std::mt19937 rng(2026);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Runner> runners;
        for (const auto& sp : speeds) runners.push_back(Runner{sp, random_start(rng)});
        const RunnerSchedule s = make_schedule(c, std::move(runners));
        for (const long T : {0l, 10l, 1000l}) {
            const auto t = find_rendezvous_time(s, arc, Rational(T));
            require(t.has_value(), "no rendezvous found");
            require(*t > T, "rendezvous not strictly after T");
            for (const Runner& r : s.runners) {
                require(in_arc(position(r, *t, c), arc, c), "runner outside the arc");
            }
        }
    }
}

// 6. sqrt(2), sqrt(3), sqrt(5) with random rational starts: the grid search
// finds a witness that passes independent verification at 256 bits with
// every margin at most eps = a/3 = 1/15.
void criterion6() {
    std::mt19937 rng(2027);
    std::vector<Runner> runners{{make_speed(Rational(1), 2), random_start(rng)},
                                {make_speed(Rational(1), 3), random_start(rng)},
                                {make_speed(Rational(1), 5), random_start(rng)}};
    const Arc arc = make_arc(unit_circle(), Rational(0), make_rational(1, 5));
    require(check_independence({runners[0].speed, runners[1].speed, runners[2].speed})
                .independent,
            "speeds should be independent");
    const KroneckerQuery q = make_query(runners, arc, Rational(100), 10'000'000, 128);
    const SearchResult res = kronecker_search(q);
    require(res.status == SearchStatus::kFound, "budget exhausted");
    const KroneckerWitness& w = *res.witness;
    require(w.t > 100, "witness not after T");
    const WitnessCheck check = verify_witness(runners, arc, w.t, 256);
    require(check.all_in_arc, "verification at 256 bits failed");
    const Rational eps = make_rational(1, 15);
    require(check.margins.size() == 3, "expected 3 margins");
    for (const auto& [lo, hi] : check.margins) {
        require(hi <= eps, "margin " + to_rational_string(hi) + " exceeds 1/15");
    }
}

// 7. Interval-algebra property suite at acceptance scale.
void criterion7() {
    std::mt19937 rng(2028);
    std::uniform_int_distribution<long> d(1, 16);
    const auto random_set = [&](const Rational& period) {
        std::uniform_int_distribution<int> count(0, 4);
        std::vector<std::pair<Rational, Rational>> iv;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            const Rational lo = make_rational(d(rng) * d(rng), d(rng));
            const Rational len = make_rational(d(rng), 3 * d(rng)) * period;
            iv.emplace_back(lo, lo + len);
        }
        return PeriodicIntervalSet::from_intervals(period, iv);
    };
    const Rational periods[3] = {Rational(1), make_rational(1, 2), make_rational(3, 4)};
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_set(periods[i % 3]);
        const auto b = random_set(periods[(i + 1) % 3]);
        const auto u = set_union(a, b);
        const auto n = set_intersect(a, b);
        const Rational common = u.period();
        const Rational ma = a.measure_per_period() * (common / a.period());
        const Rational mb = b.measure_per_period() * (common / b.period());
        require(ma + mb == u.measure_per_period() + n.measure_per_period(),
                "inclusion-exclusion failed");
        require(set_complement(set_complement(a)) == a, "double complement failed");
    }

    const Circle c = unit_circle();
    for (int cs = 0; cs < 25; ++cs) {
        const Runner r{make_speed(make_rational(d(rng), d(rng))),
                       mod_positive(make_rational(d(rng), d(rng)), Rational(1))};
        Rational len = mod_positive(make_rational(d(rng), d(rng)), Rational(1));
        if (sgn(len) == 0) len = make_rational(1, 2);
        const Arc arc = make_arc(c, make_rational(d(rng), d(rng)), len);
        const auto occ = occupancy(r, arc, c);
        require(occ.measure_per_period() == arc.length / r.speed.coeff,
                "occupancy measure mismatch");
        for (int s = 0; s < 1000; ++s) {
            const Rational t = make_rational(d(rng) * d(rng), d(rng));
            require(occ.contains(t) == in_arc(position(r, t, c), arc, c),
                    "occupancy membership mismatch");
        }
    }
}

// 8. Idle times: the three exact values, then bracket containment and
// linear tightening on 50 random constant-speed schedules.
void criterion8() {
    const auto exact_idle = [](std::vector<Runner> runners) {
        return idle_time_exact(make_schedule(unit_circle(), std::move(runners))).idle_lo;
    };
    require(exact_idle({{make_speed(Rational(1)), Rational(0)}}) == 1, "single runner != 1");
    require(exact_idle({{make_speed(Rational(1)), Rational(0)},
                        {make_speed(Rational(1)), make_rational(1, 2)}}) ==
                make_rational(1, 2),
            "antipodal pair != 1/2");
    require(exact_idle({{make_speed(Rational(1)), Rational(0)},
                        {make_speed(Rational(2)), Rational(0)}}) == make_rational(1, 2),
            "speeds 1,2 != 1/2");

    std::mt19937 rng(2029);
    std::uniform_int_distribution<long> d(1, 6);
    std::uniform_int_distribution<long> start_num(0, 11);
    for (int i = 0; i < 50; ++i) {
        std::vector<Runner> runners;
        const int k = 1 + static_cast<int>(d(rng) % 3);
        Rational v_min(0);
        for (int j = 0; j < k; ++j) {
            const Rational v = make_rational(d(rng), d(rng));
            runners.push_back(Runner{make_speed(v), make_rational(start_num(rng), 12)});
            if (j == 0 || v < v_min) v_min = v;
        }
        const RunnerSchedule s = make_schedule(unit_circle(), std::move(runners));
        const Rational exact = idle_time_exact(s).idle_lo;
        const PatrolSchedule p = to_patrol(s);
        Rational prev_width(-1);
        for (const Rational dx : {make_rational(1, 16), make_rational(1, 32)}) {
            const IdleReport est = idle_time_estimate(p, dx);
            require(!est.unbounded, "estimate reported unbounded");
            require(est.idle_lo <= exact && exact <= est.idle_hi,
                    "estimate bracket misses the exact idle time");
            const Rational width = est.idle_hi - est.idle_lo;
            require(width == 2 * dx / v_min, "bracket width is not 2*dx/v_min");
            if (prev_width >= 0) {
                require(width * 2 == prev_width, "bracket width not linear in dx");
            }
            prev_width = width;
        }
    }
}

// CLI exit-code and format contract (not numbered in the criteria, but the
// spec's cmd_* examples).
void cli_contract() {
    // Rendezvous construction, exact search after T = 1000.
    const std::string rv = temp_path("rv.json");
    CommandResult r = run_cli("construct rendezvous --k 4 --arc-length 1/2 -o " + rv);
    require(r.exit_code == 0, "construct rendezvous failed");
    r = run_cli("search " + rv + " --after 1000");
    require(r.exit_code == 0, "exact search should find a witness");
    {
        const json j = json::parse(r.output);
        require(j.at("method") == "exact-intersection", "wrong method");
        require(parse_rational(j.at("t").get<std::string>()) > 1000, "witness not after T");
    }

    // construct rendezvous --k 1: speeds [1].
    r = run_cli("construct rendezvous --k 1 --arc-length 1/2");
    require(r.exit_code == 0, "construct k=1 failed");
    {
        const ScheduleDocument doc = schedule_from_json(r.output);
        require(doc.schedule.runners.size() == 1 &&
                    doc.schedule.runners[0].speed.coeff == 1,
                "k=1 speeds wrong");
    }

    // No-shade construction vs an arc strictly inside its shade: provably
    // empty, exit 1.
    const std::string ns = temp_path("ns.json");
    r = run_cli("construct no-shade --shade-length 1/2 -o " + ns);
    require(r.exit_code == 0, "construct no-shade failed");
    r = run_cli("search " + ns + " --arc 5/8 1/4");
    require(r.exit_code == 1, "interior search should be provably empty, got " +
                                  std::to_string(r.exit_code));

    // Kronecker route through the CLI.
    ScheduleDocument kdoc;
    kdoc.schedule = make_schedule(
        unit_circle(), {Runner{make_speed(Rational(1), 2), Rational(0)},
                        Runner{make_speed(Rational(1), 3), make_rational(1, 4)},
                        Runner{make_speed(Rational(1), 5), make_rational(1, 2)}});
    const std::string kr = temp_path("kr.json");
    write_file(kr, schedule_to_json(kdoc));
    r = run_cli("search " + kr + " --arc 0/1 1/5 --after 100 --budget 1000000");
    require(r.exit_code == 0, "kronecker search failed: " + r.output);
    {
        const json j = json::parse(r.output);
        require(j.at("method") == "kronecker-grid", "wrong method");
        require(j.contains("p") && j.contains("margins") && j.contains("probes_used"),
                "witness JSON missing fields");
    }

    // Budget exhaustion: locked dependent speeds, exit 3.
    ScheduleDocument locked;
    locked.schedule = make_schedule(
        unit_circle(), {Runner{make_speed(Rational(1), 2), Rational(0)},
                        Runner{make_speed(Rational(3), 2), make_rational(1, 2)}});
    const std::string lk = temp_path("lk.json");
    write_file(lk, schedule_to_json(locked));
    r = run_cli("search " + lk + " --arc 0/1 1/8 --budget 2000");
    require(r.exit_code == 3, "expected exit 3, got " + std::to_string(r.exit_code));
    require(r.output.find("budget exhausted") != std::string::npos, "missing reason");

    // Malformed rational: exit 2 with a parse reason.
    const std::string bad = temp_path("bad.json");
    write_file(bad, R"({"runners": [{"speed": {"coeff": "1/1"}, "start": "3/0"}]})");
    r = run_cli("verify " + bad + " --arc 1/2 1/2");
    require(r.exit_code == 2, "expected exit 2, got " + std::to_string(r.exit_code));

    // Idle-time CLI: exact and estimate modes.
    ScheduleDocument one;
    one.schedule = make_schedule(unit_circle(), {Runner{make_speed(Rational(1)), Rational(0)}});
    const std::string idle1 = temp_path("idle1.json");
    write_file(idle1, schedule_to_json(one));
    r = run_cli("idle-time " + idle1);
    require(r.exit_code == 0 && json::parse(r.output).at("idle") == "1/1",
            "idle-time exact wrong: " + r.output);

    ScheduleDocument two;
    two.schedule = make_schedule(
        unit_circle(), {Runner{make_speed(Rational(1)), Rational(0)},
                        Runner{make_speed(Rational(2)), Rational(0)}});
    const std::string idle2 = temp_path("idle2.json");
    write_file(idle2, schedule_to_json(two));
    r = run_cli("idle-time " + idle2);
    require(r.exit_code == 0 && json::parse(r.output).at("idle") == "1/2",
            "idle-time 1&2 wrong: " + r.output);

    // Byte-identical reruns.
    const CommandResult again = run_cli("idle-time " + idle2);
    require(again.output == r.output, "idle-time output not deterministic");

    // Covering-set CSV emission.
    const std::string csv = temp_path("cover.csv");
    r = run_cli("verify " + ns + " --emit-intervals " + csv);
    require(r.exit_code == 0, "verify with --emit-intervals failed");
    require(read_file(csv).rfind("period,", 0) == 0, "CSV missing period header");

    // Trace sampling.
    r = run_cli("trace " + rv + " --until 1 --step 1/4");
    require(r.exit_code == 0 && r.output.rfind("t,runner_0", 0) == 0,
            "trace CSV header wrong");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: trackrun_acceptance <path-to-trackrun-cli>\n";
        return 2;
    }
    g_cli = argv[1];

    criterion(1, "theorem-1 reproduction, exact", 1.0, criterion1);
    criterion(2, "16-runner scaling check", 30.0, criterion2);
    criterion(3, "infeasibility honesty", 5.0, criterion3);
    criterion(4, "falsification witness", 5.0, criterion4);
    criterion(5, "recursive speeds rendezvous", 10.0, criterion5);
    criterion(6, "kronecker witness search", 60.0, criterion6);
    criterion(7, "interval-algebra property suite", 60.0, criterion7);
    criterion(8, "idle-time evaluation", 60.0, criterion8);
    criterion(9, "cli contract (supplementary)", 60.0, cli_contract);

    if (g_failures != 0) {
        std::cout << g_failures << " criteria FAILED\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
