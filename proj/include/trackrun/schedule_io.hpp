#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trackrun/constructions.hpp"
#include "trackrun/core.hpp"
#include "trackrun/patrol.hpp"

namespace trackrun {

// Construction metadata carried alongside a schedule document so `verify`
// can recover the shade arc and expected exit times without extra flags.
struct ConstructionInfo {
    std::string kind;  // "no-shade" | "rendezvous"
    Rational a;
    unsigned long k = 0;
    std::vector<Rational> exit_times;  // t_0..t_k for no-shade
    std::optional<Rational> arc_start;
    std::optional<Rational> arc_length;
};

struct ScheduleDocument {
    int schema_version = 1;
    RunnerSchedule schedule;
    std::optional<ConstructionInfo> construction;
};

// Canonical JSON: keys sorted, rationals as "p/q" strings in lowest terms.
// Round-trips losslessly; parse failures carry the offending field path.
std::string schedule_to_json(const ScheduleDocument& doc);
ScheduleDocument schedule_from_json(const std::string& text);

// Patrol documents carry piecewise-linear trajectories instead of runners.
std::string patrol_to_json(const PatrolSchedule& s);
PatrolSchedule patrol_from_json(const std::string& text);

// True when the JSON carries "agents" (patrol) rather than "runners".
bool json_is_patrol(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace trackrun
