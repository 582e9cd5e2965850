#include "trackrun/schedule_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trackrun/errors.hpp"

namespace trackrun {

using nlohmann::json;

namespace {

Rational field_rational(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw ValidationError(path + ": expected a rational string \"p/q\"");
    }
    try {
        return parse_rational(j.get<std::string>());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

json speed_to_json(const SpeedValue& v) {
    return json{{"coeff", to_rational_string(v.coeff)}, {"radicand", v.radicand}};
}

SpeedValue speed_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("coeff")) {
        throw ValidationError(path + ": expected {\"coeff\": \"p/q\", \"radicand\": d}");
    }
    const Rational coeff = field_rational(j.at("coeff"), path + ".coeff");
    std::uint64_t radicand = 1;
    if (j.contains("radicand")) {
        if (!j.at("radicand").is_number_unsigned() && !j.at("radicand").is_number_integer()) {
            throw ValidationError(path + ".radicand: expected a positive integer");
        }
        const auto r = j.at("radicand").get<long long>();
        if (r <= 0) throw ValidationError(path + ".radicand: must be positive");
        radicand = static_cast<std::uint64_t>(r);
    }
    try {
        return make_speed(coeff, radicand);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

}  // namespace

std::string schedule_to_json(const ScheduleDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["circle_length"] = to_rational_string(doc.schedule.circle.length);
    json runners = json::array();
    for (const Runner& r : doc.schedule.runners) {
        runners.push_back(json{{"speed", speed_to_json(r.speed)},
                               {"start", to_rational_string(r.start)}});
    }
    j["runners"] = std::move(runners);
    if (doc.construction) {
        const ConstructionInfo& c = *doc.construction;
        json cj;
        cj["kind"] = c.kind;
        cj["a"] = to_rational_string(c.a);
        cj["k"] = c.k;
        if (!c.exit_times.empty()) {
            json times = json::array();
            for (const Rational& t : c.exit_times) times.push_back(to_rational_string(t));
            cj["exit_times"] = std::move(times);
        }
        if (c.arc_start) cj["arc_start"] = to_rational_string(*c.arc_start);
        if (c.arc_length) cj["arc_length"] = to_rational_string(*c.arc_length);
        j["construction"] = std::move(cj);
    }
    return j.dump(2) + "\n";
}

ScheduleDocument schedule_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("document: expected a JSON object");
    if (!j.contains("runners") || !j.at("runners").is_array()) {
        throw ValidationError("runners: expected an array");
    }
    ScheduleDocument doc;
    if (j.contains("schema_version")) {
        doc.schema_version = j.at("schema_version").get<int>();
        if (doc.schema_version != 1) {
            throw ValidationError("schema_version: only version 1 is understood");
        }
    }
    Circle circle = unit_circle();
    if (j.contains("circle_length")) {
        circle = make_circle(field_rational(j.at("circle_length"), "circle_length"));
    }
    std::vector<Runner> runners;
    std::size_t idx = 0;
    for (const json& rj : j.at("runners")) {
        const std::string path = "runners[" + std::to_string(idx) + "]";
        if (!rj.is_object() || !rj.contains("speed") || !rj.contains("start")) {
            throw ValidationError(path + ": expected {\"speed\": ..., \"start\": \"p/q\"}");
        }
        runners.push_back(Runner{speed_from_json(rj.at("speed"), path + ".speed"),
                                 field_rational(rj.at("start"), path + ".start")});
        ++idx;
    }
    doc.schedule = make_schedule(circle, std::move(runners));
    if (j.contains("construction")) {
        const json& cj = j.at("construction");
        ConstructionInfo c;
        c.kind = cj.value("kind", std::string());
        if (cj.contains("a")) c.a = field_rational(cj.at("a"), "construction.a");
        if (cj.contains("k")) c.k = cj.at("k").get<unsigned long>();
        if (cj.contains("exit_times")) {
            std::size_t ti = 0;
            for (const json& tj : cj.at("exit_times")) {
                c.exit_times.push_back(field_rational(
                    tj, "construction.exit_times[" + std::to_string(ti++) + "]"));
            }
        }
        if (cj.contains("arc_start")) {
            c.arc_start = field_rational(cj.at("arc_start"), "construction.arc_start");
        }
        if (cj.contains("arc_length")) {
            c.arc_length = field_rational(cj.at("arc_length"), "construction.arc_length");
        }
        doc.construction = std::move(c);
    }
    return doc;
}

std::string patrol_to_json(const PatrolSchedule& s) {
    json j;
    j["schema_version"] = 1;
    j["fence"] = json{
        {"kind", s.fence.kind == Fence::Kind::kCircle ? "circle" : "segment"},
        {"length", to_rational_string(s.fence.length)}};
    json agents = json::array();
    for (const AgentTrajectory& a : s.agents) {
        json bps = json::array();
        for (const auto& [t, x] : a.breakpoints) {
            bps.push_back(json::array({to_rational_string(t), to_rational_string(x)}));
        }
        agents.push_back(json{{"max_speed", to_rational_string(a.max_speed)},
                              {"period", to_rational_string(a.period)},
                              {"breakpoints", std::move(bps)}});
    }
    j["agents"] = std::move(agents);
    return j.dump(2) + "\n";
}

PatrolSchedule patrol_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("fence") || !j.contains("agents")) {
        throw ValidationError("patrol document needs \"fence\" and \"agents\"");
    }
    const json& fj = j.at("fence");
    const std::string kind = fj.value("kind", "circle");
    Fence fence;
    if (kind == "circle") {
        fence = circle_fence(field_rational(fj.at("length"), "fence.length"));
    } else if (kind == "segment") {
        fence = segment_fence(field_rational(fj.at("length"), "fence.length"));
    } else {
        throw ValidationError("fence.kind: expected \"circle\" or \"segment\"");
    }
    std::vector<AgentTrajectory> agents;
    std::size_t ai = 0;
    for (const json& aj : j.at("agents")) {
        const std::string path = "agents[" + std::to_string(ai++) + "]";
        AgentTrajectory a;
        a.max_speed = field_rational(aj.at("max_speed"), path + ".max_speed");
        a.period = field_rational(aj.at("period"), path + ".period");
        if (!aj.contains("breakpoints") || !aj.at("breakpoints").is_array()) {
            throw ValidationError(path + ".breakpoints: expected an array of [t, x]");
        }
        std::size_t bi = 0;
        for (const json& bj : aj.at("breakpoints")) {
            const std::string bpath = path + ".breakpoints[" + std::to_string(bi++) + "]";
            if (!bj.is_array() || bj.size() != 2) {
                throw ValidationError(bpath + ": expected [\"t\", \"x\"]");
            }
            a.breakpoints.emplace_back(field_rational(bj.at(0), bpath + "[0]"),
                                       field_rational(bj.at(1), bpath + "[1]"));
        }
        agents.push_back(std::move(a));
    }
    return make_patrol(fence, std::move(agents));
}

bool json_is_patrol(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error: ") + e.what());
    }
    return j.is_object() && j.contains("agents") && !j.contains("runners");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << content;
}

}  // namespace trackrun
