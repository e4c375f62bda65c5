#include "evgen/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

namespace evgen {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    std::string text(buf);
    if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
    return text;
}

namespace {

void write_row(std::ostringstream& out, const std::string& id, char type, Point p, double demand, double ready,
               double due, double service) {
    out << id << ' ' << type << ' ' << format_number(p.x) << ' ' << format_number(p.y) << ' '
        << format_number(demand) << ' ' << format_number(ready) << ' ' << format_number(due) << ' '
        << format_number(service) << '\n';
}

constexpr std::string_view kHeader = "StringID Type x y demand ReadyTime DueDate ServiceTime";

struct ParamLine {
    const char* key;
    const char* description;
};

constexpr ParamLine kParams[] = {
    {"Q", "load capacity"},         {"B", "battery capacity"},  {"r", "energy consumption rate"},
    {"g", "charging rate"},         {"H", "planning horizon"},  {"phi", "time window width fraction"},
};

}  // namespace

std::string write_instance_text(const Instance& in) {
    std::ostringstream out;
    const double h = in.temporal.horizon;
    out << kHeader << '\n';
    write_row(out, "D0", 'd', in.depot.position, 0.0, 0.0, h, 0.0);
    for (const auto& c : in.customers)
        write_row(out, "C" + std::to_string(c.node.id), 'c', c.node.position, c.demand, c.window.earliest,
                  c.window.latest, c.service);
    for (const auto& s : in.stations) write_row(out, "S" + std::to_string(s.id), 'f', s.position, 0.0, 0.0, h, 0.0);
    out << '\n';
    const double values[] = {in.vehicle.capacity,    in.vehicle.battery, in.vehicle.consumption,
                             in.vehicle.charge_rate, in.temporal.horizon, in.temporal.width_fraction};
    for (std::size_t i = 0; i < std::size(kParams); ++i)
        out << kParams[i].key << ' ' << kParams[i].description << " /" << format_number(values[i]) << "/\n";
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    return tokens;
}

double to_number(const std::string& token, int line, const char* what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || !std::isfinite(value))
        throw ParseError(line, std::string("invalid ") + what + " '" + token + "'");
    return value;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

Instance parse_instance_text(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::istringstream in{std::string(text)};
        for (std::string l; std::getline(in, l);) {
            if (!l.empty() && l.back() == '\r') l.pop_back();
            lines.push_back(l);
        }
    }
    if (lines.empty()) throw ParseError(0, "empty instance text");
    if (split(lines[0]) != split(std::string(kHeader))) throw ParseError(1, "missing or malformed header");

    struct Row {
        int line;
        char type;
        int id;
        Point p;
        double demand, ready, due, service;
    };
    std::vector<Row> rows;
    std::size_t i = 1;
    for (; i < lines.size() && !blank(lines[i]); ++i) {
        const int ln = static_cast<int>(i) + 1;
        const auto tok = split(lines[i]);
        if (tok.size() != 8) throw ParseError(ln, "node row needs 8 columns, found " + std::to_string(tok.size()));
        if (tok[1].size() != 1 || std::string_view("dcf").find(tok[1][0]) == std::string_view::npos)
            throw ParseError(ln, "unknown node type '" + tok[1] + "'");
        const char type = tok[1][0];
        const char prefix = type == 'd' ? 'D' : type == 'c' ? 'C' : 'S';
        if (tok[0].size() < 2 || tok[0][0] != prefix)
            throw ParseError(ln, "id '" + tok[0] + "' does not match type '" + tok[1] + "'");
        int id = 0;
        try {
            std::size_t used = 0;
            id = std::stoi(tok[0].substr(1), &used);
            if (used != tok[0].size() - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError(ln, "invalid node id '" + tok[0] + "'");
        }
        Row row{ln,
                type,
                id,
                {to_number(tok[2], ln, "x"), to_number(tok[3], ln, "y")},
                to_number(tok[4], ln, "demand"),
                to_number(tok[5], ln, "ReadyTime"),
                to_number(tok[6], ln, "DueDate"),
                to_number(tok[7], ln, "ServiceTime")};
        if (!in_unit_square(row.p)) throw ParseError(ln, "coordinate outside the unit square");
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError(static_cast<int>(std::min(i, lines.size())), "no node rows");

    std::map<std::string, double> params;
    int last_line = static_cast<int>(i);
    for (++i; i < lines.size(); ++i) {
        const int ln = static_cast<int>(i) + 1;
        last_line = ln;
        if (blank(lines[i])) continue;
        const auto& l = lines[i];
        const auto open = l.find('/');
        const auto close = l.rfind('/');
        if (open == std::string::npos || close == open) throw ParseError(ln, "parameter line needs /value/");
        const auto key = split(l.substr(0, open));
        if (key.empty()) throw ParseError(ln, "parameter line without a key");
        params[key[0]] = to_number(l.substr(open + 1, close - open - 1), ln, "parameter value");
    }
    for (const auto& p : kParams)
        if (!params.contains(p.key))
            throw ParseError(last_line, std::string("missing parameter line '") + p.key + "'");

    Instance in;
    in.vehicle = {params["Q"], params["B"], params["r"], params["g"]};
    in.temporal = {params["H"], params["phi"]};
    if (!(in.vehicle.capacity > 0 && in.vehicle.battery > 0 && in.vehicle.consumption > 0 &&
          in.vehicle.charge_rate > 0 && in.temporal.horizon > 0))
        throw ParseError(last_line, "vehicle parameters and H must be positive");
    if (!(in.temporal.width_fraction > 0 && in.temporal.width_fraction <= 1))
        throw ParseError(last_line, "phi must lie in (0, 1]");

    if (rows[0].type != 'd' || rows[0].id != 0) throw ParseError(rows[0].line, "first row must be depot D0");
    in.depot = {0, NodeKind::depot, rows[0].p};
    std::size_t k = 1;
    for (; k < rows.size() && rows[k].type == 'c'; ++k) {
        const auto& r = rows[k];
        if (r.id != static_cast<int>(k)) throw ParseError(r.line, "customer ids must run 1..N in order");
        if (!(r.ready >= 0 && r.ready <= r.due && r.due <= in.temporal.horizon + kTolerance))
            throw ParseError(r.line, "time window outside [0, H]");
        if (!(r.demand >= 0 && r.service >= 0)) throw ParseError(r.line, "negative demand or service time");
        in.customers.push_back({{r.id, NodeKind::customer, r.p}, r.demand, r.service, {r.ready, r.due}});
    }
    const int n = in.customer_count();
    for (; k < rows.size(); ++k) {
        const auto& r = rows[k];
        if (r.type != 'f') throw ParseError(r.line, "expected a station row after the customers");
        if (r.id != n + 1 + in.station_count()) throw ParseError(r.line, "station ids must run N+1.. in order");
        in.stations.push_back({r.id, NodeKind::station, r.p});
    }
    return in;
}

Instance read_instance_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str());
}

std::string instance_name(const GenerationOutcome& o) {
    const auto& c = o.config();
    char seed[32];
    std::snprintf(seed, sizeof seed, "%05llu", static_cast<unsigned long long>(o.seed));
    return std::to_string(o.instance.customer_count()) + "C" + std::to_string(o.instance.station_count()) + "S_" +
           std::string(to_string(c.spatial.family)) + "_" + std::string(to_string(c.windows.regime)) + "_seed" +
           seed;
}

std::string_view feasibility_status(const GenerationOutcome& o) {
    switch (o.kind) {
        case OutcomeKind::accepted: return o.stage2 == Stage2State::verified ? "feasible" : "unverified";
        case OutcomeKind::rejected_stage1:
        case OutcomeKind::rejected_stage2: return "infeasible";
        case OutcomeKind::unknown_stage2: return "unverified";
    }
    return "unverified";
}

json metadata_json(const GenerationOutcome& o, const MetadataOptions& options) {
    json j;
    j["schema_version"] = kMetadataSchemaVersion;
    j["generator_version"] = kGeneratorVersion;
    j["name"] = instance_name(o);
    j["seed"] = o.seed;
    j["status"] = feasibility_status(o);
    j["outcome"] = to_string(o.kind);
    j["counts"] = {{"customers", o.instance.customer_count()}, {"stations", o.instance.station_count()}};
    j["config"] = config_to_json(o.config());
    j["screening"] = screening_to_json(o.screening);
    json v = {{"state", to_string(o.stage2)}};
    if (o.verification) v.update(verification_to_json(*o.verification, options.include_timing));
    j["verification"] = v;

    const auto& d = o.diagnostics;
    json origins = json::array();
    for (auto origin : d.station_origins)
        origins.push_back(origin == StationOrigin::midpoint    ? "midpoint"
                          : origin == StationOrigin::depot_ray ? "depot_ray"
                                                               : "top_up");
    json centers = json::array();
    for (const auto& p : d.cluster_centers) centers.push_back({p.x, p.y});
    j["diagnostics"] = {{"cluster_centers", centers},
                        {"forced_separation_acceptances", d.forced_separation_acceptances},
                        {"max_customer_distance", d.max_customer_distance},
                        {"range", o.instance.vehicle.range()},
                        {"midpoint_candidates", d.midpoint_candidates},
                        {"ray_candidates", d.ray_candidates},
                        {"truncated_stations", d.truncated_stations},
                        {"relaxed_stations", d.relaxed_stations},
                        {"station_origins", origins}};
    if (options.include_timing) j["timing"] = {{"seconds", o.elapsed_seconds}};
    return j;
}

void validate_metadata(const json& m) {
    for (const char* key : {"schema_version", "generator_version", "name", "seed", "status", "outcome", "counts",
                            "config", "screening", "verification"})
        if (!m.contains(key)) throw std::invalid_argument(std::string("metadata missing '") + key + "'");
    if (m.at("schema_version").get<int>() != kMetadataSchemaVersion)
        throw std::invalid_argument("unsupported metadata schema version");
    (void)config_from_json(m.at("config"));

    const auto status = m.at("status").get<std::string>();
    const auto outcome = m.at("outcome").get<std::string>();
    const auto state = m.at("verification").at("state").get<std::string>();
    const bool passed = m.at("screening").at("passed").get<bool>();
    const auto report = screening_from_json(m.at("screening"));
    if (report.passed() != passed) throw std::invalid_argument("screening.passed disagrees with its violations");

    bool consistent = false;
    if (outcome == "accepted")
        consistent = passed && ((status == "feasible" && state == "verified" &&
                                 m["verification"].value("status", "") == "feasible") ||
                                (status == "unverified" && state != "verified"));
    else if (outcome == "rejected_stage1")
        consistent = !passed && status == "infeasible" && state == "not_run";
    else if (outcome == "rejected_stage2")
        consistent = passed && status == "infeasible" && m["verification"].value("status", "") == "infeasible";
    else if (outcome == "unknown_stage2")
        consistent = passed && status == "unverified" && m["verification"].value("status", "") == "unknown";
    if (!consistent) throw std::invalid_argument("metadata status '" + status + "' inconsistent with outcome '" +
                                                 outcome + "'");
}

json read_metadata_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    validate_metadata(m);
    return m;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::optional<PersistedFiles> persist_outcome(const GenerationOutcome& o, const std::filesystem::path& root,
                                              const PersistOptions& options) {
    if (!o.accepted() && !options.persist_rejects) return std::nullopt;
    const auto dir = root / (o.accepted() ? "feasible" : "infeasible");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    const std::string base = instance_name(o);
    std::string name = base;
    PersistedFiles files;
    for (int suffix = 1; std::filesystem::exists(dir / (name + ".txt")); ++suffix) {
        name = base + "_" + std::to_string(suffix);
        files.renamed = true;
    }
    if (files.renamed)
        std::cerr << "warning: " << (dir / (base + ".txt")).string() << " exists, writing " << name << ".txt\n";

    files.instance = dir / (name + ".txt");
    files.metadata = dir / (name + ".meta.json");
    write_file(files.instance, write_instance_text(o.instance));
    write_file(files.metadata, metadata_json(o, options.metadata).dump(2) + "\n");
    return files;
}

}  // namespace evgen
