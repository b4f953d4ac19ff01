#include "kgaudit/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kgaudit {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write file: " + p.string());
    return out;
}

// shortest decimal that round-trips the double exactly
std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    std::string s = os.str();
    for (int prec = 1; prec < 17; ++prec) {
        std::ostringstream t;
        t.precision(prec);
        t << v;
        if (std::stod(t.str()) == v) return t.str();
    }
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t c = line.find(',', start);
        if (c == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, c - start));
        start = c + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

SplitLabel split_label_from_string(const std::string& s) {
    if (s == "train") return SplitLabel::Train;
    if (s == "test") return SplitLabel::Test;
    if (s == "novel") return SplitLabel::Novel;
    throw std::runtime_error("bad split label in CSV: " + s);
}

}  // namespace

void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<double>& losses) {
    auto out = open_out(path);
    out << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) out << i << ',' << num(losses[i]) << '\n';
}

void write_score_degree_csv(const std::filesystem::path& path, const Graph& g,
                            const std::vector<ScoreDegreeRecord>& table,
                            const std::vector<std::string>& group) {
    if (!group.empty() && group.size() != table.size())
        throw std::runtime_error("group column does not match table");
    auto out = open_out(path);
    out << "entity_id,etype,degree,score,split,group\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const ScoreDegreeRecord& r = table[i];
        out << g.entity(r.entity).id << ',' << g.type_name(r.etype) << ',' << r.degree << ','
            << num(r.score) << ',' << to_string(r.label) << ','
            << (group.empty() ? "" : group[i]) << '\n';
    }
}

std::vector<ScoreDegreeRecord> read_score_degree_csv(const std::filesystem::path& path,
                                                     const Graph& g,
                                                     std::vector<std::string>* group) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
    std::vector<ScoreDegreeRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split_csv(line);
        if (cols.size() != 6) throw std::runtime_error("bad CSV row in " + path.string());
        ScoreDegreeRecord r;
        r.entity = g.entity_id(cols[0]);
        r.etype = g.type_id(cols[1]);
        r.degree = std::stoull(cols[2]);
        r.score = std::stod(cols[3]);
        r.label = split_label_from_string(cols[4]);
        out.push_back(r);
        if (group) group->push_back(cols[5]);
    }
    return out;
}

std::string metrics_json(const RankMetrics& m, FilterPolicy policy, const std::string& direction,
                         const std::string& stratum) {
    nlohmann::json j;
    j["policy"] = to_string(policy);
    j["direction"] = direction;
    j["stratum"] = stratum;
    j["MR"] = m.mean_rank;
    j["MRR"] = m.mrr;
    j["hits1"] = m.hits1;
    j["hits10"] = m.hits10;
    j["n"] = m.count;
    return j.dump();
}

void write_metrics_json(const std::filesystem::path& path,
                        const std::vector<std::string>& records) {
    auto out = open_out(path);
    out << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i)
        out << "  " << records[i] << (i + 1 < records.size() ? "," : "") << "\n";
    out << "]\n";
}

std::string regression_json(const RegressionReport& r) {
    nlohmann::json j;
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["r_squared"] = r.r_squared;
    j["n"] = r.n;
    j["transform"] = to_string(r.transform);
    j["dropped_zero_degree"] = r.dropped_zero_degree;
    return j.dump();
}

void write_outcome_csv(const std::filesystem::path& path, const PerturbOutcome& o) {
    auto out = open_out(path);
    out << "strategy,grid_value,repeat,rank\n";
    for (const GridPointOutcome& p : o.points)
        for (std::size_t rep = 0; rep < p.repeat_ranks.size(); ++rep)
            out << to_string(o.plan.strategy) << ',' << num(p.grid_value) << ',' << rep << ','
                << num(p.repeat_ranks[rep]) << '\n';
}

void write_summary_csv(const std::filesystem::path& path, const PerturbOutcome& o) {
    auto out = open_out(path);
    out << "strategy,grid_value,mean_rank,ci95\n";
    for (const GridPointOutcome& p : o.points)
        out << to_string(o.plan.strategy) << ',' << num(p.grid_value) << ',' << num(p.mean_rank)
            << ',' << num(p.ci95_half_width) << '\n';
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const ConfigMap& cfg, double wall_time_seconds) {
    nlohmann::json j;
    j["command"] = command;
    j["format_version"] = 1;
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [key, value] : cfg.values()) c[key] = value;
    j["config"] = c;
    {
        std::ostringstream os;
        os << std::hex << cfg.hash();
        j["config_hash"] = os.str();
    }
    j["seed_scheme"] = "splitmix64(master, stream, counter)";
    j["wall_time_s"] = wall_time_seconds;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace kgaudit
