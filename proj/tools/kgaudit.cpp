// kgaudit: train knowledge-graph embedding models and audit the effect of
// entity degree on their link-prediction scores.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgaudit/audit.hpp"
#include "kgaudit/config.hpp"
#include "kgaudit/graph.hpp"
#include "kgaudit/ingest.hpp"
#include "kgaudit/model.hpp"
#include "kgaudit/perturb.hpp"
#include "kgaudit/rank.hpp"
#include "kgaudit/report.hpp"
#include "kgaudit/train.hpp"

namespace fs = std::filesystem;
using namespace kgaudit;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void require_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path))
        throw std::runtime_error("missing " + what + ": " + path);
}

Graph load_data(const std::string& entities, const std::string& edges, const std::string& policy) {
    require_file(entities, "entity file");
    require_file(edges, "edge file");
    SchemaPolicy p = policy == "skip" ? SchemaPolicy::Skip : SchemaPolicy::Strict;
    return load_graph(entities, edges, p).graph;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "Disease:D_3 rel:DaG" -> query; direction follows the relation signature
// relative to the fixed entity's type.
Query parse_query(const Graph& g, const std::string& text, CandidateScope scope) {
    auto parts = split_list(text, ' ');
    if (parts.size() != 2 || parts[1].rfind("rel:", 0) != 0)
        throw std::runtime_error("bad query '" + text + "', expected \"Type:ENTITY_ID rel:REL_ID\"");
    std::size_t colon = parts[0].find(':');
    if (colon == std::string::npos)
        throw std::runtime_error("bad query '" + text + "', expected \"Type:ENTITY_ID rel:REL_ID\"");
    std::string type_name = parts[0].substr(0, colon);
    std::string entity_str = parts[0].substr(colon + 1);
    std::string rel_str = parts[1].substr(4);

    Query q;
    q.fixed_entity = g.entity_id(entity_str);
    q.relation = g.relation_id(rel_str);
    q.scope = scope;
    const Relation& rel = g.relation(q.relation);
    TypeId fixed_type = g.entity(q.fixed_entity).etype;
    if (g.type_name(fixed_type) != type_name)
        throw std::runtime_error("query entity " + entity_str + " has type " +
                                 g.type_name(fixed_type) + ", not " + type_name);
    if (fixed_type == rel.head_type)
        q.direction = Direction::CompleteTail;
    else if (fixed_type == rel.tail_type)
        q.direction = Direction::CompleteHead;
    else
        throw std::runtime_error("entity type " + g.type_name(fixed_type) +
                                 " does not appear in the signature of " + rel.id);
    return q;
}

TrainConfig train_config_from(const ConfigMap& cfg) {
    TrainConfig tc;
    tc.epochs = std::uint32_t(cfg.get_int("train.epochs", tc.epochs));
    tc.learning_rate = cfg.get_double("train.lr", tc.learning_rate);
    tc.num_negatives = std::uint32_t(cfg.get_int("train.negatives", tc.num_negatives));
    tc.batch_size = std::uint32_t(cfg.get_int("train.batch", tc.batch_size));
    tc.margin = cfg.get_double("train.margin", tc.margin);
    tc.adversarial_temperature = cfg.get_double("train.alpha", tc.adversarial_temperature);
    tc.dim = std::uint32_t(cfg.get_int("train.dim", tc.dim));
    tc.norm = norm_from_string(cfg.get_string("train.norm", "l2"));
    tc.corrupt_mode = corrupt_mode_from_string(cfg.get_string("train.corrupt", "both"));
    tc.seed = std::uint64_t(cfg.get_int("train.seed", 0));
    tc.deterministic = cfg.get_bool("train.deterministic", true);
    if (tc.learning_rate <= 0) throw ConfigError("train.lr must be positive");
    if (tc.epochs == 0) throw ConfigError("train.epochs must be positive");
    if (tc.num_negatives == 0) throw ConfigError("train.negatives must be positive");
    return tc;
}

SplitRatios split_ratios_from(const ConfigMap& cfg) {
    SplitRatios r;
    r.train = cfg.get_double("split.train", r.train);
    r.valid = cfg.get_double("split.valid", r.valid);
    r.test = cfg.get_double("split.test", r.test);
    return r;
}

SynthConfig synth_config_from(const ConfigMap& cfg) {
    SynthConfig sc;
    sc.seed = std::uint64_t(cfg.get_int("synth.seed", 0));
    sc.pa_strength = cfg.get_double("synth.pa_strength", 1.0);
    for (const std::string& t : split_list(cfg.get_string("synth.types"))) {
        auto kv = split_list(t, ':');
        if (kv.size() != 2) throw ConfigError("synth.types entry '" + t + "', expected Name:count");
        sc.entities_per_type.emplace_back(kv[0], std::stoull(kv[1]));
    }
    for (const std::string& t : split_list(cfg.get_string("synth.relations"))) {
        auto kv = split_list(t, ':');
        if (kv.size() != 4)
            throw ConfigError("synth.relations entry '" + t + "', expected Name:Head:Tail:count");
        sc.relations.push_back(SynthRelation{kv[0], kv[1], kv[2], std::stoull(kv[3])});
    }
    return sc;
}

const std::set<std::string> kTrainKeys = {
    "train.epochs", "train.lr",    "train.negatives",     "train.batch",
    "train.margin", "train.alpha", "train.dim",           "train.norm",
    "train.corrupt", "train.seed", "train.deterministic",
};
const std::set<std::string> kSplitKeys = {"split.train", "split.valid", "split.test", "split.seed",
                                          "split.per_relation"};

void merge_keys(std::set<std::string>& dst, const std::set<std::string>& src) {
    dst.insert(src.begin(), src.end());
}

std::size_t audit_threads() {
    if (const char* env = std::getenv("KGE_AUDIT_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return std::size_t(v);
    }
    return 1;
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

Model load_checkpoint_for(const Graph& g, const std::string& path) {
    require_file(path, "checkpoint");
    Model m = load_model(path);
    if (m.num_entities() != g.num_entities() || m.num_relations() != g.num_relations())
        throw std::runtime_error("checkpoint does not match graph: " +
                                 std::to_string(m.num_entities()) + " entities vs " +
                                 std::to_string(g.num_entities()));
    for (EntityId e = 0; e < g.num_entities(); ++e)
        if (m.entity_ids[e] != g.entity(e).id)
            throw std::runtime_error("checkpoint entity order does not match graph at row " +
                                     std::to_string(e));
    return m;
}

// --- subcommands ------------------------------------------------------------

int cmd_ingest(const std::string& entities, const std::string& edges, const std::string& policy,
               const std::string& out_dir) {
    Timer timer;
    require_file(entities, "entity file");
    require_file(edges, "edge file");
    LoadResult res = load_graph(entities, edges,
                                policy == "skip" ? SchemaPolicy::Skip : SchemaPolicy::Strict);
    fs::create_directories(out_dir);

    nlohmann::json j;
    j["entities"] = res.report.entities;
    j["relation_types"] = res.report.relation_types;
    j["triples"] = res.report.triples;
    j["duplicates"] = res.report.duplicates;
    j["skipped"] = res.report.skipped;
    j["warnings"] = res.report.warnings;
    std::ofstream(fs::path(out_dir) / "ingest_report.json") << j.dump(2) << "\n";

    ConfigMap cfg;
    cfg.set("data.entities", entities);
    cfg.set("data.edges", edges);
    cfg.set("data.policy", policy);
    write_manifest(fs::path(out_dir) / "manifest.json", "ingest", cfg, timer.seconds());
    std::cout << "ingested " << res.report.entities << " entities, " << res.report.relation_types
              << " relation types, " << res.report.triples << " triples ("
              << res.report.duplicates << " duplicates, " << res.report.skipped << " skipped)\n";
    return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
    Timer timer;
    require_file(config_path, "synth config");
    ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.validate_keys({"synth.seed", "synth.pa_strength", "synth.types", "synth.relations"});
    Graph g = generate_synthetic(synth_config_from(cfg));
    fs::create_directories(out_dir);
    export_graph(g, fs::path(out_dir) / "entities.tsv", fs::path(out_dir) / "edges.tsv");
    write_manifest(fs::path(out_dir) / "manifest.json", "synth", cfg, timer.seconds());
    std::cout << "generated " << g.num_entities() << " entities, " << g.num_triples()
              << " triples\n";
    return 0;
}

int cmd_train(const ConfigMap& cfg, const std::string& out_dir) {
    Timer timer;
    ModelKind kind = model_kind_from_string(cfg.get_string("model.kind"));
    Graph g = load_data(cfg.get_string("data.entities"), cfg.get_string("data.edges"),
                        cfg.get_string("data.policy", "strict"));
    TrainConfig tc = train_config_from(cfg);
    DatasetSplit split = random_split(g, split_ratios_from(cfg),
                                      std::uint64_t(cfg.get_int("split.seed", 0)),
                                      cfg.get_bool("split.per_relation", false));
    TrainResult res = train(g, split.train, kind, tc);
    fs::create_directories(out_dir);
    save_model(res.model, fs::path(out_dir) / "checkpoint.bin");
    write_loss_trace_csv(fs::path(out_dir) / "loss_trace.csv", res.epoch_loss);
    write_manifest(fs::path(out_dir) / "manifest.json", "train", cfg, timer.seconds());
    std::cout << "trained " << to_string(kind) << " for " << tc.epochs << " epochs; final loss "
              << (res.epoch_loss.empty() ? 0.0 : res.epoch_loss.back()) << "\n";
    return 0;
}

int cmd_eval(const ConfigMap& cfg, const std::string& checkpoint, const std::string& out_dir) {
    Timer timer;
    Graph g = load_data(cfg.get_string("data.entities"), cfg.get_string("data.edges"),
                        cfg.get_string("data.policy", "strict"));
    Model m = load_checkpoint_for(g, checkpoint);
    DatasetSplit split = random_split(g, split_ratios_from(cfg),
                                      std::uint64_t(cfg.get_int("split.seed", 0)),
                                      cfg.get_bool("split.per_relation", false));
    if (split.test.empty()) throw std::runtime_error("test split is empty; adjust split ratios");

    FilterPolicy policy = filter_policy_from_string(cfg.get_string("eval.policy", "filtered"));
    std::vector<Direction> dirs;
    std::string dir_str = cfg.get_string("eval.directions", "tail");
    if (dir_str == "tail" || dir_str == "both") dirs.push_back(Direction::CompleteTail);
    if (dir_str == "head" || dir_str == "both") dirs.push_back(Direction::CompleteHead);
    if (dirs.empty()) throw ConfigError("eval.directions must be tail, head or both");
    CandidateScope scope = cfg.get_string("eval.scope", "type") == "all"
                               ? CandidateScope::AllEntities
                               : CandidateScope::SchemaType;

    TrueTripleIndex known;
    known.add(g, split.train);
    known.add(g, split.valid);
    known.add(g, split.test);
    std::vector<Triple> test;
    for (TripleId t : split.test) test.push_back(g.triple(t));

    std::vector<std::string> records;
    RankMetrics overall = evaluate(m, g, test, policy, dirs, known, scope);
    records.push_back(metrics_json(overall, policy, dir_str, "all"));

    // optional degree strata: "name:min:max,..." with max "inf" allowed
    if (cfg.has("eval.strata")) {
        std::vector<DegreeStratum> strata;
        for (const std::string& s : split_list(cfg.get_string("eval.strata"))) {
            auto kv = split_list(s, ':');
            if (kv.size() != 3) throw ConfigError("eval.strata entry '" + s + "'");
            DegreeStratum ds;
            ds.name = kv[0];
            ds.min_degree = std::stoull(kv[1]);
            ds.max_degree = kv[2] == "inf" ? SIZE_MAX : std::stoull(kv[2]);
            strata.push_back(ds);
        }
        Graph train_graph = [&] {
            std::vector<Triple> tr;
            for (TripleId t : split.train) tr.push_back(g.triple(t));
            return g.with_triples(tr);
        }();
        for (const StratumMetrics& sm :
             stratified_evaluate(m, g, test, train_graph, strata, policy, dirs, known, scope)) {
            if (sm.empty)
                records.push_back("{\"stratum\": \"" + sm.name + "\", \"empty\": true}");
            else
                records.push_back(metrics_json(sm.metrics, policy, dir_str, sm.name));
        }
    }

    fs::create_directories(out_dir);
    write_metrics_json(fs::path(out_dir) / "metrics.json", records);
    write_manifest(fs::path(out_dir) / "manifest.json", "eval", cfg, timer.seconds());
    std::cout << "evaluated " << overall.count << " ranks: MR " << overall.mean_rank << " MRR "
              << overall.mrr << " hits@10 " << overall.hits10 << "\n";
    return 0;
}

int cmd_audit(const ConfigMap& cfg, const std::string& checkpoint,
              const std::vector<std::string>& query_strs, const std::string& out_dir) {
    Timer timer;
    Graph g = load_data(cfg.get_string("data.entities"), cfg.get_string("data.edges"),
                        cfg.get_string("data.policy", "strict"));
    Model m = load_checkpoint_for(g, checkpoint);
    DatasetSplit split = random_split(g, split_ratios_from(cfg),
                                      std::uint64_t(cfg.get_int("split.seed", 0)),
                                      cfg.get_bool("split.per_relation", false));
    if (query_strs.empty()) throw std::runtime_error("audit requires at least one --query");
    DegreeTransform transform =
        cfg.get_string("audit.transform", "log10") == "identity" ? DegreeTransform::Identity
                                                                 : DegreeTransform::Log10;

    std::vector<Query> queries;
    for (const std::string& qs : query_strs)
        queries.push_back(parse_query(g, qs, CandidateScope::SchemaType));

    fs::create_directories(out_dir);

    std::vector<std::vector<ScoreDegreeRecord>> tables(queries.size());
    parallel_for(queries.size(), audit_threads(),
                 [&](std::size_t i) { tables[i] = score_degree_table(m, g, split, queries[i]); });

    nlohmann::json summary = nlohmann::json::array();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        write_score_degree_csv(fs::path(out_dir) / ("score_degree_" + std::to_string(i) + ".csv"),
                               g, tables[i]);
        nlohmann::json entry;
        entry["query"] = query_strs[i];
        entry["query_entity_degree"] = g.degree(queries[i].fixed_entity);
        try {
            entry["regression"] = nlohmann::json::parse(regression_json(regress(tables[i], transform)));
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        // all-entity table for the type-separation check
        Query all_q = queries[i];
        all_q.scope = CandidateScope::AllEntities;
        try {
            auto all_table = score_degree_table(m, g, split, all_q);
            const Relation& rel = g.relation(queries[i].relation);
            TypeId valid = queries[i].direction == Direction::CompleteTail ? rel.tail_type
                                                                           : rel.head_type;
            TypeSeparation sep = type_separation(all_table, valid);
            entry["type_separation"] = {{"separated", sep.separated},
                                        {"margin", sep.margin},
                                        {"overlap", sep.overlap}};
        } catch (const std::exception& e) {
            entry["type_separation_error"] = e.what();
        }
        if (cfg.has("audit.disease_type")) {
            TypeId dt = g.type_id(cfg.get_string("audit.disease_type"));
            DiseaseLinkReport dl = disease_link_analysis(m, g, queries[i], dt);
            entry["disease_link"] = {
                {"linked_n", dl.linked.n},
                {"linked_median", dl.linked.median},
                {"unlinked_n", dl.unlinked.n},
                {"unlinked_median", dl.unlinked.median},
                {"by_count", nlohmann::json::parse(regression_json(dl.by_count))},
                {"by_ratio", nlohmann::json::parse(regression_json(dl.by_ratio))},
            };
        }
        if (cfg.get_bool("audit.trivial", false)) {
            TrivialRelationReport tr = trivial_relation_analysis(m, g, split, queries[i], transform);
            if (!tr.applicable) {
                entry["trivial_relation"] = {{"applicable", false}};
            } else {
                std::vector<std::string> groups;
                for (bool b : tr.has_other_edge) groups.push_back(b ? "other-edge" : "no-other-edge");
                write_score_degree_csv(
                    fs::path(out_dir) / ("trivial_relation_" + std::to_string(i) + ".csv"), g,
                    tr.table, groups);
                entry["trivial_relation"] = {
                    {"applicable", true},
                    {"other_edge_n", tr.other_edge_n},
                    {"no_other_edge_n", tr.no_other_edge_n},
                    {"other_edge_median", tr.other_edge_median},
                    {"no_other_edge_median", tr.no_other_edge_median},
                    {"other_edge", nlohmann::json::parse(regression_json(tr.other_edge))},
                    {"no_other_edge", nlohmann::json::parse(regression_json(tr.no_other_edge))},
                };
            }
        }
        summary.push_back(entry);
    }
    std::ofstream(fs::path(out_dir) / "regressions.json") << summary.dump(2) << "\n";
    write_manifest(fs::path(out_dir) / "manifest.json", "audit", cfg, timer.seconds());
    std::cout << "audited " << queries.size() << " queries\n";
    return 0;
}

int cmd_perturb(const ConfigMap& cfg, const std::string& out_dir) {
    Timer timer;
    Graph g = load_data(cfg.get_string("data.entities"), cfg.get_string("data.edges"),
                        cfg.get_string("data.policy", "strict"));
    DatasetSplit split = random_split(g, split_ratios_from(cfg),
                                      std::uint64_t(cfg.get_int("split.seed", 0)),
                                      cfg.get_bool("split.per_relation", false));

    PerturbPlan plan;
    plan.strategy = perturb_strategy_from_string(cfg.get_string("perturb.strategy"));
    for (const std::string& v : split_list(cfg.get_string("perturb.grid")))
        plan.grid.push_back(std::stod(v));
    plan.repeats = std::size_t(cfg.get_int("perturb.repeats", 10));
    plan.master_seed = std::uint64_t(cfg.get_int("perturb.master_seed", 0));
    plan.train = train_config_from(cfg);
    plan.model_kind = model_kind_from_string(cfg.get_string("model.kind"));
    plan.measurement = parse_query(g, cfg.get_string("perturb.query"), CandidateScope::SchemaType);
    if (cfg.has("perturb.disease_type"))
        plan.disease_type = g.type_id(cfg.get_string("perturb.disease_type"));
    for (const std::string& t : split_list(cfg.get_string("perturb.addition_types", "")))
        plan.addition_types.push_back(g.type_id(t));

    std::string target = cfg.get_string("perturb.target");
    if (target == "auto-top-novel" || target == "auto-bottom") {
        TrainResult base = train(g, split.train, plan.model_kind, plan.train);
        plan.target = select_target(base.model, g, plan.measurement,
                                    target == "auto-top-novel" ? TargetMode::TopNovel
                                                               : TargetMode::Bottom);
    } else {
        plan.target = g.entity_id(target);
    }

    PerturbOutcome outcome = run_experiment(g, split.train, plan);
    fs::create_directories(out_dir);
    write_outcome_csv(fs::path(out_dir) / "outcome.csv", outcome);
    write_summary_csv(fs::path(out_dir) / "summary.csv", outcome);
    write_manifest(fs::path(out_dir) / "manifest.json", "perturb", cfg, timer.seconds());
    std::cout << "perturbed target " << g.entity(plan.target).id << " over " << plan.grid.size()
              << " grid points x " << plan.repeats << " repeats; baseline rank "
              << outcome.baseline_rank << "\n";
    return 0;
}

int cmd_report(const std::string& dir) {
    fs::path manifest = fs::path(dir) / "manifest.json";
    require_file(manifest.string(), "run manifest");
    std::ifstream in(manifest);
    nlohmann::json j = nlohmann::json::parse(in);
    std::cout << "run: " << j.value("command", "?") << "\n";
    std::cout << "config_hash: " << j.value("config_hash", "?") << "\n";
    std::cout << "artifacts:\n";
    for (const auto& entry : fs::directory_iterator(dir))
        std::cout << "  " << entry.path().filename().string() << " (" << fs::file_size(entry.path())
                  << " bytes)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph embedding trainer and topological-imbalance audit toolkit"};
    app.require_subcommand(1);

    std::string entities, edges, policy = "strict", out_dir = "out", config_path, checkpoint;
    std::vector<std::string> query_strs;

    // flag overrides shared by config-driven subcommands
    std::vector<std::string> overrides;
    auto add_data_flags = [&](CLI::App* cmd) {
        cmd->add_option("--entities", entities, "entity TSV file");
        cmd->add_option("--edges", edges, "edge TSV file");
        cmd->add_option("--config", config_path, "run config file (key = value with sections)");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--set", overrides, "override a config key, e.g. --set train.lr=0.01");
    };

    auto* ingest_cmd = app.add_subcommand("ingest", "load and validate a TSV edge list");
    ingest_cmd->add_option("--entities", entities)->required();
    ingest_cmd->add_option("--edges", edges)->required();
    ingest_cmd->add_option("--policy", policy, "strict|skip");
    ingest_cmd->add_option("--out", out_dir);

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scale-free graph");
    synth_cmd->add_option("--config", config_path)->required();
    synth_cmd->add_option("--out", out_dir);

    std::string model_kind, lr_flag, epochs_flag, seed_flag, deterministic_flag;
    auto* train_cmd = app.add_subcommand("train", "train an embedding model");
    add_data_flags(train_cmd);
    train_cmd->add_option("--model", model_kind, "transe|transh|distmult|complex|rotate");
    train_cmd->add_option("--lr", lr_flag, "learning rate");
    train_cmd->add_option("--epochs", epochs_flag);
    train_cmd->add_option("--seed", seed_flag, "training seed");
    train_cmd->add_flag_callback("--deterministic",
                                 [&] { overrides.push_back("train.deterministic=true"); });

    std::string eval_policy;
    auto* eval_cmd = app.add_subcommand("eval", "rank test triples and report metrics");
    add_data_flags(eval_cmd);
    eval_cmd->add_option("--checkpoint", checkpoint)->required();
    eval_cmd->add_option("--policy", eval_policy, "raw|filtered");

    auto* audit_cmd = app.add_subcommand("audit", "degree/score audits for completion queries");
    add_data_flags(audit_cmd);
    audit_cmd->add_option("--checkpoint", checkpoint)->required();
    audit_cmd->add_option("--query", query_strs, "e.g. \"Disease:D_0 rel:DaG\"")->take_all();

    std::string plan_path;
    auto* perturb_cmd = app.add_subcommand("perturb", "edge removal/addition/rewiring experiments");
    add_data_flags(perturb_cmd);
    perturb_cmd->add_option("--plan", plan_path, "perturbation plan config file");

    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "summarize a run directory");
    report_cmd->add_option("--dir", report_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest_cmd->parsed()) return cmd_ingest(entities, edges, policy, out_dir);
        if (synth_cmd->parsed()) return cmd_synth(config_path, out_dir);
        if (report_cmd->parsed()) return cmd_report(report_dir);

        // config-driven commands: file (optional) then flag overrides
        ConfigMap cfg;
        if (perturb_cmd->parsed() && !plan_path.empty()) {
            require_file(plan_path, "perturbation plan");
            cfg = ConfigMap::parse_file(plan_path);
        } else if (!config_path.empty()) {
            require_file(config_path, "config file");
            cfg = ConfigMap::parse_file(config_path);
        }
        if (!entities.empty()) cfg.set("data.entities", entities);
        if (!edges.empty()) cfg.set("data.edges", edges);
        if (!model_kind.empty()) cfg.set("model.kind", model_kind);
        if (!lr_flag.empty()) cfg.set("train.lr", lr_flag);
        if (!epochs_flag.empty()) cfg.set("train.epochs", epochs_flag);
        if (!seed_flag.empty()) cfg.set("train.seed", seed_flag);
        if (!eval_policy.empty()) cfg.set("eval.policy", eval_policy);
        for (const std::string& kv : overrides) {
            std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }

        std::set<std::string> allowed = {"data.entities", "data.edges", "data.policy",
                                         "model.kind"};
        merge_keys(allowed, kTrainKeys);
        merge_keys(allowed, kSplitKeys);
        if (train_cmd->parsed()) {
            cfg.validate_keys(allowed);
            return cmd_train(cfg, out_dir);
        }
        if (eval_cmd->parsed()) {
            merge_keys(allowed, {"eval.policy", "eval.directions", "eval.scope", "eval.strata"});
            cfg.validate_keys(allowed);
            return cmd_eval(cfg, checkpoint, out_dir);
        }
        if (audit_cmd->parsed()) {
            merge_keys(allowed, {"audit.transform", "audit.disease_type", "audit.trivial"});
            cfg.validate_keys(allowed);
            return cmd_audit(cfg, checkpoint, query_strs, out_dir);
        }
        if (perturb_cmd->parsed()) {
            merge_keys(allowed, {"perturb.strategy", "perturb.grid", "perturb.repeats",
                                 "perturb.master_seed", "perturb.query", "perturb.target",
                                 "perturb.disease_type", "perturb.addition_types"});
            cfg.validate_keys(allowed);
            return cmd_perturb(cfg, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
