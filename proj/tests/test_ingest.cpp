#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kgaudit/ingest.hpp"

using namespace kgaudit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("kgaudit_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

const char* kEntities =
    "id\tlabel\tetype\n"
    "d0\tdisease zero\tDisease\n"
    "g0\tgene zero\tGene\n"
    "g1\tgene one\tGene\n";

const char* kEdges =
    "head_id\trelation\ttail_id\n"
    "d0\tDaG\tg0\n"
    "d0\tDaG\tg1\n"
    "g0\tGiG\tg1\n";

}  // namespace

TEST_CASE("load_graph parses entities and edges with inferred signatures") {
    TempDir dir;
    write_file(dir.path / "entities.tsv", kEntities);
    write_file(dir.path / "edges.tsv", kEdges);
    LoadResult res = load_graph(dir.path / "entities.tsv", dir.path / "edges.tsv");
    CHECK(res.report.entities == 3);
    CHECK(res.report.relation_types == 2);
    CHECK(res.report.triples == 3);
    CHECK(res.report.skipped == 0);
    const Graph& g = res.graph;
    CHECK(g.entity(g.entity_id("d0")).etype == g.type_id("Disease"));
    // DaG signature inferred from first row: Disease -> Gene
    const Relation& dag = g.relation(g.relation_id("DaG"));
    CHECK(dag.head_type == g.type_id("Disease"));
    CHECK(dag.tail_type == g.type_id("Gene"));
    CHECK(g.degree(g.entity_id("d0")) == 2);
}

TEST_CASE("load_graph strict policy rejects bad rows, skip policy counts them") {
    TempDir dir;
    write_file(dir.path / "entities.tsv", kEntities);
    write_file(dir.path / "edges.tsv",
               "head_id\trelation\ttail_id\n"
               "d0\tDaG\tg0\n"
               "g1\tDaG\tg0\n"       // violates inferred Disease->Gene signature
               "nope\tDaG\tg0\n");   // unknown endpoint
    CHECK_THROWS_AS(load_graph(dir.path / "entities.tsv", dir.path / "edges.tsv",
                               SchemaPolicy::Strict),
                    IngestError);
    LoadResult res =
        load_graph(dir.path / "entities.tsv", dir.path / "edges.tsv", SchemaPolicy::Skip);
    CHECK(res.report.triples == 1);
    CHECK(res.report.skipped == 2);
    CHECK(res.report.warnings.size() == 2);
}

TEST_CASE("duplicate edge rows are counted once") {
    TempDir dir;
    write_file(dir.path / "entities.tsv", kEntities);
    write_file(dir.path / "edges.tsv",
               "head_id\trelation\ttail_id\n"
               "d0\tDaG\tg0\n"
               "d0\tDaG\tg0\n");
    LoadResult res = load_graph(dir.path / "entities.tsv", dir.path / "edges.tsv");
    CHECK(res.report.triples == 1);
    CHECK(res.report.duplicates == 1);
}

TEST_CASE("missing header or file is an error") {
    TempDir dir;
    write_file(dir.path / "entities.tsv", "d0\tx\tDisease\n");
    write_file(dir.path / "edges.tsv", "head_id\trelation\ttail_id\n");
    CHECK_THROWS_AS(load_graph(dir.path / "entities.tsv", dir.path / "edges.tsv"), IngestError);
    CHECK_THROWS_AS(load_graph(dir.path / "absent.tsv", dir.path / "edges.tsv"), IngestError);
}

TEST_CASE("export then load round-trips the graph") {
    TempDir dir;
    write_file(dir.path / "entities.tsv", kEntities);
    write_file(dir.path / "edges.tsv", kEdges);
    Graph g = load_graph(dir.path / "entities.tsv", dir.path / "edges.tsv").graph;
    export_graph(g, dir.path / "e2.tsv", dir.path / "t2.tsv");
    Graph g2 = load_graph(dir.path / "e2.tsv", dir.path / "t2.tsv").graph;
    REQUIRE(g2.num_entities() == g.num_entities());
    REQUIRE(g2.num_triples() == g.num_triples());
    for (EntityId e = 0; e < g.num_entities(); ++e) {
        CHECK(g2.entity(e).id == g.entity(e).id);
        CHECK(g2.entity(e).etype == g.entity(e).etype);
    }
    for (TripleId t = 0; t < g.num_triples(); ++t) CHECK(g2.triple(t) == g.triple(t));
}

TEST_CASE("generate_synthetic: schema, no duplicates, no self-loops, deterministic") {
    SynthConfig cfg;
    cfg.entities_per_type = {{"A", 50}, {"B", 80}};
    cfg.relations = {{"r_ab", "A", "B", 400}, {"r_bb", "B", "B", 200}};
    cfg.pa_strength = 1.0;
    cfg.seed = 17;
    Graph g = generate_synthetic(cfg);
    CHECK(g.num_entities() == 130);
    CHECK(g.num_triples() == 600);
    for (const Triple& t : g.triples()) {
        CHECK(t.head != t.tail);
        const Relation& r = g.relation(t.rel);
        CHECK(g.entity(t.head).etype == r.head_type);
        CHECK(g.entity(t.tail).etype == r.tail_type);
    }
    CHECK(g.duplicates_rejected() == 0);

    Graph h = generate_synthetic(cfg);
    CHECK(h.triples() == g.triples());
    cfg.seed = 18;
    Graph k = generate_synthetic(cfg);
    CHECK(k.triples() != g.triples());
}

TEST_CASE("generate_synthetic rejects infeasible triple counts") {
    SynthConfig cfg;
    cfg.entities_per_type = {{"A", 3}, {"B", 3}};
    cfg.relations = {{"r", "A", "B", 10}};  // only 9 distinct pairs
    CHECK_THROWS_AS(generate_synthetic(cfg), IngestError);
}

TEST_CASE("preferential attachment concentrates tail degree") {
    auto top_share = [](double strength, std::size_t top_k) {
        SynthConfig cfg;
        cfg.entities_per_type = {{"H", 500}, {"T", 500}};
        cfg.relations = {{"r", "H", "T", 5000}};
        cfg.pa_strength = strength;
        cfg.seed = 23;
        Graph g = generate_synthetic(cfg);
        std::vector<std::size_t> deg;
        for (EntityId e : g.entities_of_type(g.type_id("T"))) deg.push_back(g.degree(e));
        std::sort(deg.rbegin(), deg.rend());
        std::size_t top = 0, total = 0;
        for (std::size_t i = 0; i < deg.size(); ++i) {
            if (i < top_k) top += deg[i];
            total += deg[i];
        }
        return double(top) / double(total);
    };
    double flat = top_share(0.0, 5);
    double heavy = top_share(2.0, 5);
    CHECK(heavy > 2.0 * flat);
    CHECK(heavy >= 0.10);  // top 1% of tails hold at least 10% of the edges
}

TEST_CASE("checkpoint round-trip is bit exact for every kind") {
    TempDir dir;
    Graph g;
    TypeId t = g.add_type("T");
    for (int i = 0; i < 5; ++i) g.add_entity("e" + std::to_string(i), "", t);
    g.add_relation("r0", "", t, t);
    g.add_relation("r1", "", t, t);
    for (ModelKind kind : {ModelKind::TransE, ModelKind::TransH, ModelKind::DistMult,
                           ModelKind::ComplEx, ModelKind::RotatE}) {
        Model m = init_model(g, kind, 7, 99, Norm::L1);
        fs::path p = dir.path / ("m" + std::to_string(int(kind)) + ".kgec");
        save_model(m, p);
        Model r = load_model(p);
        CHECK(r.kind == m.kind);
        CHECK(r.norm == m.norm);
        CHECK(r.entity_dim == m.entity_dim);
        CHECK(r.entity_ids == m.entity_ids);
        CHECK(r.relation_ids == m.relation_ids);
        CHECK(r.entity_emb == m.entity_emb);
        CHECK(r.relation_emb == m.relation_emb);
        CHECK(r.relation_normal == m.relation_normal);
    }
}

TEST_CASE("checkpoint load rejects wrong magic") {
    TempDir dir;
    write_file(dir.path / "bad.kgec", "not a checkpoint");
    CHECK_THROWS_AS(load_model(dir.path / "bad.kgec"), IngestError);
}

TEST_CASE("checkpoint handles the reference dimension 304") {
    TempDir dir;
    Graph g;
    TypeId t = g.add_type("T");
    g.add_entity("a", "", t);
    g.add_entity("b", "", t);
    g.add_relation("r", "", t, t);
    Model m = init_model(g, ModelKind::TransE, 304, 1);
    save_model(m, dir.path / "wide.kgec");
    Model r = load_model(dir.path / "wide.kgec");
    CHECK(r.entity_dim == 304);
    CHECK(r.entity_emb == m.entity_emb);
}
