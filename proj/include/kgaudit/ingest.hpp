#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kgaudit/graph.hpp"
#include "kgaudit/model.hpp"

namespace kgaudit {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SchemaPolicy {
    Strict,  // unresolvable endpoint or schema violation is fatal
    Skip     // bad rows are skipped and counted
};

struct IngestReport {
    std::size_t entities = 0;
    std::size_t relation_types = 0;
    std::size_t triples = 0;
    std::size_t duplicates = 0;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

struct LoadResult {
    Graph graph;
    IngestReport report;
};

// entities.tsv: id<TAB>label<TAB>etype, header row required.
// edges.tsv:    head_id<TAB>relation<TAB>tail_id, header row required.
// Relation signatures are inferred from the first occurrence of each relation
// label; later rows violating the inferred signature follow the policy.
LoadResult load_graph(const std::filesystem::path& entity_path,
                      const std::filesystem::path& edge_path,
                      SchemaPolicy policy = SchemaPolicy::Strict);

// Inverse of load_graph; rows written in canonical (index) order so that
// load(export(g)) == g.
void export_graph(const Graph& g, const std::filesystem::path& entity_path,
                  const std::filesystem::path& edge_path);

// --- synthetic graphs -------------------------------------------------------

struct SynthRelation {
    std::string name;
    std::string head_type;
    std::string tail_type;
    std::size_t num_triples = 0;
};

struct SynthConfig {
    std::vector<std::pair<std::string, std::size_t>> entities_per_type;
    std::vector<SynthRelation> relations;
    double pa_strength = 1.0;  // tail attachment prob ~ (degree + 1)^pa_strength
    std::uint64_t seed = 0;
};

// Heterogeneous scale-free generator: heads uniform over the head type, tails
// preferentially attached within the tail type. Deterministic per seed;
// self-loops and duplicate triples are never produced.
Graph generate_synthetic(const SynthConfig& cfg);

// --- model checkpoints ------------------------------------------------------

// Binary format: magic "KGEC", u32 version, kind, norm, dims, table sizes,
// then id strings and raw little-endian float32 rows. Round-trip is bit
// exact.
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace kgaudit
