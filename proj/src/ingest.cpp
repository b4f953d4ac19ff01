#include "kgaudit/ingest.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kgaudit/rng.hpp"

namespace kgaudit {

namespace {

std::vector<std::string> split_tsv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

std::ifstream open_input(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw IngestError("cannot open file: " + p.string());
    return in;
}

}  // namespace

LoadResult load_graph(const std::filesystem::path& entity_path,
                      const std::filesystem::path& edge_path, SchemaPolicy policy) {
    LoadResult result;
    Graph& g = result.graph;
    IngestReport& report = result.report;

    {
        std::ifstream in = open_input(entity_path);
        std::string line;
        if (!std::getline(in, line)) throw IngestError("entity file is empty: " + entity_path.string());
        if (split_tsv(line) != std::vector<std::string>{"id", "label", "etype"})
            throw IngestError(entity_path.string() + ": expected header 'id\\tlabel\\tetype'");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto cols = split_tsv(line);
            if (cols.size() != 3)
                throw IngestError(entity_path.string() + ":" + std::to_string(lineno) +
                                  ": expected 3 tab-separated columns");
            TypeId t = g.add_type(cols[2]);
            g.add_entity(cols[0], cols[1], t);
        }
    }

    {
        std::ifstream in = open_input(edge_path);
        std::string line;
        if (!std::getline(in, line)) throw IngestError("edge file is empty: " + edge_path.string());
        if (split_tsv(line) != std::vector<std::string>{"head_id", "relation", "tail_id"})
            throw IngestError(edge_path.string() + ": expected header 'head_id\\trelation\\ttail_id'");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto cols = split_tsv(line);
            if (cols.size() != 3)
                throw IngestError(edge_path.string() + ":" + std::to_string(lineno) +
                                  ": expected 3 tab-separated columns");
            auto where = [&] { return edge_path.string() + ":" + std::to_string(lineno); };
            auto h = g.find_entity(cols[0]);
            auto t = g.find_entity(cols[2]);
            if (!h || !t) {
                std::string msg = where() + ": unresolvable endpoint " +
                                  (h ? cols[2] : cols[0]);
                if (policy == SchemaPolicy::Strict) throw IngestError(msg);
                report.warnings.push_back(msg);
                ++report.skipped;
                continue;
            }
            RelationId r;
            if (auto existing = g.find_relation(cols[1])) {
                r = *existing;
            } else {
                r = g.add_relation(cols[1], cols[1], g.entity(*h).etype, g.entity(*t).etype);
            }
            try {
                if (g.add_triple(*h, r, *t) == AddTripleResult::Duplicate) ++report.duplicates;
            } catch (const GraphError& e) {
                std::string msg = where() + ": " + e.what();
                if (policy == SchemaPolicy::Strict) throw IngestError(msg);
                report.warnings.push_back(msg);
                ++report.skipped;
            }
        }
    }

    report.entities = g.num_entities();
    report.relation_types = g.num_relations();
    report.triples = g.num_triples();
    return result;
}

void export_graph(const Graph& g, const std::filesystem::path& entity_path,
                  const std::filesystem::path& edge_path) {
    std::ofstream ent(entity_path);
    if (!ent) throw IngestError("cannot write file: " + entity_path.string());
    ent << "id\tlabel\tetype\n";
    for (const Entity& e : g.entities())
        ent << e.id << '\t' << e.label << '\t' << g.type_name(e.etype) << '\n';

    std::ofstream edg(edge_path);
    if (!edg) throw IngestError("cannot write file: " + edge_path.string());
    edg << "head_id\trelation\ttail_id\n";
    for (const Triple& t : g.triples())
        edg << g.entity(t.head).id << '\t' << g.relation(t.rel).id << '\t'
            << g.entity(t.tail).id << '\n';
}

Graph generate_synthetic(const SynthConfig& cfg) {
    Graph g;
    for (const auto& [type_name, count] : cfg.entities_per_type) {
        if (count == 0) throw IngestError("entity count must be positive for type " + type_name);
        TypeId t = g.add_type(type_name);
        for (std::size_t i = 0; i < count; ++i) {
            std::string id = type_name + "_" + std::to_string(i);
            g.add_entity(id, id, t);
        }
    }
    if (cfg.pa_strength < 0) throw IngestError("preferential-attachment strength must be >= 0");

    for (const SynthRelation& rel : cfg.relations) {
        auto ht = g.find_type(rel.head_type);
        auto tt = g.find_type(rel.tail_type);
        if (!ht || !tt)
            throw IngestError("relation " + rel.name + " references undeclared type");
        g.add_relation(rel.name, rel.name, *ht, *tt);
    }

    std::size_t rel_idx = 0;
    for (const SynthRelation& rel : cfg.relations) {
        RelationId r = g.relation_id(rel.name);
        std::vector<EntityId> heads = g.entities_of_type(g.relation(r).head_type);
        std::vector<EntityId> tails = g.entities_of_type(g.relation(r).tail_type);
        const bool same_type = g.relation(r).head_type == g.relation(r).tail_type;
        std::size_t distinct_pairs = heads.size() * tails.size() - (same_type ? heads.size() : 0);
        if (rel.num_triples > distinct_pairs)
            throw IngestError("relation " + rel.name + ": requested " +
                              std::to_string(rel.num_triples) + " triples but only " +
                              std::to_string(distinct_pairs) + " distinct pairs exist");

        Rng rng = make_rng(derive_seed(cfg.seed, 0x5e17, rel_idx++));
        std::size_t made = 0;
        while (made < rel.num_triples) {
            EntityId h = heads[uniform_index(rng, heads.size())];
            // tail chosen with probability proportional to (degree + 1)^gamma
            double total = 0;
            for (EntityId t : tails)
                total += std::pow(double(g.degree(t)) + 1.0, cfg.pa_strength);
            double x = uniform_real(rng) * total;
            EntityId pick = tails.back();
            for (EntityId t : tails) {
                x -= std::pow(double(g.degree(t)) + 1.0, cfg.pa_strength);
                if (x <= 0) {
                    pick = t;
                    break;
                }
            }
            if (pick == h) continue;
            if (g.has_triple(h, r, pick)) continue;  // resample; keep the counter clean
            g.add_triple(h, r, pick);
            ++made;
        }
    }
    return g;
}

// --- checkpoints ------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'K', 'G', 'E', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, std::uint32_t(v));
    put_u32(out, std::uint32_t(v >> 32));
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, std::uint32_t(s.size()));
    out.write(s.data(), std::streamsize(s.size()));
}

void put_floats(std::ostream& out, const std::vector<float>& v) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint writer assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(float)));
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IngestError("checkpoint truncated");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t lo = get_u32(in);
    std::uint64_t hi = get_u32(in);
    return lo | (hi << 32);
}

std::string get_string(std::istream& in) {
    std::uint32_t n = get_u32(in);
    std::string s(n, '\0');
    in.read(s.data(), std::streamsize(n));
    if (!in) throw IngestError("checkpoint truncated");
    return s;
}

void get_floats(std::istream& in, std::vector<float>& v, std::size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * sizeof(float)));
    if (!in) throw IngestError("checkpoint truncated");
}

}  // namespace

void save_model(const Model& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write checkpoint: " + path.string());
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, std::uint32_t(m.kind));
    put_u32(out, std::uint32_t(m.norm));
    put_u32(out, m.entity_dim);
    put_u32(out, m.relation_dim);
    put_u64(out, m.num_entities());
    put_u64(out, m.num_relations());
    for (const std::string& id : m.entity_ids) put_string(out, id);
    put_floats(out, m.entity_emb);
    for (const std::string& id : m.relation_ids) put_string(out, id);
    put_floats(out, m.relation_emb);
    put_u32(out, m.relation_normal.empty() ? 0 : 1);
    if (!m.relation_normal.empty()) put_floats(out, m.relation_normal);
    if (!out) throw IngestError("write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open checkpoint: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IngestError("not a model checkpoint (bad magic): " + path.string());
    std::uint32_t version = get_u32(in);
    if (version != kVersion)
        throw IngestError("unsupported checkpoint version " + std::to_string(version));
    Model m;
    m.kind = ModelKind(get_u32(in));
    m.norm = Norm(get_u32(in));
    m.entity_dim = get_u32(in);
    m.relation_dim = get_u32(in);
    std::uint64_t ne = get_u64(in);
    std::uint64_t nr = get_u64(in);
    m.entity_ids.reserve(ne);
    for (std::uint64_t i = 0; i < ne; ++i) m.entity_ids.push_back(get_string(in));
    get_floats(in, m.entity_emb, ne * m.entity_dim);
    m.relation_ids.reserve(nr);
    for (std::uint64_t i = 0; i < nr; ++i) m.relation_ids.push_back(get_string(in));
    get_floats(in, m.relation_emb, nr * m.relation_dim);
    if (get_u32(in) != 0) get_floats(in, m.relation_normal, nr * m.entity_dim);
    return m;
}

}  // namespace kgaudit
