#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgaudit {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using TypeId = std::uint16_t;
using TripleId = std::uint32_t;

struct Entity {
    std::string id;
    std::string label;
    TypeId etype = 0;
};

struct Relation {
    std::string id;
    std::string label;
    TypeId head_type = 0;
    TypeId tail_type = 0;
};

struct Triple {
    EntityId head = 0;
    RelationId rel = 0;
    EntityId tail = 0;

    friend bool operator==(const Triple&, const Triple&) = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        std::uint64_t k = (std::uint64_t(t.head) << 32) ^ (std::uint64_t(t.rel) << 16) ^ t.tail;
        k += 0x9e3779b97f4a7c15ull;
        k = (k ^ (k >> 30)) * 0xbf58476d1ce4e5b9ull;
        return std::size_t(k ^ (k >> 31));
    }
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AddTripleResult { Added, Duplicate };

// Typed multi-relational triple store with incidence indices.
//
// Degree convention: a triple contributes 1 to the degree of each distinct
// endpoint, so a self-loop counts once. Parallel edges of different relation
// types between the same pair are distinct triples.
class Graph {
public:
    bool schema_enforced = true;

    TypeId add_type(const std::string& name);
    TypeId type_id(const std::string& name) const;
    std::optional<TypeId> find_type(const std::string& name) const;
    const std::string& type_name(TypeId t) const { return type_names_.at(t); }
    std::size_t num_types() const { return type_names_.size(); }

    EntityId add_entity(const std::string& id, const std::string& label, TypeId etype);
    RelationId add_relation(const std::string& id, const std::string& label,
                            TypeId head_type, TypeId tail_type);

    EntityId entity_id(const std::string& id) const;
    RelationId relation_id(const std::string& id) const;
    std::optional<EntityId> find_entity(const std::string& id) const;
    std::optional<RelationId> find_relation(const std::string& id) const;

    const Entity& entity(EntityId e) const { return entities_.at(e); }
    const Relation& relation(RelationId r) const { return relations_.at(r); }
    const std::vector<Entity>& entities() const { return entities_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const std::vector<Triple>& triples() const { return triples_; }
    const Triple& triple(TripleId t) const { return triples_.at(t); }
    std::size_t num_entities() const { return entities_.size(); }
    std::size_t num_relations() const { return relations_.size(); }
    std::size_t num_triples() const { return triples_.size(); }

    AddTripleResult add_triple(EntityId h, RelationId r, EntityId t);
    AddTripleResult add_triple(const Triple& t) { return add_triple(t.head, t.rel, t.tail); }
    bool has_triple(EntityId h, RelationId r, EntityId t) const {
        return triple_set_.count(Triple{h, r, t}) > 0;
    }
    std::size_t duplicates_rejected() const { return duplicates_rejected_; }

    std::size_t degree(EntityId e) const { return incident_at(e).size(); }
    std::size_t distinct_neighbors(EntityId e) const;
    std::size_t typed_degree(EntityId e, RelationId r) const;

    // Per neighbour entity type: (connection count, distinct neighbour count).
    std::map<TypeId, std::pair<std::size_t, std::size_t>> neighbor_type_profile(EntityId e) const;

    // Triples incident to e (a self-loop appears once).
    const std::vector<TripleId>& incident(EntityId e) const { return incident_at(e); }

    // The entity on the other side of triple t relative to e (e for self-loops).
    EntityId other_endpoint(TripleId t, EntityId e) const;

    std::vector<EntityId> entities_of_type(TypeId t) const;

    // New graph sharing this graph's entity/relation/type registry but holding
    // only the given triples. Triple ids are renumbered.
    Graph with_triples(const std::vector<Triple>& keep) const;

private:
    const std::vector<TripleId>& incident_at(EntityId e) const;
    void check_entity(EntityId e) const;
    void check_relation(RelationId r) const;

    std::vector<std::string> type_names_;
    std::unordered_map<std::string, TypeId> type_index_;
    std::vector<Entity> entities_;
    std::unordered_map<std::string, EntityId> entity_index_;
    std::vector<Relation> relations_;
    std::unordered_map<std::string, RelationId> relation_index_;
    std::vector<Triple> triples_;
    std::unordered_set<Triple, TripleHash> triple_set_;
    std::vector<std::vector<TripleId>> incident_;
    std::size_t duplicates_rejected_ = 0;
};

struct SplitRatios {
    double train = 0.8;
    double valid = 0.1;
    double test = 0.1;
};

struct DatasetSplit {
    std::vector<TripleId> train;
    std::vector<TripleId> valid;
    std::vector<TripleId> test;
    std::uint64_t seed = 0;
    SplitRatios ratios;
};

// Uniform random partition of the graph's triples, deterministic per
// (graph, ratios, seed). Set per_relation to stratify the split within each
// relation type so every relation lands in every subset.
DatasetSplit random_split(const Graph& g, SplitRatios ratios, std::uint64_t seed,
                          bool per_relation = false);

}  // namespace kgaudit
