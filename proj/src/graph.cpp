#include "kgaudit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgaudit/rng.hpp"

namespace kgaudit {

TypeId Graph::add_type(const std::string& name) {
    if (auto it = type_index_.find(name); it != type_index_.end()) return it->second;
    TypeId id = static_cast<TypeId>(type_names_.size());
    type_names_.push_back(name);
    type_index_.emplace(name, id);
    return id;
}

TypeId Graph::type_id(const std::string& name) const {
    auto it = type_index_.find(name);
    if (it == type_index_.end()) throw GraphError("unknown entity type: " + name);
    return it->second;
}

std::optional<TypeId> Graph::find_type(const std::string& name) const {
    auto it = type_index_.find(name);
    if (it == type_index_.end()) return std::nullopt;
    return it->second;
}

EntityId Graph::add_entity(const std::string& id, const std::string& label, TypeId etype) {
    if (etype >= type_names_.size()) throw GraphError("entity type id out of range");
    if (entity_index_.count(id)) throw GraphError("duplicate entity id: " + id);
    EntityId e = static_cast<EntityId>(entities_.size());
    entities_.push_back(Entity{id, label, etype});
    entity_index_.emplace(id, e);
    incident_.emplace_back();
    return e;
}

RelationId Graph::add_relation(const std::string& id, const std::string& label,
                               TypeId head_type, TypeId tail_type) {
    if (head_type >= type_names_.size() || tail_type >= type_names_.size())
        throw GraphError("relation signature references unknown type");
    if (relation_index_.count(id)) throw GraphError("duplicate relation id: " + id);
    RelationId r = static_cast<RelationId>(relations_.size());
    relations_.push_back(Relation{id, label, head_type, tail_type});
    relation_index_.emplace(id, r);
    return r;
}

EntityId Graph::entity_id(const std::string& id) const {
    auto it = entity_index_.find(id);
    if (it == entity_index_.end()) throw GraphError("unknown entity id: " + id);
    return it->second;
}

RelationId Graph::relation_id(const std::string& id) const {
    auto it = relation_index_.find(id);
    if (it == relation_index_.end()) throw GraphError("unknown relation id: " + id);
    return it->second;
}

std::optional<EntityId> Graph::find_entity(const std::string& id) const {
    auto it = entity_index_.find(id);
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationId> Graph::find_relation(const std::string& id) const {
    auto it = relation_index_.find(id);
    if (it == relation_index_.end()) return std::nullopt;
    return it->second;
}

void Graph::check_entity(EntityId e) const {
    if (e >= entities_.size()) throw GraphError("entity id out of range");
}

void Graph::check_relation(RelationId r) const {
    if (r >= relations_.size()) throw GraphError("relation id out of range");
}

AddTripleResult Graph::add_triple(EntityId h, RelationId r, EntityId t) {
    check_entity(h);
    check_entity(t);
    check_relation(r);
    if (schema_enforced) {
        const Relation& rel = relations_[r];
        if (entities_[h].etype != rel.head_type || entities_[t].etype != rel.tail_type)
            throw GraphError("schema violation: (" + entities_[h].id + ", " + rel.id + ", " +
                             entities_[t].id + ") does not match signature " +
                             type_names_[rel.head_type] + " -> " + type_names_[rel.tail_type]);
    }
    Triple triple{h, r, t};
    if (!triple_set_.insert(triple).second) {
        ++duplicates_rejected_;
        return AddTripleResult::Duplicate;
    }
    TripleId id = static_cast<TripleId>(triples_.size());
    triples_.push_back(triple);
    incident_[h].push_back(id);
    if (t != h) incident_[t].push_back(id);
    return AddTripleResult::Added;
}

const std::vector<TripleId>& Graph::incident_at(EntityId e) const {
    check_entity(e);
    return incident_[e];
}

EntityId Graph::other_endpoint(TripleId t, EntityId e) const {
    const Triple& tr = triples_.at(t);
    if (tr.head == e) return tr.tail;
    if (tr.tail == e) return tr.head;
    throw GraphError("triple not incident to entity");
}

std::size_t Graph::distinct_neighbors(EntityId e) const {
    std::unordered_set<EntityId> seen;
    for (TripleId t : incident_at(e)) seen.insert(other_endpoint(t, e));
    seen.erase(e);
    return seen.size();
}

std::size_t Graph::typed_degree(EntityId e, RelationId r) const {
    check_relation(r);
    std::size_t n = 0;
    for (TripleId t : incident_at(e))
        if (triples_[t].rel == r) ++n;
    return n;
}

std::map<TypeId, std::pair<std::size_t, std::size_t>> Graph::neighbor_type_profile(EntityId e) const {
    std::map<TypeId, std::pair<std::size_t, std::size_t>> out;
    std::unordered_set<EntityId> seen;
    for (TripleId t : incident_at(e)) {
        EntityId o = other_endpoint(t, e);
        auto& [conns, distinct] = out[entities_[o].etype];
        ++conns;
        if (seen.insert(o).second) ++distinct;
    }
    return out;
}

std::vector<EntityId> Graph::entities_of_type(TypeId t) const {
    std::vector<EntityId> out;
    for (EntityId e = 0; e < entities_.size(); ++e)
        if (entities_[e].etype == t) out.push_back(e);
    return out;
}

Graph Graph::with_triples(const std::vector<Triple>& keep) const {
    Graph g;
    g.schema_enforced = schema_enforced;
    g.type_names_ = type_names_;
    g.type_index_ = type_index_;
    g.entities_ = entities_;
    g.entity_index_ = entity_index_;
    g.relations_ = relations_;
    g.relation_index_ = relation_index_;
    g.incident_.resize(entities_.size());
    for (const Triple& t : keep) g.add_triple(t);
    return g;
}

namespace {

void split_indices(std::vector<TripleId>& pool, SplitRatios ratios, Rng& rng,
                   DatasetSplit& out) {
    for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[uniform_index(rng, i)]);
    const std::size_t n = pool.size();
    std::size_t n_train = static_cast<std::size_t>(std::llround(ratios.train * double(n)));
    std::size_t n_valid = static_cast<std::size_t>(std::llround(ratios.valid * double(n)));
    n_train = std::min(n_train, n);
    n_valid = std::min(n_valid, n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < n_train)
            out.train.push_back(pool[i]);
        else if (i < n_train + n_valid)
            out.valid.push_back(pool[i]);
        else
            out.test.push_back(pool[i]);
    }
}

}  // namespace

DatasetSplit random_split(const Graph& g, SplitRatios ratios, std::uint64_t seed,
                          bool per_relation) {
    if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0)
        throw GraphError("split ratios must be nonnegative");
    if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9)
        throw GraphError("split ratios must sum to 1");
    if (ratios.train <= 0) throw GraphError("train ratio must be positive");

    DatasetSplit out;
    out.seed = seed;
    out.ratios = ratios;
    if (per_relation) {
        std::vector<std::vector<TripleId>> by_rel(g.num_relations());
        for (TripleId t = 0; t < g.num_triples(); ++t) by_rel[g.triple(t).rel].push_back(t);
        for (RelationId r = 0; r < g.num_relations(); ++r) {
            Rng rng = make_rng(derive_seed(seed, std::uint64_t(r) + 1));
            split_indices(by_rel[r], ratios, rng, out);
        }
    } else {
        std::vector<TripleId> pool(g.num_triples());
        std::iota(pool.begin(), pool.end(), TripleId{0});
        Rng rng = make_rng(derive_seed(seed, 0));
        split_indices(pool, ratios, rng, out);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.valid.begin(), out.valid.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

}  // namespace kgaudit
