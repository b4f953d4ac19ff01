#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgaudit/graph.hpp"
#include "kgaudit/rng.hpp"

namespace kgaudit {

enum class ModelKind { TransE, TransH, DistMult, ComplEx, RotatE };
enum class Norm { L1, L2 };

std::string to_string(ModelKind k);
std::string to_string(Norm n);
ModelKind model_kind_from_string(const std::string& s);
Norm norm_from_string(const std::string& s);

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Which parameter table a sparse-gradient row belongs to.
enum class ParamTable : std::uint32_t { EntityEmb = 0, RelationEmb = 1, RelationNormal = 2 };

// Gradient over only the embedding rows touched by a batch.
struct SparseGrad {
    std::unordered_map<std::uint64_t, std::vector<double>> rows;

    static std::uint64_t key(ParamTable table, std::uint32_t row) {
        return (std::uint64_t(table) << 32) | row;
    }
    std::vector<double>& at(ParamTable table, std::uint32_t row, std::size_t dim) {
        auto& v = rows[key(table, row)];
        if (v.empty()) v.assign(dim, 0.0);
        return v;
    }
};

// Embedding tables for one of the five model kinds.
//
// ComplEx and RotatE store each complex coordinate as an adjacent (real,
// imaginary) pair of floats, so the stored width is twice the logical
// dimension. RotatE relation coordinates are kept at unit modulus and TransH
// normals at unit L2 norm by project_constraints(), applied after every
// optimizer step.
struct Model {
    ModelKind kind = ModelKind::TransE;
    Norm norm = Norm::L2;
    std::uint32_t entity_dim = 0;    // stored floats per entity row
    std::uint32_t relation_dim = 0;  // stored floats per relation row

    std::vector<std::string> entity_ids;
    std::vector<std::string> relation_ids;
    std::vector<float> entity_emb;       // row-major, entity_dim per row
    std::vector<float> relation_emb;     // row-major, relation_dim per row
    std::vector<float> relation_normal;  // TransH only, entity_dim per row

    std::size_t num_entities() const { return entity_ids.size(); }
    std::size_t num_relations() const { return relation_ids.size(); }
    bool complex_valued() const { return kind == ModelKind::ComplEx || kind == ModelKind::RotatE; }
    std::uint32_t logical_dim() const { return complex_valued() ? entity_dim / 2 : entity_dim; }

    std::span<float> entity_row(EntityId e) {
        return {entity_emb.data() + std::size_t(e) * entity_dim, entity_dim};
    }
    std::span<const float> entity_row(EntityId e) const {
        return {entity_emb.data() + std::size_t(e) * entity_dim, entity_dim};
    }
    std::span<float> relation_row(RelationId r) {
        return {relation_emb.data() + std::size_t(r) * relation_dim, relation_dim};
    }
    std::span<const float> relation_row(RelationId r) const {
        return {relation_emb.data() + std::size_t(r) * relation_dim, relation_dim};
    }
    std::span<float> normal_row(RelationId r) {
        return {relation_normal.data() + std::size_t(r) * entity_dim, entity_dim};
    }
    std::span<const float> normal_row(RelationId r) const {
        return {relation_normal.data() + std::size_t(r) * entity_dim, entity_dim};
    }

    void check_ids(EntityId h, RelationId r, EntityId t) const;

    // Restore the RotatE unit-modulus / TransH unit-normal invariants.
    void project_constraints();
};

// Fresh model with randomly initialised tables; dim is the logical embedding
// dimension. Entity rows are aligned with the graph's entity indices.
Model init_model(const Graph& g, ModelKind kind, std::uint32_t dim, std::uint64_t seed,
                 Norm norm = Norm::L2);

// Plausibility score; higher means more plausible.
double score(const Model& m, EntityId h, RelationId r, EntityId t);

// Accumulate coeff * d(score)/d(params) into grad for the rows touched by
// (h, r, t). The L1 subgradient at 0 is taken as 0.
void score_grad(const Model& m, EntityId h, RelationId r, EntityId t, double coeff,
                SparseGrad& grad);

}  // namespace kgaudit
