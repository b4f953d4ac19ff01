#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgaudit/graph.hpp"
#include "kgaudit/model.hpp"
#include "kgaudit/rank.hpp"
#include "kgaudit/train.hpp"

namespace kgaudit {

class PerturbError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PerturbStrategy { RemoveDisease, RemoveRandom, AddDisease, AddAntCompGene, Rewire };
std::string to_string(PerturbStrategy s);
PerturbStrategy perturb_strategy_from_string(const std::string& s);

enum class TargetMode { TopNovel, Bottom };

// Highest-scored candidate with no existing query-relation edge to the query
// entity (TopNovel), or the worst-scored candidate (Bottom).
EntityId select_target(const Model& m, const Graph& g, const Query& q, TargetMode mode);

enum class RemoveStrategy { Disease, Random };

// Remove round(fraction * eligible) incident triples of target, sampled
// without replacement. Disease restricts eligibility to edges whose other
// endpoint has the given disease type. Fraction-to-count uses
// round-half-to-even. Input graph is untouched.
Graph remove_edges(const Graph& g, EntityId target, RemoveStrategy strategy, double fraction,
                   TypeId disease_type, Rng& rng);

enum class AddStrategy { Disease, AntCompGene };

// Add `count` schema-conforming triples between target and partners sampled
// uniformly from the strategy's eligible entity types, with the relation type
// sampled uniformly among schema-valid ones for the pair. Never duplicates an
// existing triple. excluded_entity (the measurement disease under Disease) is
// never chosen as a partner.
Graph add_edges(const Graph& g, EntityId target, AddStrategy strategy, std::size_t count,
                const std::vector<TypeId>& eligible_types, EntityId excluded_entity, Rng& rng);

// Rewire round(fraction * degree) incident triples of target: the non-target
// endpoint is replaced by a uniform same-type entity that is neither an
// existing neighbour of target nor a previous replacement. Degree, edge
// direction and the incident relation-type multiset are preserved.
Graph rewire_edges(const Graph& g, EntityId target, double fraction, Rng& rng);

struct PerturbPlan {
    EntityId target = 0;
    PerturbStrategy strategy = PerturbStrategy::RemoveRandom;
    std::vector<double> grid;  // fractions (remove/rewire) or absolute counts (add); starts at 0
    std::size_t repeats = 10;
    std::uint64_t master_seed = 0;
    TrainConfig train;
    ModelKind model_kind = ModelKind::TransE;
    Query measurement;                      // rank of target is measured here
    TypeId disease_type = 0;                // for the Disease strategies
    std::vector<TypeId> addition_types;     // eligible partner types for additions
};

struct GridPointOutcome {
    double grid_value = 0;
    std::vector<double> repeat_ranks;
    std::vector<std::string> failures;  // diverged repeats, recorded and excluded
    double mean_rank = 0;
    double ci95_half_width = 0;  // Student-t over repeat ranks; 0 when n < 2
};

struct PerturbOutcome {
    PerturbPlan plan;
    double baseline_rank = 0;
    std::vector<GridPointOutcome> points;
};

// For each grid point x repeat: perturb the training graph with an
// independently derived seed, retrain from scratch, and measure the rank of
// the plan's target for the measurement query (raw rank over the schema-valid
// candidate type).
PerturbOutcome run_experiment(const Graph& g, const std::vector<TripleId>& train_triples,
                              const PerturbPlan& plan);

// mean +/- t_{0.975, n-1} * s / sqrt(n) half-width over the samples.
double t_interval_half_width(const std::vector<double>& samples);

}  // namespace kgaudit
