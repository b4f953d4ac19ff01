#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kgaudit/audit.hpp"
#include "kgaudit/config.hpp"
#include "kgaudit/graph.hpp"
#include "kgaudit/perturb.hpp"
#include "kgaudit/rank.hpp"

namespace kgaudit {

// epoch, mean_loss
void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<double>& losses);

// entity_id, etype, degree, score, split, group
void write_score_degree_csv(const std::filesystem::path& path, const Graph& g,
                            const std::vector<ScoreDegreeRecord>& table,
                            const std::vector<std::string>& group = {});
std::vector<ScoreDegreeRecord> read_score_degree_csv(const std::filesystem::path& path,
                                                     const Graph& g,
                                                     std::vector<std::string>* group = nullptr);

// {policy, direction, stratum, MR, MRR, hits1, hits10, n}
std::string metrics_json(const RankMetrics& m, FilterPolicy policy, const std::string& direction,
                         const std::string& stratum);
void write_metrics_json(const std::filesystem::path& path, const std::vector<std::string>& records);

std::string regression_json(const RegressionReport& r);

// strategy, grid_value, repeat, rank
void write_outcome_csv(const std::filesystem::path& path, const PerturbOutcome& o);
// strategy, grid_value, mean_rank, ci95
void write_summary_csv(const std::filesystem::path& path, const PerturbOutcome& o);

// Full resolved config + seeds + format version; enough to reproduce the run
// bit-identically in deterministic mode. Wall time is recorded separately so
// report files stay byte-stable across reruns.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const ConfigMap& cfg, double wall_time_seconds);

}  // namespace kgaudit
