#pragma once

#include <cstdint>
#include <vector>

#include "kgaudit/graph.hpp"
#include "kgaudit/model.hpp"

namespace kgaudit {

class TrainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CorruptMode { Head, Tail, Both };

CorruptMode corrupt_mode_from_string(const std::string& s);
std::string to_string(CorruptMode m);

struct TrainConfig {
    std::uint32_t epochs = 100;
    double learning_rate = 0.02;
    std::uint32_t num_negatives = 16;
    std::uint32_t batch_size = 1024;
    double margin = 9.0;
    double adversarial_temperature = 1.0;
    std::uint32_t dim = 64;
    Norm norm = Norm::L2;
    CorruptMode corrupt_mode = CorruptMode::Both;
    std::uint64_t seed = 0;
    bool deterministic = true;
};

// Self-adversarial negative-sampling loss:
//   L = -log sig(margin + pos) - sum_i w_i log sig(-neg_i - margin)
// with w_i the softmax of (alpha * neg_i), treated as constants when
// differentiating.
double nssa_loss(double pos_score, const std::vector<double>& neg_scores, double margin,
                 double alpha);

// Derivative of nssa_loss with respect to the positive score and each
// negative score.
struct NssaGrad {
    double d_pos;
    std::vector<double> d_neg;
};
NssaGrad nssa_loss_grad(double pos_score, const std::vector<double>& neg_scores, double margin,
                        double alpha);

// k corruptions of one triple. Each negative replaces exactly one side with a
// uniformly sampled entity different from the original one on that side.
// Under Both, head or tail is chosen with probability 1/2 per negative.
std::vector<Triple> corrupt(const Triple& t, CorruptMode mode, std::uint32_t k,
                            std::size_t num_entities, Rng& rng);

// Loss and sparse gradient for one positive with its negatives.
double grad(const Model& m, const Triple& pos, const std::vector<Triple>& negs, double margin,
            double alpha, SparseGrad& out);

// Per-parameter-table accumulated squared gradients.
struct OptimizerState {
    std::vector<double> entity_acc;
    std::vector<double> relation_acc;
    std::vector<double> normal_acc;
    double epsilon = 1e-10;

    static OptimizerState for_model(const Model& m);
};

// G += g^2 ; theta -= lr * g / (sqrt(G) + eps), over the rows in grad.
void adagrad_step(Model& m, const SparseGrad& grad, OptimizerState& state, double lr);

struct TrainResult {
    Model model;
    std::vector<double> epoch_loss;  // mean loss per epoch
};

// corrupt -> score -> nssa_loss -> grad -> adagrad_step over epochs x batches,
// with constraint projection after each step. Throws TrainError on NaN loss.
TrainResult train(const Graph& g, const std::vector<TripleId>& train_triples, ModelKind kind,
                  const TrainConfig& cfg);

}  // namespace kgaudit
