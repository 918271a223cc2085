#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "teamseg/rng.hpp"

namespace teamseg {

// One-hidden-layer perceptron, logistic sigmoid on both layers. The team
// classifier uses 9 inputs (three color moments per HSV channel) and 4
// outputs (one per team class); sizes stay parametric so small hand-checked
// nets are expressible.
struct Mlp {
    int inputs = 9;
    int hidden = 4;
    int outputs = 4;
    std::vector<double> w1, b1; // w1: hidden x inputs, row-major
    std::vector<double> w2, b2; // w2: outputs x hidden

    Mlp() = default;
    Mlp(int in, int h, int out);

    // Weights and biases drawn uniformly from [-0.5, 0.5].
    static Mlp random(int in, int h, int out, Rng& rng);
};

std::vector<double> forward(const Mlp& net, std::span<const double> x);

// Sum of squared output errors for one sample.
double quadratic_error(std::span<const double> outputs, std::span<const double> target);

// One gradient-descent step on the squared error of a single sample;
// every weight moves by -alpha * dE/dw.
void backprop_step(Mlp& net, std::span<const double> x,
                   std::span<const double> target, double alpha);

struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<int> labels; // 1-based class ids
};

struct TrainRecord {
    int epoch;
    double error; // summed over the epoch's samples
};

inline constexpr double kDefaultStopError = 1e-3;
inline constexpr int kDefaultEpochCap = 10000;

// Per-sample gradient descent with a seeded shuffle each epoch; targets are
// one-hot vectors. Stops early once the epoch error drops below eps_stop.
std::vector<TrainRecord> train(Mlp& net, const Dataset& data, double alpha,
                               int epochs, uint64_t seed,
                               double eps_stop = kDefaultStopError);

double dataset_error(const Mlp& net, const Dataset& data);

struct SweepRow {
    int hidden;
    double final_error;
};

struct SweepResult {
    int chosen;
    std::vector<SweepRow> table;
};

// Trains one net per hidden-layer size and picks the smallest size whose
// final error is within `slack` of the best.
SweepResult sweep_hidden(const Dataset& data, std::span<const int> sizes,
                         double alpha, int epochs, uint64_t seed,
                         double slack = 0.05, int inputs = 9, int outputs = 4);

struct NnDecision {
    int class_id; // 1-based
    std::vector<double> outputs;
};

// Argmax output; an exact tie between the two largest throws TieError.
NnDecision classify_nn(const Mlp& net, std::span<const double> features);

// Min-max rescaling of feature vectors to [0, 1], fitted on training data
// and persisted with the net.
struct FeatureScaler {
    std::vector<double> lo, hi;

    static FeatureScaler fit(std::span<const std::vector<double>> rows);
    std::vector<double> apply(std::span<const double> x) const;
};

} // namespace teamseg
