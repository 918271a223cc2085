#include "teamseg/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "teamseg/errors.hpp"

namespace teamseg {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_sizes(const Mlp& net) {
    if (net.inputs < 1 || net.hidden < 1 || net.outputs < 1)
        throw ConfigError("mlp: layer sizes must be >= 1");
}

std::vector<double> one_hot(int label, int classes) {
    if (label < 1 || label > classes)
        throw ConfigError("mlp: label " + std::to_string(label) +
                          " outside 1.." + std::to_string(classes));
    std::vector<double> t(classes, 0.0);
    t[label - 1] = 1.0;
    return t;
}

} // namespace

Mlp::Mlp(int in, int h, int out)
    : inputs(in), hidden(h), outputs(out),
      w1(size_t(h) * in, 0.0), b1(size_t(h), 0.0),
      w2(size_t(out) * h, 0.0), b2(size_t(out), 0.0) {
    check_sizes(*this);
}

Mlp Mlp::random(int in, int h, int out, Rng& rng) {
    Mlp net(in, h, out);
    for (double& w : net.w1) w = rng.uniform(-0.5, 0.5);
    for (double& w : net.b1) w = rng.uniform(-0.5, 0.5);
    for (double& w : net.w2) w = rng.uniform(-0.5, 0.5);
    for (double& w : net.b2) w = rng.uniform(-0.5, 0.5);
    return net;
}

std::vector<double> forward(const Mlp& net, std::span<const double> x) {
    if (int(x.size()) != net.inputs)
        throw ConfigError("mlp forward: expected " + std::to_string(net.inputs) +
                          " inputs, got " + std::to_string(x.size()));
    std::vector<double> h(net.hidden);
    for (int j = 0; j < net.hidden; ++j) {
        double a = net.b1[j];
        for (int i = 0; i < net.inputs; ++i)
            a += net.w1[size_t(j) * net.inputs + i] * x[i];
        h[j] = sigmoid(a);
    }
    std::vector<double> o(net.outputs);
    for (int k = 0; k < net.outputs; ++k) {
        double a = net.b2[k];
        for (int j = 0; j < net.hidden; ++j)
            a += net.w2[size_t(k) * net.hidden + j] * h[j];
        o[k] = sigmoid(a);
    }
    return o;
}

double quadratic_error(std::span<const double> outputs,
                       std::span<const double> target) {
    if (outputs.size() != target.size())
        throw ConfigError("quadratic_error: size mismatch");
    double e = 0.0;
    for (size_t k = 0; k < outputs.size(); ++k) {
        double d = target[k] - outputs[k];
        e += d * d;
    }
    return e;
}

void backprop_step(Mlp& net, std::span<const double> x,
                   std::span<const double> target, double alpha) {
    if (int(target.size()) != net.outputs)
        throw ConfigError("backprop_step: target size mismatch");

    // forward, keeping activations
    std::vector<double> h(net.hidden), o(net.outputs);
    for (int j = 0; j < net.hidden; ++j) {
        double a = net.b1[j];
        for (int i = 0; i < net.inputs; ++i)
            a += net.w1[size_t(j) * net.inputs + i] * x[i];
        h[j] = sigmoid(a);
    }
    for (int k = 0; k < net.outputs; ++k) {
        double a = net.b2[k];
        for (int j = 0; j < net.hidden; ++j)
            a += net.w2[size_t(k) * net.hidden + j] * h[j];
        o[k] = sigmoid(a);
    }

    // dE/dnet for E = sum (d_k - o_k)^2; the factor 2 stays so updates are
    // exactly -alpha * dE/dw
    std::vector<double> delta_o(net.outputs);
    for (int k = 0; k < net.outputs; ++k)
        delta_o[k] = 2.0 * (o[k] - target[k]) * o[k] * (1.0 - o[k]);

    std::vector<double> delta_h(net.hidden);
    for (int j = 0; j < net.hidden; ++j) {
        double back = 0.0;
        for (int k = 0; k < net.outputs; ++k)
            back += delta_o[k] * net.w2[size_t(k) * net.hidden + j];
        delta_h[j] = back * h[j] * (1.0 - h[j]);
    }

    for (int k = 0; k < net.outputs; ++k) {
        for (int j = 0; j < net.hidden; ++j)
            net.w2[size_t(k) * net.hidden + j] -= alpha * delta_o[k] * h[j];
        net.b2[k] -= alpha * delta_o[k];
    }
    for (int j = 0; j < net.hidden; ++j) {
        for (int i = 0; i < net.inputs; ++i)
            net.w1[size_t(j) * net.inputs + i] -= alpha * delta_h[j] * x[i];
        net.b1[j] -= alpha * delta_h[j];
    }
}

std::vector<TrainRecord> train(Mlp& net, const Dataset& data, double alpha,
                               int epochs, uint64_t seed, double eps_stop) {
    if (data.x.size() != data.labels.size())
        throw ConfigError("train: feature/label count mismatch");
    if (data.x.empty()) throw ConfigError("train: empty dataset");
    if (epochs < 0) throw ConfigError("train: negative epoch count");

    std::vector<std::vector<double>> targets;
    targets.reserve(data.labels.size());
    for (int label : data.labels)
        targets.push_back(one_hot(label, net.outputs));

    Rng rng = Rng(seed).split("shuffle");
    std::vector<size_t> order(data.x.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<TrainRecord> records;
    records.reserve(size_t(epochs));
    for (int epoch = 1; epoch <= epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_error = 0.0;
        for (size_t idx : order) {
            auto out = forward(net, data.x[idx]);
            epoch_error += quadratic_error(out, targets[idx]);
            backprop_step(net, data.x[idx], targets[idx], alpha);
        }
        records.push_back({epoch, epoch_error});
        if (epoch_error < eps_stop) break;
    }
    return records;
}

double dataset_error(const Mlp& net, const Dataset& data) {
    double e = 0.0;
    for (size_t i = 0; i < data.x.size(); ++i)
        e += quadratic_error(forward(net, data.x[i]),
                             one_hot(data.labels[i], net.outputs));
    return e;
}

SweepResult sweep_hidden(const Dataset& data, std::span<const int> sizes,
                         double alpha, int epochs, uint64_t seed, double slack,
                         int inputs, int outputs) {
    if (sizes.empty()) throw ConfigError("sweep_hidden: no sizes to try");
    SweepResult result;
    result.table.reserve(sizes.size());
    for (int h : sizes) {
        Rng init = Rng(seed).split("init");
        Mlp net = Mlp::random(inputs, h, outputs, init);
        auto records = train(net, data, alpha, epochs, seed);
        double final_error =
            records.empty() ? dataset_error(net, data) : records.back().error;
        result.table.push_back({h, final_error});
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : result.table) best = std::min(best, row.final_error);
    result.chosen = result.table.front().hidden;
    int best_h = std::numeric_limits<int>::max();
    for (const auto& row : result.table)
        if (row.final_error <= (1.0 + slack) * best && row.hidden < best_h) {
            best_h = row.hidden;
            result.chosen = row.hidden;
        }
    return result;
}

NnDecision classify_nn(const Mlp& net, std::span<const double> features) {
    auto out = forward(net, features);
    int arg = 0;
    for (int k = 1; k < net.outputs; ++k)
        if (out[k] > out[arg]) arg = k;
    for (int k = 0; k < net.outputs; ++k)
        if (k != arg && out[k] == out[arg]) throw TieError(out[arg], out[k]);
    return {arg + 1, std::move(out)};
}

FeatureScaler FeatureScaler::fit(std::span<const std::vector<double>> rows) {
    if (rows.empty()) throw ConfigError("FeatureScaler: no rows");
    size_t dim = rows.front().size();
    FeatureScaler sc;
    sc.lo.assign(dim, std::numeric_limits<double>::infinity());
    sc.hi.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& row : rows) {
        if (row.size() != dim)
            throw ConfigError("FeatureScaler: ragged feature rows");
        for (size_t i = 0; i < dim; ++i) {
            sc.lo[i] = std::min(sc.lo[i], row[i]);
            sc.hi[i] = std::max(sc.hi[i], row[i]);
        }
    }
    return sc;
}

std::vector<double> FeatureScaler::apply(std::span<const double> x) const {
    if (x.size() != lo.size())
        throw ConfigError("FeatureScaler: dimension mismatch");
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        out[i] = hi[i] > lo[i] ? (x[i] - lo[i]) / (hi[i] - lo[i]) : 0.0;
    return out;
}

} // namespace teamseg
