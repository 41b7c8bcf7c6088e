#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "atrm/adam.hpp"
#include "atrm/model.hpp"
#include "atrm/sampler.hpp"

namespace atrm {

struct TrainingConfig {
    int batch_size = 128;
    int patch_size = 80;
    double lr_start = 1e-3;
    double lr_end = 1e-5;
    int epochs = 1000;
    std::uint64_t seed = 0;
    std::optional<std::pair<double, double>> resize_augment;  // moving-object mode: [0.7, 1.0]
    int steps_per_epoch = 0;  // 0: derive from the data (patch capacity / batch size)

    void validate() const;

    // Full-size recipe: batch 128, patch 80, 1000 epochs.
    static TrainingConfig paper();
    // Small recipe that trains in minutes on a laptop CPU: batch 16,
    // patch 48, 60 epochs (paired with a d=7, width=16 network).
    static TrainingConfig desk();
};

// Network dimensions matching the presets above.
NetworkConfig paper_network(int in_channels = 1);
NetworkConfig desk_network(int in_channels = 1);

// Log-linear interpolation from lr_start to lr_end across the epochs.
double lr_schedule(int epoch, const TrainingConfig& config);

struct LossRow {
    int epoch = 0;
    int step = 0;  // global step
    double lr = 0.0;
    double loss = 0.0;
};

struct TrainReport {
    std::vector<LossRow> trace;
    std::size_t steps_per_epoch = 0;
};

// Runs the sample -> forward(train) -> loss -> backward -> adam loop.
// Deterministic for a fixed (config, data, model, adam) input. Throws
// NumericError (with epoch/step/lr) if the loss leaves the finite range.
// `on_step`, when set, observes each LossRow and may return false to stop
// early.
TrainReport train(Model<float>& model, const std::vector<TrainingExample>& data,
                  const TrainingConfig& config, AdamState<float>& adam,
                  const std::function<bool(const LossRow&)>& on_step = {});

// CSV schema: epoch,step,lr,loss
void write_loss_csv(const std::vector<LossRow>& trace, const std::filesystem::path& path);

}  // namespace atrm
