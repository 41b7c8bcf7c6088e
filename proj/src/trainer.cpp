#include "atrm/trainer.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "atrm/loss.hpp"

namespace atrm {

void TrainingConfig::validate() const {
    if (batch_size < 1) throw ValueError("training config: batch size must be positive");
    if (patch_size < 1) throw ValueError("training config: patch size must be positive");
    if (epochs < 1) throw ValueError("training config: epochs must be positive");
    if (!(lr_start > 0.0) || !(lr_end > 0.0)) throw ValueError("training config: learning rates must be positive");
    if (lr_end > lr_start) throw ValueError("training config: lr_end must not exceed lr_start");
    if (steps_per_epoch < 0) throw ValueError("training config: steps_per_epoch must be >= 0");
}

TrainingConfig TrainingConfig::paper() {
    return {};
}

TrainingConfig TrainingConfig::desk() {
    TrainingConfig cfg;
    cfg.batch_size = 16;
    cfg.patch_size = 48;
    cfg.epochs = 60;
    return cfg;
}

NetworkConfig paper_network(int in_channels) {
    return {17, 5, 64, in_channels, in_channels};
}

NetworkConfig desk_network(int in_channels) {
    return {7, 5, 16, in_channels, in_channels};
}

double lr_schedule(int epoch, const TrainingConfig& config) {
    if (epoch < 0 || epoch >= config.epochs) {
        throw ValueError("lr_schedule: epoch " + std::to_string(epoch) + " outside [0, " +
                         std::to_string(config.epochs) + ")");
    }
    if (config.epochs == 1) return config.lr_start;
    const double t = static_cast<double>(epoch) / (config.epochs - 1);
    return config.lr_start * std::pow(config.lr_end / config.lr_start, t);
}

TrainReport train(Model<float>& model, const std::vector<TrainingExample>& data,
                  const TrainingConfig& config, AdamState<float>& adam,
                  const std::function<bool(const LossRow&)>& on_step) {
    config.validate();
    if (data.empty()) throw ValueError("train: empty dataset");
    if (config.patch_size < receptive_field(model.config())) {
        std::cerr << "[atrm] warning: patch size " << config.patch_size
                  << " is smaller than the receptive field " << receptive_field(model.config())
                  << "\n";
    }

    PatchSampler sampler(data, config.patch_size, config.seed, config.resize_augment);
    const std::size_t steps_per_epoch =
        config.steps_per_epoch > 0
            ? static_cast<std::size_t>(config.steps_per_epoch)
            : (sampler.patch_capacity() + config.batch_size - 1) / config.batch_size;

    TrainReport report;
    report.steps_per_epoch = steps_per_epoch;
    report.trace.reserve(steps_per_epoch * config.epochs);

    auto params = model.trainable_parameters();
    Tensor<float> y_batch, x_batch;
    ForwardTrace<float> trace;
    int global_step = static_cast<int>(adam.step);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = lr_schedule(epoch, config);
        for (std::size_t s = 0; s < steps_per_epoch; ++s) {
            sampler.sample(config.batch_size, y_batch, x_batch);
            Tensor<float> pred = model.forward_train(y_batch, trace);
            LossResult<float> loss = residual_loss(pred, y_batch, x_batch);
            if (!std::isfinite(loss.value)) {
                std::ostringstream os;
                os << "non-finite loss at epoch " << epoch << " step " << global_step
                   << " (lr " << lr << ")";
                throw NumericError(os.str());
            }
            std::vector<Tensor<float>> grads = model.backward(trace, loss.grad);
            adam_step(params, grads, adam, static_cast<float>(lr));
            ++global_step;

            const LossRow row{epoch, global_step, lr, static_cast<double>(loss.value)};
            report.trace.push_back(row);
            if (on_step && !on_step(row)) return report;
        }
    }
    return report;
}

void write_loss_csv(const std::vector<LossRow>& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::open_failed, "cannot open " + path.string() + " for write");
    out << "epoch,step,lr,loss\n";
    out.precision(10);
    for (const LossRow& r : trace) {
        out << r.epoch << "," << r.step << "," << r.lr << "," << r.loss << "\n";
    }
    if (!out) throw IoError(IoError::Kind::write_failed, "write failed: " + path.string());
}

}  // namespace atrm
