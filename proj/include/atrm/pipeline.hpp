#pragma once

#include "atrm/dataset.hpp"
#include "atrm/model.hpp"
#include "atrm/sampler.hpp"

namespace atrm {

// How distorted frames are turned into network inputs.
//   in_frames 1: one input channel, optionally the average of avg_window
//                frames ending at t.
//   in_frames 3: three channels holding frames t-2, t-1, t, each optionally
//                averaged over avg_window frames ending at its offset.
struct InputMode {
    int in_frames = 1;
    int avg_window = 1;

    void validate() const;
};

// Builds (y, x) pairs from loaded scenes. The last holdout_frames frames of
// each scene are excluded from training. For 3-frame mode the clean image is
// replicated across the three target channels.
std::vector<TrainingExample> build_training_examples(const std::vector<LoadedScene>& scenes,
                                                     const InputMode& mode, int holdout_frames);

struct RestoredFrame {
    int index = 0;  // index t of the window's last frame
    ImageFrame image;
};

struct RestoreResult {
    std::vector<RestoredFrame> frames;
    double pixels = 0.0;   // restored output pixels
    double seconds = 0.0;  // wall time spent inside the network
    double pixels_per_second() const { return seconds > 0.0 ? pixels / seconds : 0.0; }
};

// Slides the input window over the sequence (causally, aligned to the last
// index) and restores each valid position. For 3-channel models the center
// channel of the restoration is emitted.
RestoreResult restore_sequence(const Model<float>& model, const FrameSequence& frames,
                               const InputMode& mode);

}  // namespace atrm
