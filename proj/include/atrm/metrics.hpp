#pragma once

#include <filesystem>
#include <vector>

#include "atrm/image.hpp"

namespace atrm {

struct QualityReport {
    double psnr_db = 0.0;
    double ssim = 0.0;
    double mse = 0.0;
};

double mse(const ImageFrame& a, const ImageFrame& b);

// 10*log10(peak^2/MSE); +infinity when the images are identical.
double psnr(const ImageFrame& a, const ImageFrame& b, double peak = 1.0);

// Mean local SSIM, 11x11 Gaussian window (sigma 1.5), C1=(0.01*peak)^2,
// C2=(0.03*peak)^2, valid windows only. Multi-channel frames score as the
// mean over channels.
double ssim(const ImageFrame& a, const ImageFrame& b);

QualityReport assess(const ImageFrame& a, const ImageFrame& b);

struct SceneEvaluation {
    std::vector<QualityReport> frames;
    QualityReport mean;
};

// Per-frame reports against the clean reference plus arithmetic means.
SceneEvaluation evaluate_scene(const FrameSequence& restored, const ImageFrame& clean);

// CSV schema: frame,psnr_db,ssim,mse with a trailing mean row.
void write_report_csv(const SceneEvaluation& eval, const std::filesystem::path& path);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

}  // namespace atrm
