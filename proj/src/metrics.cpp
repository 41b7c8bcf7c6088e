#include "atrm/metrics.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace atrm {
namespace {

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(size);
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        w[i] = std::exp(-0.5 * (i - c) * (i - c) / (sigma * sigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// separable Gaussian filter, valid region only: output is (H-size+1) x (W-size+1)
std::vector<double> filter_valid(const std::vector<double>& img, int H, int W,
                                 const std::vector<double>& win) {
    const int k = static_cast<int>(win.size());
    const int outw = W - k + 1;
    // horizontal pass
    std::vector<double> tmp(static_cast<std::size_t>(H) * outw);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < outw; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += win[i] * img[static_cast<std::size_t>(y) * W + x + i];
            tmp[static_cast<std::size_t>(y) * outw + x] = acc;
        }
    }
    // vertical pass
    const int outh = H - k + 1;
    std::vector<double> out(static_cast<std::size_t>(outh) * outw);
    for (int y = 0; y < outh; ++y) {
        for (int x = 0; x < outw; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += win[i] * tmp[static_cast<std::size_t>(y + i) * outw + x];
            out[static_cast<std::size_t>(y) * outw + x] = acc;
        }
    }
    return out;
}

double ssim_channel(const ImageFrame& a, const ImageFrame& b, int channel, double peak) {
    const int H = a.height, W = a.width;
    const std::size_t n = static_cast<std::size_t>(H) * W;
    std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double va = a.at(channel, y, x);
            const double vb = b.at(channel, y, x);
            const std::size_t i = static_cast<std::size_t>(y) * W + x;
            pa[i] = va;
            pb[i] = vb;
            paa[i] = va * va;
            pbb[i] = vb * vb;
            pab[i] = va * vb;
        }
    }

    const auto win = gaussian_window(kSsimWindow, kSsimSigma);
    const auto mu_a = filter_valid(pa, H, W, win);
    const auto mu_b = filter_valid(pb, H, W, win);
    const auto m_aa = filter_valid(paa, H, W, win);
    const auto m_bb = filter_valid(pbb, H, W, win);
    const auto m_ab = filter_valid(pab, H, W, win);

    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);

    double total = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double va = m_aa[i] - ma * ma;
        const double vb = m_bb[i] - mb * mb;
        const double cov = m_ab[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                 ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / static_cast<double>(mu_a.size());
}

}  // namespace

double mse(const ImageFrame& a, const ImageFrame& b) {
    if (!a.same_shape(b)) throw ShapeError("mse: image shapes differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.pixels.size());
}

double psnr(const ImageFrame& a, const ImageFrame& b, double peak) {
    const double e = mse(a, b);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / e);
}

double ssim(const ImageFrame& a, const ImageFrame& b) {
    if (!a.same_shape(b)) throw ShapeError("ssim: image shapes differ");
    if (a.width < kSsimWindow || a.height < kSsimWindow) {
        throw ValueError("ssim: image smaller than the " + std::to_string(kSsimWindow) +
                         "x" + std::to_string(kSsimWindow) + " window");
    }
    double total = 0.0;
    for (int c = 0; c < a.channels; ++c) total += ssim_channel(a, b, c, 1.0);
    return total / a.channels;
}

QualityReport assess(const ImageFrame& a, const ImageFrame& b) {
    QualityReport r;
    r.mse = mse(a, b);
    r.psnr_db = r.mse == 0.0 ? std::numeric_limits<double>::infinity()
                             : 10.0 * std::log10(1.0 / r.mse);
    r.ssim = ssim(a, b);
    return r;
}

SceneEvaluation evaluate_scene(const FrameSequence& restored, const ImageFrame& clean) {
    if (restored.empty()) throw ValueError("evaluate_scene: no frames");
    SceneEvaluation eval;
    eval.frames.reserve(restored.size());
    for (const ImageFrame& f : restored) eval.frames.push_back(assess(f, clean));
    for (const QualityReport& r : eval.frames) {
        eval.mean.psnr_db += r.psnr_db;
        eval.mean.ssim += r.ssim;
        eval.mean.mse += r.mse;
    }
    const double n = static_cast<double>(eval.frames.size());
    eval.mean.psnr_db /= n;
    eval.mean.ssim /= n;
    eval.mean.mse /= n;
    return eval;
}

void write_report_csv(const SceneEvaluation& eval, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::open_failed, "cannot open " + path.string() + " for write");
    out << "frame,psnr_db,ssim,mse\n";
    out.precision(10);
    for (std::size_t i = 0; i < eval.frames.size(); ++i) {
        const QualityReport& r = eval.frames[i];
        out << i << "," << r.psnr_db << "," << r.ssim << "," << r.mse << "\n";
    }
    out << "mean," << eval.mean.psnr_db << "," << eval.mean.ssim << "," << eval.mean.mse << "\n";
    if (!out) throw IoError(IoError::Kind::write_failed, "write failed: " + path.string());
}

}  // namespace atrm
