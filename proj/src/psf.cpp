#include "atrm/psf.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "atrm/rng.hpp"

namespace atrm {

double Psf::sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void Psf::normalize() {
    const double s = sum();
    if (!std::isfinite(s) || s <= 0.0) {
        throw ValueError("psf normalize: kernel mass must be positive and finite");
    }
    for (double& w : weights) w /= s;
}

void Psf::validate() const {
    if (size < 1 || size % 2 == 0) throw ValueError("psf: size must be odd and >= 1");
    if (weights.size() != static_cast<std::size_t>(size) * size) {
        throw ValueError("psf: weight count does not match size");
    }
    for (double w : weights) {
        if (!(w >= 0.0)) throw ValueError("psf: entries must be non-negative and finite");
    }
    if (std::abs(sum() - 1.0) > 1e-9) throw ValueError("psf: entries must sum to 1");
}

Psf delta_psf(int size) {
    if (size < 1 || size % 2 == 0) throw ValueError("delta_psf: size must be odd and >= 1");
    Psf p{size, std::vector<double>(static_cast<std::size_t>(size) * size, 0.0)};
    p.at(size / 2, size / 2) = 1.0;
    return p;
}

std::vector<Psf> generate_psf_bank(int count, int size, std::uint64_t seed) {
    if (count < 1) throw ValueError("generate_psf_bank: count must be positive");
    if (size < 3 || size % 2 == 0) throw ValueError("generate_psf_bank: size must be odd and >= 3");

    std::vector<Psf> bank;
    bank.reserve(count);
    const double c = (size - 1) / 2.0;
    for (int k = 0; k < count; ++k) {
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        std::uniform_int_distribution<int> lobe_count(2, 4);
        std::uniform_real_distribution<double> center_off(-size / 4.0, size / 4.0);
        std::uniform_real_distribution<double> sigma_dist(size / 12.0, size / 5.0);
        std::uniform_real_distribution<double> angle_dist(0.0, M_PI);
        std::uniform_real_distribution<double> weight_dist(0.3, 1.0);

        Psf p{size, std::vector<double>(static_cast<std::size_t>(size) * size, 0.0)};
        const int lobes = lobe_count(rng);
        for (int l = 0; l < lobes; ++l) {
            const double cy = c + center_off(rng);
            const double cx = c + center_off(rng);
            const double s1 = sigma_dist(rng);
            const double s2 = sigma_dist(rng);
            const double theta = angle_dist(rng);
            const double w = weight_dist(rng);
            const double ct = std::cos(theta), st = std::sin(theta);
            for (int y = 0; y < size; ++y) {
                for (int x = 0; x < size; ++x) {
                    // rotate into the lobe frame, evaluate axis-aligned Gaussian
                    const double dy = y - cy, dx = x - cx;
                    const double u = ct * dx + st * dy;
                    const double v = -st * dx + ct * dy;
                    p.at(y, x) += w * std::exp(-0.5 * (u * u / (s1 * s1) + v * v / (s2 * s2)));
                }
            }
        }
        p.normalize();
        bank.push_back(std::move(p));
    }
    return bank;
}

Psf resize_psf(const Psf& psf, double scale) {
    psf.validate();
    if (!(scale > 0.0) || scale > 4.0) {
        throw ValueError("resize_psf: scale must lie in (0, 4]");
    }
    long target = std::lround(psf.size * scale);
    if (target % 2 == 0) target += 1;
    if (target < 1) throw ValueError("resize_psf: resulting kernel would be empty");

    const int m = static_cast<int>(target);
    Psf out{m, std::vector<double>(static_cast<std::size_t>(m) * m, 0.0)};
    const double src_c = (psf.size - 1) / 2.0;
    const double dst_c = (m - 1) / 2.0;
    // center-aligned bilinear sampling; outside the source counts as 0
    for (int y = 0; y < m; ++y) {
        for (int x = 0; x < m; ++x) {
            const double sy = (y - dst_c) / scale + src_c;
            const double sx = (x - dst_c) / scale + src_c;
            const int y0 = static_cast<int>(std::floor(sy));
            const int x0 = static_cast<int>(std::floor(sx));
            const double fy = sy - y0;
            const double fx = sx - x0;
            double acc = 0.0;
            for (int dy = 0; dy <= 1; ++dy) {
                for (int dx = 0; dx <= 1; ++dx) {
                    const int yy = y0 + dy, xx = x0 + dx;
                    if (yy < 0 || yy >= psf.size || xx < 0 || xx >= psf.size) continue;
                    const double wy = dy ? fy : 1.0 - fy;
                    const double wx = dx ? fx : 1.0 - fx;
                    acc += wy * wx * psf.at(yy, xx);
                }
            }
            out.at(y, x) = acc;
        }
    }
    out.normalize();
    return out;
}

Psf load_psf(const std::filesystem::path& path) {
    std::ifstream in(path);
    const std::string name = path.string();
    if (!in) throw IoError(IoError::Kind::open_failed, "cannot open " + name);
    std::string tag;
    int size = 0;
    if (!(in >> tag >> size) || tag != "PSF") {
        throw IoError(IoError::Kind::bad_header, "expected 'PSF <size>' header in " + name);
    }
    if (size < 1 || size % 2 == 0) {
        throw IoError(IoError::Kind::bad_header, "psf size must be odd and >= 1 in " + name);
    }
    Psf p{size, std::vector<double>(static_cast<std::size_t>(size) * size)};
    for (double& w : p.weights) {
        if (!(in >> w)) throw IoError(IoError::Kind::truncated, "truncated psf data in " + name);
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw IoError(IoError::Kind::bad_header, "negative or non-finite psf entry in " + name);
        }
    }
    try {
        p.normalize();
    } catch (const ValueError& e) {
        throw IoError(IoError::Kind::bad_header, std::string(e.what()) + " in " + name);
    }
    return p;
}

void save_psf(const Psf& psf, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::open_failed, "cannot open " + path.string() + " for write");
    out << "PSF " << psf.size << "\n";
    out.precision(17);
    for (int y = 0; y < psf.size; ++y) {
        for (int x = 0; x < psf.size; ++x) {
            out << psf.at(y, x) << (x + 1 == psf.size ? '\n' : ' ');
        }
    }
    if (!out) throw IoError(IoError::Kind::write_failed, "write failed: " + path.string());
}

}  // namespace atrm
