#include "neurnkit/neurn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurnkit/error.hpp"

namespace neurnkit {

void NeurnConfig::validate_for(std::size_t width, std::size_t height) const {
    if (k < 3 || k % 2 == 0) {
        throw Error("neurn: k must be odd and >= 3, got " + std::to_string(k));
    }
    const std::size_t limit = 2 * std::min(width, height) - 1;
    if (static_cast<std::size_t>(k) > limit) {
        throw Error("neurn: k = " + std::to_string(k) + " exceeds 2*min(W,H)-1 = " +
                    std::to_string(limit) + " for a " + std::to_string(width) + "x" +
                    std::to_string(height) + " image");
    }
}

namespace {

// Padded copy of one channel plane; half = k/2 extra pixels on each side.
std::vector<double> pad_plane(const Image& img, std::size_t c, std::size_t half,
                              Padding padding) {
    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(img.width());
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(img.height());
    const std::ptrdiff_t half_s = static_cast<std::ptrdiff_t>(half);
    const std::ptrdiff_t pw = w + 2 * half_s;
    const std::ptrdiff_t ph = h + 2 * half_s;

    auto map = [&](std::ptrdiff_t t, std::ptrdiff_t dim) {
        if (padding == Padding::replicate) {
            return std::clamp<std::ptrdiff_t>(t, 0, dim - 1);
        }
        if (t < 0) return -t;
        if (t >= dim) return 2 * (dim - 1) - t;
        return t;
    };

    std::vector<double> padded(static_cast<std::size_t>(pw * ph));
    for (std::ptrdiff_t y = 0; y < ph; ++y) {
        const std::ptrdiff_t sy = map(y - half_s, h);
        for (std::ptrdiff_t x = 0; x < pw; ++x) {
            const std::ptrdiff_t sx = map(x - half_s, w);
            padded[static_cast<std::size_t>(y * pw + x)] =
                img.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy), c);
        }
    }
    return padded;
}

} // namespace

StatField patch_stats(const Image& img, const NeurnConfig& cfg) {
    cfg.validate_for(img.width(), img.height());
    for (double v : img.pixels()) {
        if (!std::isfinite(v)) throw Error("neurn: image contains non-finite values");
    }

    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const std::size_t half = static_cast<std::size_t>(cfg.k) / 2;
    const std::size_t pw = w + 2 * half;
    const double inv_count = 1.0 / (static_cast<double>(cfg.k) * static_cast<double>(cfg.k));

    StatField field{Image(w, h, img.channels()), Image(w, h, img.channels())};
    for (std::size_t c = 0; c < img.channels(); ++c) {
        const std::vector<double> padded = pad_plane(img, c, half, cfg.padding);
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                // Window rows start at (y, x) in the padded plane.
                const double* row = padded.data() + y * pw + x;
                double sum = 0.0;
                const double first = row[0];
                bool constant = true;
                for (int wy = 0; wy < cfg.k; ++wy) {
                    const double* p = row + static_cast<std::size_t>(wy) * pw;
                    for (int wx = 0; wx < cfg.k; ++wx) {
                        sum += p[wx];
                        constant = constant && p[wx] == first;
                    }
                }
                // A constant window has exactly zero deviation; computing it
                // through the sums would leave ~1 ulp of noise.
                if (constant) {
                    field.mean.at(x, y, c) = first;
                    field.stddev.at(x, y, c) = 0.0;
                    continue;
                }
                const double mean = sum * inv_count;
                double ssd = 0.0;
                for (int wy = 0; wy < cfg.k; ++wy) {
                    const double* p = row + static_cast<std::size_t>(wy) * pw;
                    for (int wx = 0; wx < cfg.k; ++wx) {
                        const double d = p[wx] - mean;
                        ssd += d * d;
                    }
                }
                field.mean.at(x, y, c) = mean;
                field.stddev.at(x, y, c) = std::sqrt(ssd * inv_count);
            }
        }
    }
    return field;
}

Image transform(const Image& img, const NeurnConfig& cfg) {
    StatField field = patch_stats(img, cfg);
    Image out = std::move(field.stddev);

    if (cfg.global_max) {
        double max_dev = 0.0;
        for (double v : out.pixels()) max_dev = std::max(max_dev, v);
        for (double& v : out.pixels()) v = max_dev == 0.0 ? 0.0 : v / max_dev;
        return out;
    }

    for (std::size_t c = 0; c < out.channels(); ++c) {
        auto plane = out.channel(c);
        double max_dev = 0.0;
        for (double v : plane) max_dev = std::max(max_dev, v);
        if (max_dev == 0.0) {
            std::fill(plane.begin(), plane.end(), 0.0);
        } else {
            for (double& v : plane) v /= max_dev;
        }
    }
    return out;
}

std::vector<Image> transform_batch(const std::vector<Image>& images,
                                   const NeurnConfig& cfg) {
    std::vector<Image> out;
    out.reserve(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        try {
            out.push_back(transform(images[i], cfg));
        } catch (const Error& e) {
            throw Error("batch image " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

} // namespace neurnkit
