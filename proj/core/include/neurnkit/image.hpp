#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "neurnkit/error.hpp"

namespace neurnkit {

/// W x H x C grid of double intensities, planar layout (channel planes are
/// contiguous, rows within a plane are contiguous). The canonical range is
/// [0,1] (8-bit inputs map through v/255) but values are only required to
/// be finite, so affinely shifted images pass through untouched.
class Image {
public:
    Image(std::size_t width, std::size_t height, std::size_t channels = 1)
        : width_(width), height_(height), channels_(channels),
          pixels_(width * height * channels, 0.0) {
        check_dims();
    }

    Image(std::size_t width, std::size_t height, std::size_t channels,
          std::vector<double> pixels)
        : width_(width), height_(height), channels_(channels),
          pixels_(std::move(pixels)) {
        check_dims();
        if (pixels_.size() != width_ * height_ * channels_) {
            throw Error("image: pixel count does not match dimensions");
        }
    }

    static Image constant(std::size_t width, std::size_t height,
                          std::size_t channels, double value) {
        Image img(width, height, channels);
        for (double& v : img.pixels_) v = value;
        return img;
    }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t channels() const { return channels_; }
    std::size_t pixel_count() const { return width_ * height_ * channels_; }

    double at(std::size_t x, std::size_t y, std::size_t c = 0) const {
        return pixels_[(c * height_ + y) * width_ + x];
    }
    double& at(std::size_t x, std::size_t y, std::size_t c = 0) {
        return pixels_[(c * height_ + y) * width_ + x];
    }

    std::span<const double> channel(std::size_t c) const {
        return {pixels_.data() + c * width_ * height_, width_ * height_};
    }
    std::span<double> channel(std::size_t c) {
        return {pixels_.data() + c * width_ * height_, width_ * height_};
    }

    const std::vector<double>& pixels() const { return pixels_; }
    std::vector<double>& pixels() { return pixels_; }

    bool same_shape(const Image& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               channels_ == other.channels_;
    }

private:
    void check_dims() const {
        if (width_ == 0 || height_ == 0 || channels_ == 0) {
            throw Error("image: dimensions must be >= 1");
        }
    }

    std::size_t width_, height_, channels_;
    std::vector<double> pixels_;
};

} // namespace neurnkit
