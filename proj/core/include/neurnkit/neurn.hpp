#pragma once

#include <cstddef>
#include <vector>

#include "neurnkit/image.hpp"

namespace neurnkit {

enum class Padding {
    replicate, // clamp coordinates to the nearest edge pixel
    reflect,   // mirror around the edge pixel (the edge is not repeated)
};

/// Patch-statistics settings. One k x k window per pixel (stride 1), so the
/// stat fields have the input's dimensions.
struct NeurnConfig {
    int k = 3;
    Padding padding = Padding::replicate;
    /// Normalize by the maximum patch deviation across all channels instead
    /// of per channel.
    bool global_max = false;

    /// k odd and >= 3; k <= 2*min(W,H)-1 so padded windows stay defined.
    void validate_for(std::size_t width, std::size_t height) const;
};

/// Per-pixel window mean and population standard deviation (divisor k^2).
struct StatField {
    Image mean;
    Image stddev;
};

StatField patch_stats(const Image& img, const NeurnConfig& cfg);

/// The normalized patch-deviation representation: per channel, the stddev
/// field divided by its maximum; a channel with zero maximum deviation maps
/// to all zeros. Output values lie in [0,1], shape equals the input, and
/// the result is invariant to affine intensity changes a*I + b (a > 0).
Image transform(const Image& img, const NeurnConfig& cfg);

/// transform over a collection; a per-image failure is reported with the
/// image's index. Images may have heterogeneous dimensions.
std::vector<Image> transform_batch(const std::vector<Image>& images,
                                   const NeurnConfig& cfg);

} // namespace neurnkit
