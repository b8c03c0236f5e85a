#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "neurnkit/image.hpp"

namespace neurnkit {

/// PGM decode: P2 (ASCII) and P5 (binary), maxval <= 255, '#' comments.
/// Intensities map to [0,1] by v/255 regardless of the declared maxval.
Image read_pgm(std::string_view bytes);

/// Canonical single-channel P5 with maxval 255; intensities are quantized
/// by round(v*255) and clamped to [0,255]. read_pgm(write_pgm(img)) is
/// lossless for 8-bit data.
std::string write_pgm(const Image& img);

/// IDX image tensor (magic 0x00000803, dims count x rows x cols,
/// big-endian). One single-channel Image per record; payload size must
/// match the header exactly — trailing bytes are an error.
std::vector<Image> read_idx_images(std::string_view bytes);

/// IDX label vector (magic 0x00000801).
std::vector<int> read_idx_labels(std::string_view bytes);

/// Inverse of read_idx_images; requires uniform single-channel dimensions.
std::string write_idx_images(const std::vector<Image>& images);

/// Images with their class ids; sizes must match, labels in [0,9].
struct LabeledDataset {
    std::vector<Image> images;
    std::vector<int> labels;
};

LabeledDataset make_dataset(std::vector<Image> images, std::vector<int> labels);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace neurnkit
