#include "neurnkit/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "neurnkit/error.hpp"

namespace neurnkit {

namespace {

unsigned char byte_at(std::string_view bytes, std::size_t i) {
    return static_cast<unsigned char>(bytes[i]);
}

// Tokenizer over a PGM header: skips whitespace and '#' comments.
class PnmScanner {
public:
    explicit PnmScanner(std::string_view bytes) : bytes_(bytes) {}

    std::size_t next_uint(const char* what) {
        skip();
        if (pos_ >= bytes_.size() || !std::isdigit(byte_at(bytes_, pos_))) {
            throw Error(std::string("pgm: expected ") + what);
        }
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(byte_at(bytes_, pos_))) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > 1u << 28) throw Error(std::string("pgm: ") + what + " too large");
            ++pos_;
        }
        return value;
    }

    /// Consumes exactly one whitespace byte (the separator before a P5
    /// payload) and returns the payload offset.
    std::size_t begin_binary_payload() {
        if (pos_ >= bytes_.size() || !std::isspace(byte_at(bytes_, pos_))) {
            throw Error("pgm: missing whitespace after maxval");
        }
        return pos_ + 1;
    }

    bool only_whitespace_left() {
        skip();
        return pos_ >= bytes_.size();
    }

private:
    void skip() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(byte_at(bytes_, pos_))) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t read_be32(std::string_view bytes, std::size_t offset) {
    return (static_cast<std::uint32_t>(byte_at(bytes, offset)) << 24) |
           (static_cast<std::uint32_t>(byte_at(bytes, offset + 1)) << 16) |
           (static_cast<std::uint32_t>(byte_at(bytes, offset + 2)) << 8) |
           static_cast<std::uint32_t>(byte_at(bytes, offset + 3));
}

void append_be32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

char hex_digit(std::uint32_t v) {
    return "0123456789abcdef"[v & 0xf];
}

std::string hex32(std::uint32_t v) {
    std::string s = "0x";
    for (int shift = 28; shift >= 0; shift -= 4) s += hex_digit(v >> shift);
    return s;
}

std::uint32_t check_idx_header(std::string_view bytes, std::uint32_t expected_magic,
                               const char* what) {
    if (bytes.size() < 4) throw Error(std::string("idx: truncated ") + what + " header");
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != expected_magic) {
        throw Error(std::string("idx: expected magic ") + hex32(expected_magic) + " (" +
                    what + "), got " + hex32(magic));
    }
    return magic;
}

unsigned char quantize(double v) {
    const long q = std::lround(v * 255.0);
    return static_cast<unsigned char>(std::clamp(q, 0L, 255L));
}

} // namespace

Image read_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw Error("pgm: bad magic, expected P2 or P5");
    }
    const bool binary = bytes[1] == '5';
    PnmScanner scanner(bytes.substr(2));

    const std::size_t width = scanner.next_uint("width");
    const std::size_t height = scanner.next_uint("height");
    const std::size_t maxval = scanner.next_uint("maxval");
    if (width == 0 || height == 0) throw Error("pgm: zero dimension");
    if (maxval == 0 || maxval > 255) {
        throw Error("pgm: maxval " + std::to_string(maxval) +
                    " not in [1,255] (16-bit data is unsupported)");
    }

    Image img(width, height, 1);
    if (binary) {
        const std::size_t payload = 2 + scanner.begin_binary_payload();
        if (bytes.size() - payload < width * height) {
            throw Error("pgm: truncated payload, need " + std::to_string(width * height) +
                        " bytes, have " + std::to_string(bytes.size() - payload));
        }
        if (bytes.size() - payload > width * height) {
            throw Error("pgm: trailing bytes after payload");
        }
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                const unsigned char v = byte_at(bytes, payload + y * width + x);
                if (v > maxval) {
                    throw Error("pgm: sample " + std::to_string(v) + " exceeds maxval " +
                                std::to_string(maxval));
                }
                img.at(x, y) = static_cast<double>(v) / 255.0;
            }
        }
    } else {
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                const std::size_t v = scanner.next_uint("sample");
                if (v > maxval) {
                    throw Error("pgm: sample " + std::to_string(v) + " exceeds maxval " +
                                std::to_string(maxval));
                }
                img.at(x, y) = static_cast<double>(v) / 255.0;
            }
        }
        if (!scanner.only_whitespace_left()) {
            throw Error("pgm: trailing data after samples");
        }
    }
    return img;
}

std::string write_pgm(const Image& img) {
    if (img.channels() != 1) {
        throw Error("pgm: only single-channel images can be written");
    }
    std::string out = "P5\n" + std::to_string(img.width()) + " " +
                      std::to_string(img.height()) + "\n255\n";
    out.reserve(out.size() + img.width() * img.height());
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            out.push_back(static_cast<char>(quantize(img.at(x, y))));
        }
    }
    return out;
}

std::vector<Image> read_idx_images(std::string_view bytes) {
    check_idx_header(bytes, 0x00000803u, "images");
    if (bytes.size() < 16) throw Error("idx: truncated image header");
    const std::size_t count = read_be32(bytes, 4);
    const std::size_t rows = read_be32(bytes, 8);
    const std::size_t cols = read_be32(bytes, 12);
    if (rows == 0 || cols == 0) throw Error("idx: zero image dimension");

    const std::size_t expected = 16 + count * rows * cols;
    if (bytes.size() < expected) {
        throw Error("idx: payload smaller than header implies (" +
                    std::to_string(bytes.size()) + " < " + std::to_string(expected) + ")");
    }
    if (bytes.size() > expected) {
        throw Error("idx: trailing bytes after payload");
    }

    std::vector<Image> images;
    images.reserve(count);
    std::size_t offset = 16;
    for (std::size_t i = 0; i < count; ++i) {
        Image img(cols, rows, 1);
        for (std::size_t y = 0; y < rows; ++y) {
            for (std::size_t x = 0; x < cols; ++x) {
                img.at(x, y) = static_cast<double>(byte_at(bytes, offset++)) / 255.0;
            }
        }
        images.push_back(std::move(img));
    }
    return images;
}

std::vector<int> read_idx_labels(std::string_view bytes) {
    check_idx_header(bytes, 0x00000801u, "labels");
    if (bytes.size() < 8) throw Error("idx: truncated label header");
    const std::size_t count = read_be32(bytes, 4);
    const std::size_t expected = 8 + count;
    if (bytes.size() < expected) {
        throw Error("idx: payload smaller than header implies (" +
                    std::to_string(bytes.size()) + " < " + std::to_string(expected) + ")");
    }
    if (bytes.size() > expected) {
        throw Error("idx: trailing bytes after payload");
    }
    std::vector<int> labels(count);
    for (std::size_t i = 0; i < count; ++i) {
        labels[i] = static_cast<int>(byte_at(bytes, 8 + i));
    }
    return labels;
}

std::string write_idx_images(const std::vector<Image>& images) {
    if (images.empty()) throw Error("idx: nothing to write");
    const Image& first = images.front();
    if (first.channels() != 1) throw Error("idx: only single-channel images");
    for (std::size_t i = 1; i < images.size(); ++i) {
        if (!images[i].same_shape(first)) {
            throw Error("idx: image " + std::to_string(i) + " has different dimensions");
        }
    }
    std::string out;
    out.reserve(16 + images.size() * first.width() * first.height());
    append_be32(out, 0x00000803u);
    append_be32(out, static_cast<std::uint32_t>(images.size()));
    append_be32(out, static_cast<std::uint32_t>(first.height()));
    append_be32(out, static_cast<std::uint32_t>(first.width()));
    for (const Image& img : images) {
        for (std::size_t y = 0; y < img.height(); ++y) {
            for (std::size_t x = 0; x < img.width(); ++x) {
                out.push_back(static_cast<char>(quantize(img.at(x, y))));
            }
        }
    }
    return out;
}

LabeledDataset make_dataset(std::vector<Image> images, std::vector<int> labels) {
    if (images.size() != labels.size()) {
        throw Error("dataset: " + std::to_string(images.size()) + " images vs " +
                    std::to_string(labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] > 9) {
            throw Error("dataset: label " + std::to_string(labels[i]) + " at index " +
                        std::to_string(i) + " is outside [0,9]");
        }
    }
    return LabeledDataset{std::move(images), std::move(labels)};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace neurnkit
