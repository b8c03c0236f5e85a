#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <string>

#include "neurnkit/error.hpp"
#include "neurnkit/imageio.hpp"
#include "neurnkit/rng.hpp"
#include "test_util.hpp"

using namespace neurnkit;

namespace {

std::string idx_image_header(std::uint32_t count, std::uint32_t rows, std::uint32_t cols) {
    std::string h;
    for (std::uint32_t v : {0x00000803u, count, rows, cols}) {
        h.push_back(static_cast<char>((v >> 24) & 0xff));
        h.push_back(static_cast<char>((v >> 16) & 0xff));
        h.push_back(static_cast<char>((v >> 8) & 0xff));
        h.push_back(static_cast<char>(v & 0xff));
    }
    return h;
}

std::string idx_label_header(std::uint32_t count) {
    std::string h;
    for (std::uint32_t v : {0x00000801u, count}) {
        h.push_back(static_cast<char>((v >> 24) & 0xff));
        h.push_back(static_cast<char>((v >> 16) & 0xff));
        h.push_back(static_cast<char>((v >> 8) & 0xff));
        h.push_back(static_cast<char>(v & 0xff));
    }
    return h;
}

} // namespace

TEST_SUITE("imageio") {

TEST_CASE("canonical P5 round trip is byte exact") {
    Rng rng(3);
    Image img(9, 4, 1);
    for (double& v : img.pixels()) {
        v = static_cast<double>(rng.below(256)) / 255.0;
    }
    const std::string bytes = write_pgm(img);
    const Image back = read_pgm(bytes);
    CHECK(back.same_shape(img));
    CHECK(write_pgm(back) == bytes);
}

TEST_CASE("P2 and P5 encodings of the same pixels parse equal") {
    const std::string p2 = "P2\n# toy image\n3 2\n255\n0 128 255\n64 32 16\n";
    const std::string p5 = std::string("P5\n3 2\n255\n") +
                           std::string("\x00\x80\xff\x40\x20\x10", 6);
    const Image a = read_pgm(p2);
    const Image b = read_pgm(p5);
    REQUIRE(a.same_shape(b));
    for (std::size_t i = 0; i < a.pixels().size(); ++i) {
        CHECK(a.pixels()[i] == b.pixels()[i]);
    }
    CHECK(a.at(1, 0) == 128.0 / 255.0);
}

TEST_CASE("all-zero 28x28 P5 decodes to 784 zeros") {
    const std::string bytes = "P5\n28 28\n255\n" + std::string(784, '\0');
    const Image img = read_pgm(bytes);
    CHECK(img.width() == 28);
    CHECK(img.height() == 28);
    REQUIRE(img.pixels().size() == 784);
    for (double v : img.pixels()) CHECK(v == 0.0);
}

TEST_CASE("pgm error paths") {
    CHECK_THROWS_WITH_AS(read_pgm("P6\n1 1\n255\nx"), doctest::Contains("magic"), Error);
    CHECK_THROWS_WITH_AS(read_pgm("P5\n2 2\n255\nab"), doctest::Contains("truncated"),
                         Error);
    CHECK_THROWS_WITH_AS(read_pgm("P5\n1 1\n65535\nxx"), doctest::Contains("maxval"),
                         Error);
    CHECK_THROWS_WITH_AS(read_pgm("P5\n1 1\n255\nab"), doctest::Contains("trailing"),
                         Error);
    CHECK_THROWS_AS(read_pgm("P5\n0 1\n255\n"), Error);
    CHECK_THROWS_AS(read_pgm("P2\n1 1\n255\n"), Error);        // missing sample
    CHECK_THROWS_AS(read_pgm("P2\n1 1\n100\n101\n"), Error);   // sample > maxval
    CHECK_THROWS_AS(read_pgm("P2\n1 1\n255\n1 junk\n"), Error);
    CHECK_THROWS_AS(read_pgm(""), Error);
}

TEST_CASE("low maxval samples still scale by 255") {
    const Image img = read_pgm("P2\n1 1\n100\n50\n");
    CHECK(img.at(0, 0) == 50.0 / 255.0);
}

TEST_CASE("idx image decode: header arithmetic") {
    const std::string bytes = idx_image_header(2, 28, 28) + std::string(1568, '\x05');
    const auto images = read_idx_images(bytes);
    REQUIRE(images.size() == 2);
    CHECK(images[0].width() == 28);
    CHECK(images[0].height() == 28);
    CHECK(images[0].channels() == 1);
    CHECK(images[1].at(3, 7) == 5.0 / 255.0);
}

TEST_CASE("idx wrong magic reports expected and actual") {
    const std::string img_file = idx_image_header(1, 2, 2) + std::string(4, '\0');
    CHECK_THROWS_WITH_AS(read_idx_labels(img_file),
                         doctest::Contains("expected magic 0x00000801"), Error);
    CHECK_THROWS_WITH_AS(read_idx_labels(img_file), doctest::Contains("0x00000803"),
                         Error);

    const std::string label_file = idx_label_header(1) + std::string(1, '\x07');
    CHECK_THROWS_WITH_AS(read_idx_images(label_file),
                         doctest::Contains("expected magic 0x00000803"), Error);
}

TEST_CASE("idx payload size must match the header exactly") {
    CHECK_THROWS_WITH_AS(read_idx_images(idx_image_header(2, 28, 28) + std::string(100, '\0')),
                         doctest::Contains("smaller"), Error);
    CHECK_THROWS_WITH_AS(read_idx_images(idx_image_header(1, 2, 2) + std::string(5, '\0')),
                         doctest::Contains("trailing"), Error);
    CHECK_THROWS_WITH_AS(read_idx_labels(idx_label_header(4) + std::string(9, '\0')),
                         doctest::Contains("trailing"), Error);
    CHECK_THROWS_AS(read_idx_images(std::string("\x00\x00", 2)), Error);
}

TEST_CASE("idx labels decode") {
    const std::string bytes = idx_label_header(3) + std::string("\x00\x09\x04", 3);
    const auto labels = read_idx_labels(bytes);
    CHECK(labels == std::vector<int>{0, 9, 4});
}

TEST_CASE("idx write/read round trip") {
    Rng rng(13);
    std::vector<Image> images;
    for (int i = 0; i < 3; ++i) {
        Image img(5, 4, 1);
        for (double& v : img.pixels()) v = static_cast<double>(rng.below(256)) / 255.0;
        images.push_back(std::move(img));
    }
    const std::string bytes = write_idx_images(images);
    const auto back = read_idx_images(bytes);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < back[i].pixels().size(); ++j) {
            CHECK(back[i].pixels()[j] == images[i].pixels()[j]);
        }
    }
}

TEST_CASE("idx write validations") {
    CHECK_THROWS_AS(write_idx_images({}), Error);
    std::vector<Image> mixed;
    mixed.push_back(Image(4, 4, 1));
    mixed.push_back(Image(5, 4, 1));
    CHECK_THROWS_WITH_AS(write_idx_images(mixed), doctest::Contains("image 1"), Error);
}

TEST_CASE("dataset invariants") {
    std::vector<Image> images(3, Image(2, 2, 1));
    CHECK_NOTHROW(make_dataset(images, {0, 5, 9}));
    CHECK_THROWS_WITH_AS(make_dataset(images, {0, 1}), doctest::Contains("3 images"),
                         Error);
    CHECK_THROWS_WITH_AS(make_dataset(images, {0, 1, 10}),
                         doctest::Contains("outside [0,9]"), Error);
}

TEST_CASE("file helpers round trip binary data") {
    const auto path = std::filesystem::temp_directory_path() / "neurnkit_io_test.bin";
    const std::string payload = std::string("\x00\x01\xff binary \n\r data", 18);
    write_file(path, payload);
    CHECK(read_file(path) == payload);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_file(path), Error);
}

} // TEST_SUITE
