#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurnkit/image.hpp"
#include "neurnkit/imageio.hpp"

namespace neurnkit {

inline constexpr std::size_t kClassCount = 10;
inline constexpr std::size_t kDigitSize = 16; // USPS-style 16x16 glyphs

/// A label-preserving transformation of image intensities.
///
/// affine / invert / noise / composite never clamp: parameters are checked
/// against the canonical [0,1] range at construction and every shifted
/// value is re-validated on application. `clamped` is the escape hatch for
/// exploring shifts that leave the range; it is excluded from the
/// invariance guarantees because clamping destroys affine structure.
/// Noise is uniform in [0, sigma_n] (the same one-sided convention the
/// digit generator uses), drawn from the shift's own seed.
struct DomainShift {
    enum class Kind { affine, invert, noise, composite, clamped };

    Kind kind = Kind::affine;
    double a = 1.0;
    double b = 0.0;
    double sigma_n = 0.0;
    std::uint64_t seed = 0;

    static DomainShift affine(double a, double b);
    static DomainShift invert();
    static DomainShift noise(double sigma_n, std::uint64_t seed = 0);
    static DomainShift composite(double a, double b, double sigma_n,
                                 std::uint64_t seed = 0);
    static DomainShift clamped(double a, double b);

    static Kind kind_from_string(std::string_view s);
    static std::string_view kind_to_string(Kind k);
};

/// Deterministic 10-class digit dataset: seven-segment glyphs on a 16x16
/// canvas, integer translation in [-2,2]^2, per-pixel uniform noise in
/// [0, 0.05). Labels cycle 0..9 so classes balance within +-1.
LabeledDataset gen_digits(std::uint64_t seed, std::size_t n);

/// Shifted copy; labels untouched. Throws if any shifted value leaves
/// [0,1] (except for the clamped kind, which clamps by definition).
LabeledDataset apply_shift(const LabeledDataset& data, const DomainShift& shift);

/// Multinomial logistic regression over flattened pixels.
struct TinyClassifier {
    std::size_t input_dim = 0;
    std::vector<double> weights; // kClassCount x input_dim, row-major
    std::vector<double> bias;    // kClassCount

    static TinyClassifier zeros(std::size_t input_dim);
    static TinyClassifier random_init(std::size_t input_dim, std::uint64_t seed,
                                      double scale);

    std::array<double, kClassCount> logits(std::span<const double> x) const;
    /// argmax of logits; ties resolve to the lowest class id.
    int predict(std::span<const double> x) const;
};

struct TrainOptions {
    std::size_t epochs = 200;
    double lr = 0.1;
    std::uint64_t seed = 0; // initial-weight noise
};

struct TrainResult {
    TinyClassifier model;
    /// Loss before each update plus the final loss (epochs + 1 entries).
    std::vector<double> loss_history;
    bool single_class = false; // degenerate data; training still ran
};

/// Full-batch gradient descent on softmax cross-entropy.
TrainResult train(const LabeledDataset& data, const TrainOptions& opts);

/// Mean cross-entropy of the model on the data.
double training_loss(const TinyClassifier& model, const LabeledDataset& data);

struct Gradients {
    std::vector<double> weights;
    std::vector<double> bias;
};

/// Analytic gradient of training_loss; checked against central finite
/// differences in the test suite.
Gradients training_gradient(const TinyClassifier& model, const LabeledDataset& data);

using Confusion = std::array<std::array<std::uint32_t, kClassCount>, kClassCount>;

struct Evaluation {
    double accuracy = 0.0;
    Confusion confusion{}; // [true][predicted]
    std::vector<int> predictions;
};

Evaluation evaluate(const TinyClassifier& model, const LabeledDataset& data);

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t n_train = 2000;
    std::size_t n_test = 2000;
    int k = 3;
    DomainShift shift = DomainShift::affine(0.3, 0.35);
    std::size_t epochs = 200;
    double lr = 0.1;

    static ExperimentConfig from_json(std::string_view text);
    std::string to_json() const;
};

/// One arm (baseline or neurn): the same classifier evaluated on the
/// source-domain test set and on the shifted target test set.
struct ArmReport {
    Evaluation source;
    Evaluation target;
    double train_loss_final = 0.0;
    bool single_class_warning = false;
    double wall_time_s = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    ArmReport baseline;
    ArmReport neurn;

    /// Deterministic accuracy summary: arm,source_acc,target_acc rows.
    std::string summary_csv() const;
    /// Full report including confusions and wall times.
    std::string to_json() const;
};

/// Generates data, trains both arms on identical datasets, evaluates on
/// source and shifted-target test sets. Pure function of the config except
/// for the wall_time_s fields.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

} // namespace neurnkit
