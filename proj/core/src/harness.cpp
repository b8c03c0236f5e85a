#include "neurnkit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "neurnkit/error.hpp"
#include "neurnkit/neurn.hpp"
#include "neurnkit/rng.hpp"

namespace neurnkit {

namespace {

using json = nlohmann::ordered_json;

void check_unit_range(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(std::string("shift: ") + what + " leaves [0,1] (value " +
                    std::to_string(v) + "); use the clamped kind to allow this");
    }
}

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

DomainShift DomainShift::affine(double a, double b) {
    if (!(a > 0.0)) throw Error("shift: contrast a must be > 0");
    // a*[0,1] + b must stay inside [0,1].
    check_unit_range(b, "affine lower bound");
    check_unit_range(a + b, "affine upper bound");
    return DomainShift{Kind::affine, a, b, 0.0, 0};
}

DomainShift DomainShift::invert() {
    return DomainShift{Kind::invert, 1.0, 0.0, 0.0, 0};
}

DomainShift DomainShift::noise(double sigma_n, std::uint64_t seed) {
    if (!(sigma_n >= 0.0)) throw Error("shift: sigma_n must be >= 0");
    check_unit_range(sigma_n, "noise amplitude");
    return DomainShift{Kind::noise, 1.0, 0.0, sigma_n, seed};
}

DomainShift DomainShift::composite(double a, double b, double sigma_n,
                                   std::uint64_t seed) {
    if (!(a > 0.0)) throw Error("shift: contrast a must be > 0");
    if (!(sigma_n >= 0.0)) throw Error("shift: sigma_n must be >= 0");
    check_unit_range(b, "composite lower bound");
    check_unit_range(a + b + sigma_n, "composite upper bound");
    return DomainShift{Kind::composite, a, b, sigma_n, seed};
}

DomainShift DomainShift::clamped(double a, double b) {
    if (!(a > 0.0)) throw Error("shift: contrast a must be > 0");
    return DomainShift{Kind::clamped, a, b, 0.0, 0};
}

DomainShift::Kind DomainShift::kind_from_string(std::string_view s) {
    if (s == "affine") return Kind::affine;
    if (s == "invert") return Kind::invert;
    if (s == "noise") return Kind::noise;
    if (s == "composite") return Kind::composite;
    if (s == "clamped") return Kind::clamped;
    throw Error("shift: unknown kind \"" + std::string(s) + "\"");
}

std::string_view DomainShift::kind_to_string(Kind k) {
    switch (k) {
    case Kind::affine: return "affine";
    case Kind::invert: return "invert";
    case Kind::noise: return "noise";
    case Kind::composite: return "composite";
    case Kind::clamped: return "clamped";
    }
    return "affine";
}

namespace {

// Seven-segment layout on a 10x12 canvas. Segment order: a (top),
// b (top-right), c (bottom-right), d (bottom), e (bottom-left),
// f (top-left), g (middle).
constexpr std::uint8_t kSegmentsByDigit[kClassCount] = {
    0b0111111, // 0: abcdef
    0b0000110, // 1: bc
    0b1011011, // 2: abdeg
    0b1001111, // 3: abcdg
    0b1100110, // 4: bcfg
    0b1101101, // 5: acdfg
    0b1111101, // 6: acdefg
    0b0000111, // 7: abc
    0b1111111, // 8
    0b1101111, // 9: abcdfg
};

constexpr std::size_t kGlyphW = 10;
constexpr std::size_t kGlyphH = 12;

bool glyph_pixel(int digit, std::size_t gx, std::size_t gy) {
    const std::uint8_t seg = kSegmentsByDigit[digit];
    const bool a = seg & 0b0000001, b = seg & 0b0000010, c = seg & 0b0000100;
    const bool d = seg & 0b0001000, e = seg & 0b0010000, f = seg & 0b0100000;
    const bool g = seg & 0b1000000;
    if (a && gy <= 1 && gx >= 1 && gx <= 8) return true;
    if (g && gy >= 5 && gy <= 6 && gx >= 1 && gx <= 8) return true;
    if (d && gy >= 10 && gx >= 1 && gx <= 8) return true;
    if (f && gx <= 1 && gy >= 1 && gy <= 5) return true;
    if (b && gx >= 8 && gy >= 1 && gy <= 5) return true;
    if (e && gx <= 1 && gy >= 6 && gy <= 10) return true;
    if (c && gx >= 8 && gy >= 6 && gy <= 10) return true;
    return false;
}

constexpr double kInk = 0.9;
constexpr double kNoiseAmp = 0.05;

} // namespace

LabeledDataset gen_digits(std::uint64_t seed, std::size_t n) {
    if (n < kClassCount) {
        throw Error("gen_digits: need at least " + std::to_string(kClassCount) +
                    " samples, got " + std::to_string(n));
    }
    Rng rng(seed);
    std::vector<Image> images;
    std::vector<int> labels;
    images.reserve(n);
    labels.reserve(n);

    // Glyph canvas sits at offset (3,2); +-2 translation keeps it inside.
    for (std::size_t i = 0; i < n; ++i) {
        const int digit = static_cast<int>(i % kClassCount);
        const int dx = rng.range_int(-2, 2);
        const int dy = rng.range_int(-2, 2);

        Image img(kDigitSize, kDigitSize, 1);
        const std::size_t ox = static_cast<std::size_t>(3 + dx);
        const std::size_t oy = static_cast<std::size_t>(2 + dy);
        for (std::size_t gy = 0; gy < kGlyphH; ++gy) {
            for (std::size_t gx = 0; gx < kGlyphW; ++gx) {
                if (glyph_pixel(digit, gx, gy)) img.at(ox + gx, oy + gy) = kInk;
            }
        }
        for (double& v : img.pixels()) v += kNoiseAmp * rng.uniform();

        images.push_back(std::move(img));
        labels.push_back(digit);
    }
    return make_dataset(std::move(images), std::move(labels));
}

LabeledDataset apply_shift(const LabeledDataset& data, const DomainShift& shift) {
    LabeledDataset out{data.images, data.labels};
    Rng rng(shift.seed);
    for (Image& img : out.images) {
        for (double& v : img.pixels()) {
            switch (shift.kind) {
            case DomainShift::Kind::affine:
                v = shift.a * v + shift.b;
                break;
            case DomainShift::Kind::invert:
                v = 1.0 - v;
                break;
            case DomainShift::Kind::noise:
                v += shift.sigma_n * rng.uniform();
                break;
            case DomainShift::Kind::composite:
                v = shift.a * v + shift.b + shift.sigma_n * rng.uniform();
                break;
            case DomainShift::Kind::clamped:
                v = std::clamp(shift.a * v + shift.b, 0.0, 1.0);
                break;
            }
            if (shift.kind != DomainShift::Kind::clamped) {
                check_unit_range(v, "shifted value");
            }
        }
    }
    return out;
}

TinyClassifier TinyClassifier::zeros(std::size_t input_dim) {
    TinyClassifier model;
    model.input_dim = input_dim;
    model.weights.assign(kClassCount * input_dim, 0.0);
    model.bias.assign(kClassCount, 0.0);
    return model;
}

TinyClassifier TinyClassifier::random_init(std::size_t input_dim,
                                           std::uint64_t seed, double scale) {
    TinyClassifier model = zeros(input_dim);
    Rng rng(seed);
    for (double& w : model.weights) w = rng.uniform(-scale, scale);
    for (double& b : model.bias) b = rng.uniform(-scale, scale);
    return model;
}

std::array<double, kClassCount> TinyClassifier::logits(
    std::span<const double> x) const {
    if (x.size() != input_dim) {
        throw Error("classifier: input size " + std::to_string(x.size()) +
                    " does not match model dimension " + std::to_string(input_dim));
    }
    std::array<double, kClassCount> out{};
    for (std::size_t c = 0; c < kClassCount; ++c) {
        double acc = bias[c];
        const double* w = weights.data() + c * input_dim;
        for (std::size_t i = 0; i < input_dim; ++i) acc += w[i] * x[i];
        out[c] = acc;
    }
    return out;
}

int TinyClassifier::predict(std::span<const double> x) const {
    const auto z = logits(x);
    int best = 0;
    for (std::size_t c = 1; c < kClassCount; ++c) {
        if (z[c] > z[best]) best = static_cast<int>(c);
    }
    return best;
}

namespace {

void check_trainable(const LabeledDataset& data) {
    if (data.images.empty()) throw Error("train: empty dataset");
    for (std::size_t i = 1; i < data.images.size(); ++i) {
        if (!data.images[i].same_shape(data.images.front())) {
            throw Error("train: image " + std::to_string(i) + " has different dimensions");
        }
    }
}

std::array<double, kClassCount> softmax(const std::array<double, kClassCount>& z) {
    double zmax = z[0];
    for (double v : z) zmax = std::max(zmax, v);
    std::array<double, kClassCount> p{};
    double sum = 0.0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        p[c] = std::exp(z[c] - zmax);
        sum += p[c];
    }
    for (double& v : p) v /= sum;
    return p;
}

// Loss and gradient in one pass; grads may be null for loss-only callers.
double loss_and_gradient(const TinyClassifier& model, const LabeledDataset& data,
                         Gradients* grads) {
    const std::size_t n = data.images.size();
    const std::size_t dim = model.input_dim;
    if (grads) {
        grads->weights.assign(kClassCount * dim, 0.0);
        grads->bias.assign(kClassCount, 0.0);
    }
    double loss = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto& pixels = data.images[s].pixels();
        const auto p = softmax(model.logits(pixels));
        const int label = data.labels[s];
        loss -= std::log(std::max(p[static_cast<std::size_t>(label)],
                                  std::numeric_limits<double>::min()));
        if (grads) {
            for (std::size_t c = 0; c < kClassCount; ++c) {
                const double delta = p[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
                grads->bias[c] += delta;
                double* gw = grads->weights.data() + c * dim;
                for (std::size_t i = 0; i < dim; ++i) gw[i] += delta * pixels[i];
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    if (grads) {
        for (double& g : grads->weights) g *= inv_n;
        for (double& g : grads->bias) g *= inv_n;
    }
    return loss * inv_n;
}

} // namespace

TrainResult train(const LabeledDataset& data, const TrainOptions& opts) {
    check_trainable(data);
    if (!(opts.lr > 0.0)) throw Error("train: lr must be > 0");

    TrainResult result;
    result.single_class =
        std::all_of(data.labels.begin(), data.labels.end(),
                    [&](int l) { return l == data.labels.front(); });

    const std::size_t dim = data.images.front().pixel_count();
    result.model = TinyClassifier::random_init(dim, opts.seed, 0.01);
    result.loss_history.reserve(opts.epochs + 1);

    Gradients grads;
    for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
        const double loss = loss_and_gradient(result.model, data, &grads);
        result.loss_history.push_back(loss);
        for (std::size_t i = 0; i < result.model.weights.size(); ++i) {
            result.model.weights[i] -= opts.lr * grads.weights[i];
        }
        for (std::size_t c = 0; c < kClassCount; ++c) {
            result.model.bias[c] -= opts.lr * grads.bias[c];
        }
    }
    result.loss_history.push_back(loss_and_gradient(result.model, data, nullptr));
    return result;
}

double training_loss(const TinyClassifier& model, const LabeledDataset& data) {
    check_trainable(data);
    return loss_and_gradient(model, data, nullptr);
}

Gradients training_gradient(const TinyClassifier& model, const LabeledDataset& data) {
    check_trainable(data);
    Gradients grads;
    loss_and_gradient(model, data, &grads);
    return grads;
}

Evaluation evaluate(const TinyClassifier& model, const LabeledDataset& data) {
    if (data.images.empty()) throw Error("evaluate: empty dataset");
    Evaluation eval;
    eval.predictions.reserve(data.images.size());
    std::size_t correct = 0;
    for (std::size_t s = 0; s < data.images.size(); ++s) {
        const int predicted = model.predict(data.images[s].pixels());
        eval.predictions.push_back(predicted);
        eval.confusion[static_cast<std::size_t>(data.labels[s])]
                      [static_cast<std::size_t>(predicted)] += 1;
        if (predicted == data.labels[s]) ++correct;
    }
    eval.accuracy = static_cast<double>(correct) / static_cast<double>(data.images.size());
    return eval;
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error("config: not well-formed JSON");
    if (!doc.is_object()) throw Error("config: document must be an object");

    ExperimentConfig cfg;
    DomainShift::Kind kind = cfg.shift.kind;
    double a = cfg.shift.a, b = cfg.shift.b, sigma_n = cfg.shift.sigma_n;
    std::uint64_t shift_seed = cfg.shift.seed;

    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "n_train") {
                cfg.n_train = value.get<std::size_t>();
            } else if (key == "n_test") {
                cfg.n_test = value.get<std::size_t>();
            } else if (key == "k") {
                cfg.k = value.get<int>();
            } else if (key == "epochs") {
                cfg.epochs = value.get<std::size_t>();
            } else if (key == "lr") {
                cfg.lr = value.get<double>();
            } else if (key == "shift") {
                if (!value.is_object()) throw Error("config: shift: must be an object");
                for (const auto& [skey, svalue] : value.items()) {
                    try {
                        if (skey == "kind") {
                            kind = DomainShift::kind_from_string(svalue.get<std::string>());
                        } else if (skey == "a") {
                            a = svalue.get<double>();
                        } else if (skey == "b") {
                            b = svalue.get<double>();
                        } else if (skey == "sigma_n") {
                            sigma_n = svalue.get<double>();
                        } else if (skey == "seed") {
                            shift_seed = svalue.get<std::uint64_t>();
                        } else {
                            throw Error("config: shift." + skey + ": unknown field");
                        }
                    } catch (const json::exception&) {
                        throw Error("config: shift." + skey + ": wrong type");
                    }
                }
            } else {
                throw Error("config: " + key + ": unknown field");
            }
        } catch (const json::exception&) {
            throw Error("config: " + key + ": wrong type");
        }
    }

    switch (kind) {
    case DomainShift::Kind::affine:
        cfg.shift = DomainShift::affine(a, b);
        break;
    case DomainShift::Kind::invert:
        cfg.shift = DomainShift::invert();
        break;
    case DomainShift::Kind::noise:
        cfg.shift = DomainShift::noise(sigma_n, shift_seed);
        break;
    case DomainShift::Kind::composite:
        cfg.shift = DomainShift::composite(a, b, sigma_n, shift_seed);
        break;
    case DomainShift::Kind::clamped:
        cfg.shift = DomainShift::clamped(a, b);
        break;
    }
    return cfg;
}

std::string ExperimentConfig::to_json() const {
    json doc;
    doc["seed"] = seed;
    doc["n_train"] = n_train;
    doc["n_test"] = n_test;
    doc["k"] = k;
    doc["shift"] = {
        {"kind", DomainShift::kind_to_string(shift.kind)},
        {"a", shift.a},
        {"b", shift.b},
        {"sigma_n", shift.sigma_n},
        {"seed", shift.seed},
    };
    doc["epochs"] = epochs;
    doc["lr"] = lr;
    return doc.dump(2) + "\n";
}

namespace {

json confusion_to_json(const Confusion& confusion) {
    json rows = json::array();
    for (const auto& row : confusion) {
        json cells = json::array();
        for (std::uint32_t v : row) cells.push_back(v);
        rows.push_back(std::move(cells));
    }
    return rows;
}

json arm_to_json(const ArmReport& arm) {
    json doc;
    doc["source_accuracy"] = arm.source.accuracy;
    doc["target_accuracy"] = arm.target.accuracy;
    doc["train_loss_final"] = arm.train_loss_final;
    doc["single_class_warning"] = arm.single_class_warning;
    doc["wall_time_s"] = arm.wall_time_s;
    doc["source_confusion"] = confusion_to_json(arm.source.confusion);
    doc["target_confusion"] = confusion_to_json(arm.target.confusion);
    return doc;
}

ArmReport run_arm(const LabeledDataset& train_data, const LabeledDataset& source_test,
                  const LabeledDataset& target_test, const TrainOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    ArmReport arm;
    TrainResult trained = train(train_data, opts);
    arm.train_loss_final = trained.loss_history.back();
    arm.single_class_warning = trained.single_class;
    arm.source = evaluate(trained.model, source_test);
    arm.target = evaluate(trained.model, target_test);
    arm.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return arm;
}

LabeledDataset transform_dataset(const LabeledDataset& data, const NeurnConfig& cfg) {
    return LabeledDataset{transform_batch(data.images, cfg), data.labels};
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n_train < kClassCount || cfg.n_test < kClassCount) {
        throw Error("experiment: n_train and n_test must be >= " +
                    std::to_string(kClassCount));
    }
    Rng seeder(cfg.seed);
    const std::uint64_t train_seed = seeder.next_u64();
    const std::uint64_t test_seed = seeder.next_u64();

    const LabeledDataset train_data = gen_digits(train_seed, cfg.n_train);
    const LabeledDataset test_data = gen_digits(test_seed, cfg.n_test);
    const LabeledDataset shifted_test = apply_shift(test_data, cfg.shift);

    const TrainOptions opts{cfg.epochs, cfg.lr, cfg.seed};

    ExperimentReport report;
    report.config = cfg;
    report.baseline = run_arm(train_data, test_data, shifted_test, opts);

    NeurnConfig neurn_cfg;
    neurn_cfg.k = cfg.k;
    const auto start = std::chrono::steady_clock::now();
    const LabeledDataset neurn_train = transform_dataset(train_data, neurn_cfg);
    const LabeledDataset neurn_test = transform_dataset(test_data, neurn_cfg);
    const LabeledDataset neurn_shifted = transform_dataset(shifted_test, neurn_cfg);
    report.neurn = run_arm(neurn_train, neurn_test, neurn_shifted, opts);
    // Charge the preprocessing time to the neurn arm.
    report.neurn.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string ExperimentReport::summary_csv() const {
    std::string out = "arm,source_acc,target_acc\n";
    out += "baseline," + format6(baseline.source.accuracy) + "," +
           format6(baseline.target.accuracy) + "\n";
    out += "neurn," + format6(neurn.source.accuracy) + "," +
           format6(neurn.target.accuracy) + "\n";
    return out;
}

std::string ExperimentReport::to_json() const {
    json doc;
    doc["config"] = json::parse(config.to_json());
    doc["baseline"] = arm_to_json(baseline);
    doc["neurn"] = arm_to_json(neurn);
    return doc.dump(2) + "\n";
}

} // namespace neurnkit
