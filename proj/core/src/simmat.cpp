#include "neurnkit/simmat.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "neurnkit/error.hpp"

namespace neurnkit {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kDiagonalTol = 1e-12;

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw Error("csv: non-numeric cell \"" + cell + "\" at line " +
                    std::to_string(line) + ", column " + std::to_string(col));
    }
    return value;
}

} // namespace

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> labels,
                                   std::vector<double> values, MatrixKind kind)
    : labels_(std::move(labels)), values_(std::move(values)), kind_(kind) {
    const std::size_t n = labels_.size();
    if (n == 0) throw Error("matrix: no labels");
    if (values_.size() != n * n) {
        throw Error("matrix: expected " + std::to_string(n * n) + " values, got " +
                    std::to_string(values_.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_) {
        if (label.empty()) throw Error("matrix: empty label");
        if (!seen.insert(label).second) {
            throw Error("matrix: duplicate label \"" + label + "\"");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("matrix: non-finite value");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(at(i, j) - at(j, i)) > kSymmetryTol) {
                throw Error("matrix: asymmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
            }
        }
        if (kind_ == MatrixKind::similarity &&
            std::abs(at(i, i) - 1.0) > kDiagonalTol) {
            throw Error("matrix: diagonal entry for \"" + labels_[i] +
                        "\" is " + std::to_string(at(i, i)) + ", expected 1");
        }
    }
}

SimilarityMatrix SimilarityMatrix::reordered(
    const std::vector<std::string>& order) const {
    const std::size_t n = size();
    if (order.size() != n) throw Error("reorder: label count mismatch");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(labels_[i], i);
    std::vector<std::size_t> perm;
    perm.reserve(n);
    for (const auto& label : order) {
        auto it = index.find(label);
        if (it == index.end()) throw Error("reorder: unknown label \"" + label + "\"");
        perm.push_back(it->second);
    }
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            values[i * n + j] = at(perm[i], perm[j]);
        }
    }
    return SimilarityMatrix(order, std::move(values), kind_);
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error("cosine: length mismatch (" + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()) + ")");
    }
    if (u.empty()) throw Error("cosine: empty vectors");
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw Error("cosine: zero vector");
    return dot / (std::sqrt(uu) * std::sqrt(vv));
}

Variant variant_from_string(std::string_view s) {
    if (s == "baseline") return Variant::baseline;
    if (s == "neurn") return Variant::neurn;
    throw Error("variant must be \"baseline\" or \"neurn\", got \"" +
                std::string(s) + "\"");
}

std::string_view to_string(Variant v) {
    return v == Variant::baseline ? "baseline" : "neurn";
}

std::span<const std::string_view> task_columns() {
    static constexpr std::array<std::string_view, 12> kColumns = {
        "M-U", "M-S", "M-MM", "U-M", "U-S", "U-MM",
        "S-M", "S-U", "S-MM", "MM-M", "MM-U", "MM-S",
    };
    return kColumns;
}

PerfTable PerfTable::parse_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error("perf table: empty document");

    const auto header = split_cells(lines[0]);
    const auto tasks = task_columns();
    if (header.size() != 2 + tasks.size()) {
        throw Error("perf table: header must have " +
                    std::to_string(2 + tasks.size()) + " columns, got " +
                    std::to_string(header.size()) + " at line 1");
    }
    if (header[0] != "model" || header[1] != "variant") {
        throw Error("perf table: header must start with model,variant (line 1)");
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (header[2 + i] != tasks[i]) {
            throw Error("perf table: task column " + std::to_string(i + 3) +
                        " must be \"" + std::string(tasks[i]) + "\", got \"" +
                        header[2 + i] + "\" (line 1)");
        }
    }

    PerfTable table;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto cells = split_cells(lines[li]);
        if (cells.size() != header.size()) {
            throw Error("perf table: expected " + std::to_string(header.size()) +
                        " cells, got " + std::to_string(cells.size()) + " at line " +
                        std::to_string(li + 1));
        }
        const std::string& model = cells[0];
        if (model.empty()) {
            throw Error("perf table: empty model name at line " + std::to_string(li + 1));
        }
        const Variant variant = variant_from_string(cells[1]);

        auto [it, inserted] = index.emplace(model, table.models_.size());
        if (inserted) {
            table.models_.push_back(model);
            table.baseline_.resize(table.baseline_.size() + tasks.size(), 0.0);
            table.neurn_.resize(table.neurn_.size() + tasks.size(), 0.0);
            table.has_baseline_.push_back(false);
            table.has_neurn_.push_back(false);
        }
        const std::size_t mi = it->second;
        auto& has = variant == Variant::baseline ? table.has_baseline_ : table.has_neurn_;
        if (has[mi]) {
            throw Error("perf table: duplicate row for model \"" + model + "\" variant " +
                        std::string(to_string(variant)) + " at line " + std::to_string(li + 1));
        }
        has[mi] = true;
        auto& dest = variant == Variant::baseline ? table.baseline_ : table.neurn_;
        for (std::size_t c = 0; c < tasks.size(); ++c) {
            const double v = parse_cell(cells[2 + c], li + 1, c + 3);
            if (v < 0.0 || v > 100.0) {
                throw Error("perf table: accuracy " + cells[2 + c] +
                            " out of [0,100] at line " + std::to_string(li + 1) +
                            ", column " + std::to_string(c + 3));
            }
            dest[mi * tasks.size() + c] = v;
        }
    }
    if (table.models_.empty()) throw Error("perf table: no data rows");
    return table;
}

PerfTable PerfTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::span<const double> PerfTable::row(std::string_view model, Variant v) const {
    const std::size_t width = task_columns().size();
    for (std::size_t i = 0; i < models_.size(); ++i) {
        if (models_[i] != model) continue;
        const auto& has = v == Variant::baseline ? has_baseline_ : has_neurn_;
        if (!has[i]) {
            throw Error("perf table: model \"" + std::string(model) +
                        "\" has no " + std::string(to_string(v)) + " row");
        }
        const auto& data = v == Variant::baseline ? baseline_ : neurn_;
        return {data.data() + i * width, width};
    }
    throw Error("perf table: unknown model \"" + std::string(model) + "\"");
}

PerfTable PerfTable::without(std::span<const std::string> exclude) const {
    for (const auto& name : exclude) {
        if (std::find(models_.begin(), models_.end(), name) == models_.end()) {
            throw Error("perf table: cannot exclude unknown model \"" + name + "\"");
        }
    }
    PerfTable out;
    const std::size_t width = task_columns().size();
    for (std::size_t i = 0; i < models_.size(); ++i) {
        if (std::find(exclude.begin(), exclude.end(), models_[i]) != exclude.end()) {
            continue;
        }
        out.models_.push_back(models_[i]);
        out.has_baseline_.push_back(has_baseline_[i]);
        out.has_neurn_.push_back(has_neurn_[i]);
        out.baseline_.insert(out.baseline_.end(), baseline_.begin() + i * width,
                             baseline_.begin() + (i + 1) * width);
        out.neurn_.insert(out.neurn_.end(), neurn_.begin() + i * width,
                          neurn_.begin() + (i + 1) * width);
    }
    if (out.models_.empty()) throw Error("perf table: exclusion removed every model");
    return out;
}

SimilarityMatrix functional_similarity(const PerfTable& table, Variant variant,
                                       CosineMode mode) {
    const auto& models = table.models();
    const std::size_t n = models.size();
    const std::size_t width = task_columns().size();

    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = table.row(models[i], variant);
        rows[i].assign(row.begin(), row.end());
        if (mode == CosineMode::centered) {
            double mean = 0.0;
            for (double v : rows[i]) mean += v;
            mean /= static_cast<double>(width);
            for (double& v : rows[i]) v -= mean;
        }
    }

    std::vector<double> values(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = cosine(rows[i], rows[j]);
            values[i * n + j] = c;
            values[j * n + i] = c;
        }
    }
    return SimilarityMatrix(models, std::move(values), MatrixKind::similarity);
}

SimilarityMatrix difference_matrix(const SimilarityMatrix& a,
                                   const SimilarityMatrix& b) {
    if (a.labels() != b.labels()) {
        throw Error("difference: label mismatch between matrices");
    }
    const std::size_t n = a.size();
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        values[i] = a.values()[i] - b.values()[i];
    }
    return SimilarityMatrix(a.labels(), std::move(values), MatrixKind::difference);
}

double mean_offdiagonal(const SimilarityMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw Error("mean_offdiagonal: need at least a 2x2 matrix");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) sum += m.at(i, j);
        }
    }
    return sum / static_cast<double>(n * (n - 1));
}

std::vector<std::string> cluster_order(const SimilarityMatrix& m) {
    if (m.kind() != MatrixKind::similarity) {
        throw Error("cluster_order: requires a similarity-kind matrix");
    }
    const std::size_t n = m.size();

    // Average-linkage agglomeration on distance 1 - s. Each cluster keeps
    // its members in input order; ties pick the pair with the lowest
    // original leading indices.
    struct Cluster {
        std::vector<std::size_t> members;
    };
    std::vector<Cluster> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i].members = {i};

    auto linkage = [&](const Cluster& a, const Cluster& b) {
        double sum = 0.0;
        for (std::size_t i : a.members) {
            for (std::size_t j : b.members) sum += 1.0 - m.at(i, j);
        }
        return sum / static_cast<double>(a.members.size() * b.members.size());
    };

    while (clusters.size() > 1) {
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const double d = linkage(clusters[a], clusters[b]);
                if (d < best) {
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        auto& dst = clusters[best_a].members;
        auto& src = clusters[best_b].members;
        dst.insert(dst.end(), src.begin(), src.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    }

    std::vector<std::string> order;
    order.reserve(n);
    for (std::size_t i : clusters[0].members) order.push_back(m.labels()[i]);
    return order;
}

std::string to_csv(const SimilarityMatrix& m) {
    std::string out;
    for (const auto& label : m.labels()) {
        out += ',';
        out += label;
    }
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += m.labels()[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += ',';
            out += format6(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

void export_csv(const SimilarityMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << to_csv(m);
    if (!out) throw Error("write failed: " + path.string());
}

SimilarityMatrix parse_matrix_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error("csv: empty document (line 1)");

    const auto header = split_cells(lines[0]);
    if (header.size() < 2 || !header[0].empty()) {
        throw Error("csv: header must start with an empty cell (line 1)");
    }
    std::vector<std::string> labels(header.begin() + 1, header.end());
    const std::size_t n = labels.size();

    std::vector<std::string> data_lines;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (!lines[li].empty()) data_lines.push_back(lines[li]);
    }
    if (data_lines.size() != n) {
        throw Error("csv: expected " + std::to_string(n) + " data rows for " +
                    std::to_string(n) + " labels, got " +
                    std::to_string(data_lines.size()));
    }

    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t line_no = i + 2;
        const auto cells = split_cells(data_lines[i]);
        if (cells.size() != n + 1) {
            throw Error("csv: expected " + std::to_string(n + 1) + " cells, got " +
                        std::to_string(cells.size()) + " at line " +
                        std::to_string(line_no));
        }
        if (cells[0] != labels[i]) {
            throw Error("csv: row label \"" + cells[0] + "\" does not match header label \"" +
                        labels[i] + "\" at line " + std::to_string(line_no));
        }
        for (std::size_t j = 0; j < n; ++j) {
            values[i * n + j] = parse_cell(cells[j + 1], line_no, j + 2);
        }
    }

    bool unit_diag = true, zero_diag = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(values[i * n + i] - 1.0) > 1e-6) unit_diag = false;
        if (std::abs(values[i * n + i]) > 1e-6) zero_diag = false;
    }
    MatrixKind kind = unit_diag  ? MatrixKind::similarity
                      : zero_diag ? MatrixKind::difference
                                  : MatrixKind::raw;
    if (kind == MatrixKind::similarity) {
        // Snap the 6-decimal diagonal back to exactly 1.
        for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;
    }
    return SimilarityMatrix(std::move(labels), std::move(values), kind);
}

SimilarityMatrix import_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix_csv(buf.str());
}

} // namespace neurnkit
