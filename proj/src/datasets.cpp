// datasets.cpp

#include "qfilter/datasets.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qfilter/errors.hpp"

namespace qfilter {

std::size_t RawDataset::count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void RawDataset::validate() const {
    if (static_cast<std::size_t>(features.rows()) != labels.size())
        throw ShapeError("feature rows (" + std::to_string(features.rows()) + ") != labels (" +
                         std::to_string(labels.size()) + ")");
    for (int y : labels)
        if (y != 1 && y != -1) throw DomainError("label " + std::to_string(y) + " is not +1 or -1");
    if (count(1) == 0 || count(-1) == 0) throw ClassBalanceError("dataset '" + name + "' lacks one of the two classes");
}

IrisData iris_builtin() {
    IrisData iris;
    iris.train.name = "iris";
    iris.train.features.resize(2, 2);
    iris.train.features << 0.796, 0.607,
                           0.0, 1.0;
    iris.train.labels = {1, -1};
    iris.test_x = {-0.557, 0.83};
    iris.test_label = -1;
    return iris;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_double(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc() || ptr != last) throw CsvError(line, "cannot parse '" + t + "' as a number");
    return v;
}

}  // namespace

RawDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw CsvError(1, "missing header row");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_csv_line(trim(line));
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return trim(h) == options.label_column; });
    if (it == header.end()) throw CsvError(1, "no column named '" + options.label_column + "'");
    const auto label_col = static_cast<std::size_t>(it - header.begin());
    const std::size_t n_features = header.size() - 1;

    std::vector<std::vector<double>> rows;
    std::vector<double> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw CsvError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                        std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(n_features);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const double v = parse_double(cells[j], line_no);
            if (j == label_col)
                raw_labels.push_back(v);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(line_no, "no data rows");

    const bool zero_one = std::all_of(raw_labels.begin(), raw_labels.end(), [](double y) { return y == 0.0 || y == 1.0; });
    const bool has_zero = std::find(raw_labels.begin(), raw_labels.end(), 0.0) != raw_labels.end();
    const bool remap = zero_one && has_zero;
    if (options.remapped) *options.remapped = remap;
    if (remap) std::cerr << "warning: " << path.string() << ": labels {0,1} remapped to {-1,+1}\n";

    RawDataset data;
    data.name = path.filename().string();
    data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_features));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < n_features; ++j)
            data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        const double y = raw_labels[i];
        if (remap)
            data.labels.push_back(y == 1.0 ? 1 : -1);
        else if (y == 1.0 || y == -1.0)
            data.labels.push_back(static_cast<int>(y));
        else
            throw CsvError(i + 2, "label must be +1/-1 or 0/1");
    }
    data.validate();
    return data;
}

PCAModel pca_fit(const Eigen::MatrixXd& data, int k) {
    const auto m = data.rows();
    const auto d = data.cols();
    if (k < 1 || k > std::min(m, d)) throw DimError("pca_fit: k must be in [1, min(M, d)]");
    PCAModel model;
    model.mean = data.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
    const double denom = m > 1 ? static_cast<double>(m - 1) : 1.0;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    model.components.resize(d, k);
    model.explained_variance.resize(k);
    for (int c = 0; c < k; ++c) {
        // eigenvalues ascend
        const auto src = d - 1 - c;
        Eigen::VectorXd v = es.eigenvectors().col(src);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        model.components.col(c) = v;
        model.explained_variance(c) = std::max(0.0, es.eigenvalues()(src));
    }
    return model;
}

Eigen::MatrixXd pca_transform(const PCAModel& model, const Eigen::MatrixXd& data) {
    if (data.cols() != model.mean.size()) throw DimError("pca_transform: feature dimension mismatch");
    return (data.rowwise() - model.mean.transpose()) * model.components;
}

RawDataset pca_transform(const PCAModel& model, const RawDataset& data) {
    RawDataset out;
    out.features = pca_transform(model, data.features);
    out.labels = data.labels;
    out.name = data.name + "/pca" + std::to_string(model.components.cols());
    return out;
}

std::vector<double> downsample_image(const std::vector<double>& pixels) {
    if (pixels.size() != 28 * 28) throw ShapeError("downsample_image expects 784 pixels, got " + std::to_string(pixels.size()));
    std::vector<double> out(16, 0.0);
    for (int r = 0; r < 28; ++r)
        for (int c = 0; c < 28; ++c) out[static_cast<std::size_t>((r / 7) * 4 + c / 7)] += pixels[static_cast<std::size_t>(r * 28 + c)];
    for (double& v : out) v /= 49.0;
    return out;
}

Eigen::MatrixXd downsample_images(const Eigen::MatrixXd& rows) {
    if (rows.cols() != 784) throw ShapeError("downsample_images expects 784 columns");
    Eigen::MatrixXd out(rows.rows(), 16);
    std::vector<double> px(784);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < 784; ++j) px[static_cast<std::size_t>(j)] = rows(i, j);
        const auto small = downsample_image(px);
        for (Eigen::Index j = 0; j < 16; ++j) out(i, j) = small[static_cast<std::size_t>(j)];
    }
    return out;
}

RawDataset synthetic_blobs(std::uint64_t seed, int per_class, int dims, double separation) {
    if (per_class < 1) throw DomainError("synthetic_blobs: per_class must be >= 1");
    if (dims < 1) throw DimError("synthetic_blobs: dims must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RawDataset data;
    data.name = "blobs";
    data.features.resize(2 * per_class, dims);
    for (int i = 0; i < 2 * per_class; ++i) {
        const int label = i < per_class ? 1 : -1;
        for (int j = 0; j < dims; ++j) data.features(i, j) = gauss(rng);
        data.features(i, 0) += label * separation / 2.0;
        data.labels.push_back(label);
    }
    return data;
}

std::uint64_t fingerprint(const RawDataset& data) {
    std::uint64_t h = 14695981039346656037ull;
    const auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(data.features.rows()));
    mix(static_cast<std::uint64_t>(data.features.cols()));
    for (Eigen::Index i = 0; i < data.features.rows(); ++i)
        for (Eigen::Index j = 0; j < data.features.cols(); ++j) mix(std::bit_cast<std::uint64_t>(data.features(i, j)));
    for (int y : data.labels) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(y)));
    return h;
}

}  // namespace qfilter
