// datasets.hpp
// Built-in data, CSV ingestion, PCA, image downsampling and synthetic blobs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qfilter {

/// Labelled binary-classification data. Rows of `features` are samples;
/// labels are +1 / -1.
struct RawDataset {
    Eigen::MatrixXd features;
    std::vector<int> labels;
    std::string name;

    std::size_t size() const noexcept { return labels.size(); }
    Eigen::Index dims() const noexcept { return features.cols(); }
    std::size_t count(int label) const;

    /// Throws ShapeError on row/label mismatch, DomainError on a label outside
    /// {+1,-1}, ClassBalanceError when a class is missing.
    void validate() const;
};

struct IrisData {
    RawDataset train;
    std::vector<double> test_x;
    int test_label = 0;
};

/// The two training points and one test point of the Iris demonstration.
IrisData iris_builtin();

struct CsvOptions {
    std::string label_column = "label";
    /// Set by load_csv when {0,1} labels were remapped to {-1,+1}.
    bool* remapped = nullptr;
};

RawDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

struct PCAModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;          // d x k, orthonormal columns
    Eigen::VectorXd explained_variance;  // k, descending
};

/// Top-k eigenvectors of the sample covariance. Each component is sign-fixed
/// so that its largest-magnitude entry is positive.
PCAModel pca_fit(const Eigen::MatrixXd& data, int k);
Eigen::MatrixXd pca_transform(const PCAModel& model, const Eigen::MatrixXd& data);
RawDataset pca_transform(const PCAModel& model, const RawDataset& data);

/// 28x28 row-major grid -> 16 values by 7x7 block averaging, row-major.
std::vector<double> downsample_image(const std::vector<double>& pixels);
Eigen::MatrixXd downsample_images(const Eigen::MatrixXd& rows);

/// Two unit-variance Gaussian clusters centred at +-separation/2 on axis 0.
/// Class +1 occupies the first `per_class` rows.
RawDataset synthetic_blobs(std::uint64_t seed, int per_class, int dims, double separation);

/// FNV-1a over sizes, feature bit patterns and labels.
std::uint64_t fingerprint(const RawDataset& data);

}  // namespace qfilter
