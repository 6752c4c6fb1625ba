// pipeline.hpp
// Resolves dataset and embedding options into prepared, embeddable data.
// Shared by the CLI commands so a saved model can be rebuilt exactly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qfilter/datasets.hpp"
#include "qfilter/embedding.hpp"

namespace qfilter {

struct DatasetOptions {
    std::string source = "iris";  // iris | blobs | csv:<path>
    int per_class = 20;
    int dims = 2;
    double separation = 3.0;
    std::uint64_t seed = 0;
    std::string test_csv;  // optional held-out file for csv sources
};

struct LoadedData {
    RawDataset train;
    /// Held-out points; may hold a single class (the Iris test point).
    std::optional<RawDataset> test;
};

/// Throws the datasets module's errors (CsvError, ClassBalanceError, ...).
LoadedData load_dataset(const DatasetOptions& options);

/// `amplitude`, `angle`, `pca:<k>` or `auto` (angle for iris, otherwise
/// pca:min(d, 5)).
struct EmbeddingOptions {
    std::string name = "auto";
    int layers = 1;
    bool ring = false;
};

/// Feature preprocessing fitted on training data: optional 28x28 -> 4x4
/// downsampling, then for pca embeddings a PCA projection scaled so every
/// training component lies in [-pi, pi].
struct Preprocessor {
    bool downsample = false;
    std::optional<PCAModel> pca;
    Eigen::VectorXd scale;  // per PCA component

    RawDataset apply(const RawDataset& data) const;
};

struct PreparedPipeline {
    Preprocessor preprocessor;
    EmbeddingSpec spec;
    std::string embedding_name;  // resolved, e.g. "pca:3"
};

PreparedPipeline prepare_pipeline(const RawDataset& train, const std::string& dataset_source,
                                  const EmbeddingOptions& options);

}  // namespace qfilter
