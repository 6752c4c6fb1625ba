// pipeline.cpp

#include "qfilter/pipeline.hpp"

#include <cmath>
#include <numbers>

#include "qfilter/errors.hpp"

namespace qfilter {

LoadedData load_dataset(const DatasetOptions& options) {
    LoadedData out;
    if (options.source == "iris") {
        const auto iris = iris_builtin();
        out.train = iris.train;
        RawDataset test;
        test.name = "iris-test";
        test.features.resize(1, static_cast<Eigen::Index>(iris.test_x.size()));
        for (std::size_t j = 0; j < iris.test_x.size(); ++j) test.features(0, static_cast<Eigen::Index>(j)) = iris.test_x[j];
        test.labels = {iris.test_label};
        out.test = std::move(test);
    } else if (options.source == "blobs") {
        out.train = synthetic_blobs(options.seed, options.per_class, options.dims, options.separation);
        // held-out draw from the neighbouring seed
        out.test = synthetic_blobs(options.seed + 1, options.per_class, options.dims, options.separation);
        out.test->name = "blobs-test";
    } else if (options.source.rfind("csv:", 0) == 0) {
        out.train = load_csv(options.source.substr(4));
        if (!options.test_csv.empty()) {
            out.test = load_csv(options.test_csv);
            if (out.test->dims() != out.train.dims()) throw DimError("test CSV differs in feature count");
        }
    } else {
        throw DomainError("unknown dataset '" + options.source + "' (expected iris, blobs or csv:<path>)");
    }
    out.train.validate();
    return out;
}

RawDataset Preprocessor::apply(const RawDataset& data) const {
    RawDataset out = data;
    if (downsample) out.features = downsample_images(out.features);
    if (pca) {
        out.features = pca_transform(*pca, out.features);
        for (Eigen::Index c = 0; c < out.features.cols(); ++c) out.features.col(c) *= scale(c);
    }
    return out;
}

PreparedPipeline prepare_pipeline(const RawDataset& train, const std::string& dataset_source,
                                  const EmbeddingOptions& options) {
    PreparedPipeline p;
    std::string name = options.name;
    const bool images = train.dims() == 784;
    const Eigen::Index d = images ? 16 : train.dims();
    if (name == "auto") name = dataset_source == "iris" ? "angle" : "pca:" + std::to_string(std::min<Eigen::Index>(d, 5));

    if (name == "angle") {
        p.spec = EmbeddingSpec::angle();
    } else if (name == "amplitude") {
        p.preprocessor.downsample = images;
        int n = 0;
        while ((Eigen::Index{1} << n) < d) ++n;
        p.spec = EmbeddingSpec::amplitude(std::max(n, 1));
    } else if (name.rfind("pca:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(name.substr(4));
        } catch (const std::exception&) {
            throw DomainError("bad embedding '" + name + "'");
        }
        p.preprocessor.downsample = images;
        const Eigen::MatrixXd base = images ? downsample_images(train.features) : train.features;
        p.preprocessor.pca = pca_fit(base, k);
        const Eigen::MatrixXd projected = pca_transform(*p.preprocessor.pca, base);
        p.preprocessor.scale.resize(k);
        for (int c = 0; c < k; ++c) {
            const double peak = projected.col(c).cwiseAbs().maxCoeff();
            p.preprocessor.scale(c) = peak > 0 ? std::numbers::pi / peak : 1.0;
        }
        if (options.layers < 0) throw DomainError("embedding layers must be non-negative");
        p.spec = EmbeddingSpec::pca_layer(k, options.layers, options.ring);
    } else {
        throw DomainError("unknown embedding '" + name + "' (expected amplitude, angle or pca:<k>)");
    }
    p.embedding_name = name;
    return p;
}

}  // namespace qfilter
