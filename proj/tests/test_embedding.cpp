#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qfilter/datasets.hpp"
#include "qfilter/embedding.hpp"
#include "qfilter/errors.hpp"

using namespace qfilter;

TEST(AmplitudeEncode, Examples) {
    const std::vector<double> e0{1.0, 0.0};
    const auto s0 = amplitude_encode(e0, 1);
    EXPECT_NEAR(s0[0].real(), 1.0, 1e-15);

    const std::vector<double> iris{0.796, 0.607};
    const double norm = std::sqrt(0.796 * 0.796 + 0.607 * 0.607);
    const auto s1 = amplitude_encode(iris, 1);
    EXPECT_NEAR(s1[0].real(), 0.796 / norm, 1e-15);
    EXPECT_NEAR(s1[1].real(), 0.607 / norm, 1e-15);
    // norm is 1.001036; the four-digit values quoted for this point drift by ~2e-4
    EXPECT_NEAR(s1[0].real(), 0.7953, 5e-4);
    EXPECT_NEAR(s1[1].real(), 0.6062, 5e-4);

    const std::vector<double> pyth{3.0, 4.0};
    const auto s2 = amplitude_encode(pyth, 2);
    ASSERT_EQ(s2.dim(), 4u);
    EXPECT_NEAR(s2[0].real(), 0.6, 1e-15);
    EXPECT_NEAR(s2[1].real(), 0.8, 1e-15);
    EXPECT_EQ(s2[2], Complex(0));
    EXPECT_EQ(s2[3], Complex(0));
}

TEST(AmplitudeEncode, Errors) {
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_THROW(amplitude_encode(zero, 1), ZeroVectorError);
    const std::vector<double> wide{1, 2, 3};
    EXPECT_THROW(amplitude_encode(wide, 1), DimError);
}

TEST(AngleEncode, Examples) {
    const auto b = angle_encode(0.0);
    EXPECT_NEAR(b[0].real(), 0.0, 1e-15);
    EXPECT_NEAR(b[1].real(), 1.0, 1e-15);

    const auto a = angle_encode(0.796);
    EXPECT_NEAR(a[0].real(), 0.796, 1e-12);
    EXPECT_NEAR(a[1].real(), std::sqrt(1 - 0.796 * 0.796), 1e-12);
    EXPECT_NEAR(a[1].real(), 0.6053, 1e-4);

    const auto one = angle_encode(1.0);
    EXPECT_NEAR(one[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(one[1]), 0.0, 1e-15);

    EXPECT_THROW(angle_encode(1.0001), DomainError);
    EXPECT_THROW(angle_encode(std::nan("")), DomainError);
}

TEST(PcaLayerEncode, ZeroInputIsGroundState) {
    auto spec = EmbeddingSpec::pca_layer(3, 2);
    const std::vector<double> x(3, 0.0);
    const auto s = pca_layer_encode(x, spec);
    EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-15);
}

TEST(PcaLayerEncode, SingleQubitRxPi) {
    auto spec = EmbeddingSpec::pca_layer(1, 1);
    ASSERT_EQ(spec.params.size(), 1u);
    const std::vector<double> x{std::numbers::pi};
    const auto s = pca_layer_encode(x, spec);
    // Rx(pi)|0> = -i|1>
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
    EXPECT_NEAR(s[1].real(), 0.0, 1e-15);
    EXPECT_NEAR(s[1].imag(), -1.0, 1e-15);
}

TEST(PcaLayerEncode, MatchesExplicitOperatorProduct) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3, 3);
    auto spec = EmbeddingSpec::pca_layer(3, 2);
    for (double& p : spec.params) p = u(rng);
    const std::vector<double> x{u(rng), u(rng), u(rng)};

    CVector psi = CVector::Zero(8);
    psi(0) = 1;
    for (int q = 0; q < 3; ++q) psi = oracle::embed_operator(oracle::rotation(oracle::pauli_x(), x[q]), {q}, 3) * psi;
    const CMatrix zz = oracle::kron(oracle::pauli_z(), oracle::pauli_z());
    std::size_t p = 0;
    for (int layer = 0; layer < 2; ++layer) {
        for (int q = 0; q < 3; ++q)
            psi = oracle::embed_operator(oracle::rotation(oracle::pauli_y(), spec.params[p++]), {q}, 3) * psi;
        for (int q = 0; q + 1 < 3; ++q)
            psi = oracle::embed_operator(oracle::rotation(zz, spec.params[p++]), {q, q + 1}, 3) * psi;
    }
    EXPECT_LT((pca_layer_encode(x, spec).amplitudes() - psi).norm(), 1e-13);
}

TEST(PcaLayerEncode, ParameterCounts) {
    EXPECT_EQ(EmbeddingSpec::pca_layer(5, 1).params.size(), 9u);
    EXPECT_EQ(EmbeddingSpec::pca_layer(5, 2).params.size(), 18u);
    EXPECT_EQ(EmbeddingSpec::pca_layer(5, 1, true).params.size(), 10u);
    EXPECT_EQ(EmbeddingSpec::pca_layer(2, 1, true).params.size(), 3u);  // no ring on two qubits
}

TEST(PcaLayerEncode, ShapeErrors) {
    auto spec = EmbeddingSpec::pca_layer(2, 1);
    const std::vector<double> x3{0, 0, 0};
    EXPECT_THROW(pca_layer_encode(x3, spec), ParamShapeError);
    spec.params.pop_back();
    const std::vector<double> x2{0, 0};
    EXPECT_THROW(pca_layer_encode(x2, spec), ParamShapeError);
}

TEST(EmbedDataset, IrisGivesTwoSingleQubitStates) {
    const auto iris = iris_builtin();
    const auto samples = embed_dataset(iris.train, EmbeddingSpec::angle());
    ASSERT_EQ(samples.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(samples[i].state.n_qubits(), 1);
        EXPECT_EQ(samples[i].source_index, i);
        EXPECT_EQ(samples[i].label, iris.train.labels[i]);
    }
}

TEST(EmbedDataset, EmptyOrSingleClassRejected) {
    RawDataset empty;
    empty.features.resize(0, 2);
    EXPECT_THROW(embed_dataset(empty, EmbeddingSpec::angle()), ClassBalanceError);

    RawDataset one;
    one.features = Eigen::MatrixXd::Zero(2, 2);
    one.labels = {1, 1};
    EXPECT_THROW(embed_dataset(one, EmbeddingSpec::angle()), ClassBalanceError);
}

TEST(EmbedDataset, SourceIndicesInOrder) {
    const auto data = synthetic_blobs(3, 4, 3, 2.0);
    const auto samples = embed_dataset(data, EmbeddingSpec::amplitude(2));
    ASSERT_EQ(samples.size(), data.size());
    for (std::size_t i = 0; i < samples.size(); ++i) EXPECT_EQ(samples[i].source_index, i);
}
