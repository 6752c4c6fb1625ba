// embedding.hpp
// Classical-to-quantum encoders producing the embedded sample set.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "qfilter/datasets.hpp"
#include "qfilter/quantum_core.hpp"

namespace qfilter {

enum class EmbeddingKind { Amplitude, Angle, PcaLayer };

std::string to_string(EmbeddingKind kind);

/// Encoder configuration.
///  - Amplitude: x / |x| zero-padded to 2^n_qubits amplitudes.
///  - Angle: Ry(2 acos x0)|0>, one qubit, only the first feature is read.
///  - PcaLayer: Rx(x_i) on qubit i, then `layers` blocks of trainable Ry on
///    every qubit followed by trainable ZZ on neighbouring pairs (a chain,
///    closed into a ring when `ring` is set and n_qubits >= 3).
struct EmbeddingSpec {
    EmbeddingKind kind = EmbeddingKind::Angle;
    int n_qubits = 1;
    std::vector<double> params;
    int layers = 1;
    bool ring = false;

    static EmbeddingSpec amplitude(int n_qubits);
    static EmbeddingSpec angle();
    /// Parameters are initialised to zero.
    static EmbeddingSpec pca_layer(int n_qubits, int layers = 1, bool ring = false);

    std::size_t entangler_count() const;
    std::size_t expected_param_count() const;
    /// Throws ParamShapeError / DimError when inconsistent.
    void validate() const;
};

struct EmbeddedSample {
    StateVector state;
    int label = 1;
    std::size_t source_index = 0;

    DensityMatrix density() const { return pure_to_density(state); }
};

StateVector amplitude_encode(std::span<const double> x, int n_qubits);
StateVector angle_encode(double x0);
StateVector pca_layer_encode(std::span<const double> x, const EmbeddingSpec& spec);

/// Dispatches on spec.kind.
StateVector embed(std::span<const double> x, const EmbeddingSpec& spec);

/// Order-preserving; throws ClassBalanceError unless both classes occur.
std::vector<EmbeddedSample> embed_dataset(const RawDataset& data, const EmbeddingSpec& spec);

/// Same without the class-balance check, for held-out points.
std::vector<EmbeddedSample> embed_points(const RawDataset& data, const EmbeddingSpec& spec);

}  // namespace qfilter
