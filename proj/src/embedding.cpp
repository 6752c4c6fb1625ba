// embedding.cpp

#include "qfilter/embedding.hpp"

#include <cmath>

#include "qfilter/errors.hpp"

namespace qfilter {

std::string to_string(EmbeddingKind kind) {
    switch (kind) {
        case EmbeddingKind::Amplitude: return "amplitude";
        case EmbeddingKind::Angle: return "angle";
        case EmbeddingKind::PcaLayer: return "pca-layer";
    }
    return "unknown";
}

EmbeddingSpec EmbeddingSpec::amplitude(int n_qubits) {
    EmbeddingSpec s;
    s.kind = EmbeddingKind::Amplitude;
    s.n_qubits = n_qubits;
    s.layers = 0;
    return s;
}

EmbeddingSpec EmbeddingSpec::angle() {
    EmbeddingSpec s;
    s.kind = EmbeddingKind::Angle;
    s.n_qubits = 1;
    s.layers = 0;
    return s;
}

EmbeddingSpec EmbeddingSpec::pca_layer(int n_qubits, int layers, bool ring) {
    EmbeddingSpec s;
    s.kind = EmbeddingKind::PcaLayer;
    s.n_qubits = n_qubits;
    s.layers = layers;
    s.ring = ring;
    s.params.assign(s.expected_param_count(), 0.0);
    return s;
}

std::size_t EmbeddingSpec::entangler_count() const {
    if (n_qubits < 2) return 0;
    if (ring && n_qubits >= 3) return static_cast<std::size_t>(n_qubits);
    return static_cast<std::size_t>(n_qubits - 1);
}

std::size_t EmbeddingSpec::expected_param_count() const {
    if (kind != EmbeddingKind::PcaLayer) return 0;
    return static_cast<std::size_t>(layers) * (static_cast<std::size_t>(n_qubits) + entangler_count());
}

void EmbeddingSpec::validate() const {
    if (n_qubits < 1 || n_qubits > 16) throw DimError("embedding qubit count out of range");
    if (kind == EmbeddingKind::Angle && n_qubits != 1) throw DimError("angle embedding uses one qubit");
    if (kind == EmbeddingKind::PcaLayer && layers < 0) throw ParamShapeError("negative layer count");
    if (params.size() != expected_param_count())
        throw ParamShapeError("embedding expects " + std::to_string(expected_param_count()) +
                              " parameters, got " + std::to_string(params.size()));
}

StateVector amplitude_encode(std::span<const double> x, int n_qubits) {
    if (n_qubits < 0 || n_qubits > 16) throw DimError("amplitude encoding qubit count out of range");
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (x.size() > dim)
        throw DimError("input of dimension " + std::to_string(x.size()) + " exceeds 2^" +
                       std::to_string(n_qubits));
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    if (norm2 == 0.0) throw ZeroVectorError("cannot amplitude-encode a zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < x.size(); ++i) amps(static_cast<Eigen::Index>(i)) = x[i] * inv;
    return StateVector(std::move(amps));
}

StateVector angle_encode(double x0) {
    if (!(std::abs(x0) <= 1.0)) throw DomainError("angle encoding needs |x0| <= 1");
    const GateSpec ry{GateKind::Ry, {0}, std::nullopt, 0.0};
    return apply_gate(StateVector::zeros(1), ry, 2.0 * std::acos(x0));
}

StateVector pca_layer_encode(std::span<const double> x, const EmbeddingSpec& spec) {
    if (spec.kind != EmbeddingKind::PcaLayer) throw DomainError("spec is not a pca-layer embedding");
    spec.validate();
    const int n = spec.n_qubits;
    if (static_cast<int>(x.size()) != n)
        throw ParamShapeError("pca-layer input has " + std::to_string(x.size()) + " features, expected " +
                              std::to_string(n));

    StateVector psi = StateVector::zeros(n);
    for (int q = 0; q < n; ++q)
        psi = apply_gate(std::move(psi), GateSpec{GateKind::Rx, {q}, std::nullopt, 0.0}, x[static_cast<std::size_t>(q)]);

    std::size_t p = 0;
    const std::size_t n_ent = spec.entangler_count();
    for (int layer = 0; layer < spec.layers; ++layer) {
        for (int q = 0; q < n; ++q)
            psi = apply_gate(std::move(psi), GateSpec{GateKind::Ry, {q}, std::nullopt, 0.0}, spec.params[p++]);
        for (std::size_t e = 0; e < n_ent; ++e) {
            const int a = static_cast<int>(e);
            const int b = (a + 1) % n;
            psi = apply_gate(std::move(psi), GateSpec{GateKind::ZZ, {a, b}, std::nullopt, 0.0}, spec.params[p++]);
        }
    }
    return psi.normalized();
}

StateVector embed(std::span<const double> x, const EmbeddingSpec& spec) {
    switch (spec.kind) {
        case EmbeddingKind::Amplitude: return amplitude_encode(x, spec.n_qubits);
        case EmbeddingKind::Angle:
            if (x.empty()) throw DimError("angle encoding needs at least one feature");
            return angle_encode(x[0]);
        case EmbeddingKind::PcaLayer: return pca_layer_encode(x, spec);
    }
    throw DomainError("unknown embedding kind");
}

std::vector<EmbeddedSample> embed_dataset(const RawDataset& data, const EmbeddingSpec& spec) {
    data.validate();
    return embed_points(data, spec);
}

std::vector<EmbeddedSample> embed_points(const RawDataset& data, const EmbeddingSpec& spec) {
    if (static_cast<std::size_t>(data.features.rows()) != data.labels.size())
        throw ShapeError("feature rows and labels differ in count");
    std::vector<EmbeddedSample> out;
    out.reserve(data.size());
    std::vector<double> row(static_cast<std::size_t>(data.dims()));
    for (std::size_t m = 0; m < data.size(); ++m) {
        for (Eigen::Index j = 0; j < data.dims(); ++j)
            row[static_cast<std::size_t>(j)] = data.features(static_cast<Eigen::Index>(m), j);
        out.push_back({embed(row, spec), data.labels[m], m});
    }
    return out;
}

}  // namespace qfilter
