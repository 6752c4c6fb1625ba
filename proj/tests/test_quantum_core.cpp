#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qfilter/errors.hpp"
#include "qfilter/quantum_core.hpp"

using namespace qfilter;

namespace {

GateSpec gate(GateKind kind, std::vector<int> targets) { return GateSpec{kind, std::move(targets), std::nullopt, 0.0}; }

StateVector plus() {
    CVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return StateVector(v);
}

}  // namespace

TEST(GateMatrix, RxAtZeroIsIdentity) {
    EXPECT_LT((gate_matrix(gate(GateKind::Rx, {0}), 0.0) - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(GateMatrix, RyLoadsCosineAndSine) {
    const double t = 2.0 * std::acos(0.796);
    CVector zero(2);
    zero << 1, 0;
    // direct 2x2 multiplication with the textbook rotation
    const CVector out = oracle::rotation(oracle::pauli_y(), t) * zero;
    const auto psi = apply_gate(StateVector::zeros(1), gate(GateKind::Ry, {0}), t);
    EXPECT_NEAR(psi[0].real(), 0.796, 1e-12);
    EXPECT_NEAR(psi[1].real(), std::sqrt(1 - 0.796 * 0.796), 1e-12);
    EXPECT_NEAR(psi[1].real(), 0.6053, 1e-4);
    EXPECT_LT((psi.amplitudes() - out).norm(), 1e-12);
}

TEST(GateMatrix, Hadamard) {
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    EXPECT_LT((gate_matrix(gate(GateKind::H, {0})) - h).norm(), 1e-15);
}

TEST(GateMatrix, MatchesPauliExponentials) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-4, 4);
    for (int i = 0; i < 20; ++i) {
        const double t = angle(rng);
        EXPECT_LT((gate_matrix(gate(GateKind::Rx, {0}), t) - oracle::rotation(oracle::pauli_x(), t)).norm(), 1e-13);
        EXPECT_LT((gate_matrix(gate(GateKind::Ry, {0}), t) - oracle::rotation(oracle::pauli_y(), t)).norm(), 1e-13);
        EXPECT_LT((gate_matrix(gate(GateKind::Rz, {0}), t) - oracle::rotation(oracle::pauli_z(), t)).norm(), 1e-13);
        const CMatrix zz = oracle::kron(oracle::pauli_z(), oracle::pauli_z());
        EXPECT_LT((gate_matrix(gate(GateKind::ZZ, {0, 1}), t) - oracle::rotation(zz, t)).norm(), 1e-13);
        // CRx = |0><0| (x) I + |1><1| (x) Rx
        CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
        p0(0, 0) = 1;
        p1(1, 1) = 1;
        const CMatrix crx = oracle::kron(p0, CMatrix::Identity(2, 2)) + oracle::kron(p1, oracle::rotation(oracle::pauli_x(), t));
        EXPECT_LT((gate_matrix(gate(GateKind::CRx, {0, 1}), t) - crx).norm(), 1e-13);
    }
}

TEST(GateMatrix, UnknownKindThrows) {
    EXPECT_THROW(gate_matrix(gate(static_cast<GateKind>(99), {0})), UnsupportedGate);
    EXPECT_THROW(gate_kind_from_string("CNOT"), UnsupportedGate);
    EXPECT_EQ(gate_kind_from_string("CSWAP"), GateKind::CSWAP);
}

TEST(GateSpec, ArityChecked) {
    EXPECT_THROW(gate(GateKind::CRx, {0}).validate(), ShapeError);
    EXPECT_THROW(gate(GateKind::ZZ, {1, 1}).validate(), IndexError);
    EXPECT_NO_THROW(gate(GateKind::CSWAP, {0, 1, 2}).validate());
}

TEST(ApplyGate, XFlipsZero) {
    const auto out = apply_gate(StateVector::zeros(1), gate(GateKind::X, {0}));
    EXPECT_NEAR(std::abs(out[1]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(out[0]), 0.0, 1e-15);
}

TEST(ApplyGate, CswapWithControlOffIsIdentity) {
    std::mt19937_64 rng(3);
    const auto a = random_state(rng, 1);
    const auto b = random_state(rng, 1);
    const auto psi = tensor(StateVector::zeros(1), tensor(a, b));
    const auto out = apply_gate(psi, gate(GateKind::CSWAP, {0, 1, 2}));
    EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-15);
}

TEST(ApplyGate, CswapWithControlOnSwaps) {
    std::mt19937_64 rng(4);
    const auto a = random_state(rng, 1);
    const auto b = random_state(rng, 1);
    const auto one = StateVector::basis(1, 1);
    const auto out = apply_gate(tensor(one, tensor(a, b)), gate(GateKind::CSWAP, {0, 1, 2}));
    EXPECT_LT((out.amplitudes() - tensor(one, tensor(b, a)).amplitudes()).norm(), 1e-14);
}

TEST(ApplyGate, RzKeepsBasisProbabilities) {
    for (std::size_t k = 0; k < 2; ++k) {
        const auto out = apply_gate(StateVector::basis(1, k), gate(GateKind::Rz, {0}), 1.234);
        EXPECT_NEAR(std::norm(out[k]), 1.0, 1e-15);
    }
}

TEST(ApplyGate, OutOfRangeTarget) {
    EXPECT_THROW(apply_gate(StateVector::zeros(2), gate(GateKind::X, {2})), IndexError);
}

TEST(ApplyGate, AgreesWithFullRegisterOperator) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(-3, 3);
    const std::vector<std::pair<GateKind, std::vector<int>>> cases{
        {GateKind::Rx, {2}}, {GateKind::Ry, {0}}, {GateKind::ZZ, {3, 1}},
        {GateKind::CRx, {2, 0}}, {GateKind::CSWAP, {3, 0, 2}}, {GateKind::H, {1}}};
    for (const auto& [kind, targets] : cases) {
        const auto psi = random_state(rng, 4);
        const double t = angle(rng);
        const auto g = gate(kind, targets);
        const CVector expect = oracle::embed_operator(gate_matrix(g, t), targets, 4) * psi.amplitudes();
        const auto got = apply_gate(psi, g, t);
        EXPECT_LT((got.amplitudes() - expect).norm(), 1e-13) << to_string(kind);
        EXPECT_NEAR(got.norm(), 1.0, 1e-12);
    }
}

TEST(Tensor, BigEndianOrder) {
    const auto s = tensor(StateVector::basis(1, 0), StateVector::basis(1, 1));
    EXPECT_EQ(s.n_qubits(), 2);
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);  // |01>

    const auto p = tensor(plus(), StateVector::zeros(1));
    EXPECT_NEAR(p[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(p[2].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(p[1]) + std::abs(p[3]), 0.0, 1e-15);
}

TEST(Tensor, NormIsMultiplicative) {
    CVector a(2), b(4);
    a << 1.0, 2.0;
    b << 0.5, Complex(0, 1), -1.0, 0.25;
    const auto t = tensor(StateVector(a), StateVector(b));
    EXPECT_NEAR(t.norm(), a.norm() * b.norm(), 1e-13);
    EXPECT_LT((t.amplitudes() - oracle::kron(a, b)).norm(), 1e-15);
}

TEST(ProjectQubit, Probabilities) {
    EXPECT_NEAR(project_qubit(plus(), 0, 0).probability, 0.5, 1e-15);
    EXPECT_NEAR(project_qubit(StateVector::basis(1, 1), 0, 0).probability, 0.0, 1e-15);
    std::mt19937_64 rng(5);
    const auto psi = random_state(rng, 3);
    for (int q = 0; q < 3; ++q)
        EXPECT_NEAR(project_qubit(psi, q, 0).probability + project_qubit(psi, q, 1).probability, 1.0, 1e-12);
}

TEST(ProjectQubit, BranchIsUnnormalized) {
    const auto p = project_qubit(plus(), 0, 1);
    EXPECT_NEAR(p.branch.norm() * p.branch.norm(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(p.branch[0]), 0.0, 1e-15);
    EXPECT_THROW(project_qubit(plus(), 1, 0), IndexError);
}

TEST(DropZeroQubits, RemovesIdleQubit) {
    std::mt19937_64 rng(8);
    const auto a = random_state(rng, 2);
    const auto full = tensor(tensor(StateVector::basis(1, 1), StateVector::zeros(1)), a);
    const std::vector<int> drop{1};
    const auto reduced = drop_zero_qubits(full, drop);
    EXPECT_LT((reduced.amplitudes() - tensor(StateVector::basis(1, 1), a).amplitudes()).norm(), 1e-15);
    const std::vector<int> bad{0};
    EXPECT_THROW(drop_zero_qubits(full, bad), DomainError);
}

TEST(PureToDensity, Examples) {
    const auto r0 = pure_to_density(StateVector::zeros(1));
    EXPECT_NEAR(r0.matrix()(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(r0.matrix()(1, 1)), 0.0, 1e-15);
    const auto rp = pure_to_density(plus());
    EXPECT_LT((rp.matrix() - CMatrix::Constant(2, 2, 0.5)).norm(), 1e-15);
    EXPECT_NEAR(rp.matrix().trace().real(), 1.0, 1e-15);
    CVector v(2);
    v << 1.0, 1.0;
    EXPECT_THROW(pure_to_density(StateVector(v)), NormError);
}

TEST(Mixture, Examples) {
    const std::vector<DensityMatrix> one{pure_to_density(plus())};
    const std::vector<double> w1{1.0};
    EXPECT_LT((mixture(one, w1).matrix() - one[0].matrix()).norm(), 1e-15);

    const std::vector<DensityMatrix> basis{pure_to_density(StateVector::basis(1, 0)),
                                           pure_to_density(StateVector::basis(1, 1))};
    const std::vector<double> half{0.5, 0.5};
    const auto m = mixture(basis, half);
    EXPECT_LT((m.matrix() - CMatrix::Identity(2, 2) / 2.0).norm(), 1e-15);
    EXPECT_LE(m.purity(), 1.0);
    const std::vector<double> bad{0.5, 0.6};
    EXPECT_THROW(mixture(basis, bad), WeightError);
}

TEST(DensityMatrix, RejectsInvalid) {
    CMatrix m(2, 2);
    m << 0.5, 1.0, 0.0, 0.5;
    EXPECT_THROW(DensityMatrix{m}, HermiticityError);
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 2)}, NormError);
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(3, 3) / 3.0}, DimError);
}

TEST(HsDistance, Examples) {
    const auto r0 = pure_to_density(StateVector::basis(1, 0));
    const auto r1 = pure_to_density(StateVector::basis(1, 1));
    EXPECT_NEAR(hs_distance(r0, r0), 0.0, 1e-15);
    EXPECT_NEAR(hs_distance(r0, r1), 2.0, 1e-15);
    EXPECT_THROW(hs_distance(r0, DensityMatrix::maximally_mixed(2)), DimError);
}

TEST(HsDistance, IrisBaselineClosedForm) {
    // 2x2 arithmetic on (0.796, sqrt(1-0.796^2)) and (0, 1)
    const double a0 = 0.796, a1 = std::sqrt(1 - a0 * a0);
    CMatrix d(2, 2);
    d << a0 * a0, a0 * a1, a0 * a1, a1 * a1 - 1.0;
    const double explicit_value = (d * d).trace().real();
    const double closed = 2.0 * (1.0 - a1 * a1);

    CVector va(2), vb(2);
    va << a0, a1;
    vb << 0, 1;
    const double got = hs_distance(pure_to_density(StateVector(va)), pure_to_density(StateVector(vb)));
    EXPECT_NEAR(got, explicit_value, 1e-14);
    EXPECT_NEAR(got, closed, 1e-14);
    EXPECT_NEAR(got, 1.2672, 1e-4);
}

TEST(Overlap, Examples) {
    const auto r0 = pure_to_density(StateVector::basis(1, 0));
    const auto r1 = pure_to_density(StateVector::basis(1, 1));
    EXPECT_NEAR(overlap(r0, r0), 1.0, 1e-15);
    EXPECT_NEAR(overlap(r0, r1), 0.0, 1e-15);
    EXPECT_NEAR(overlap(DensityMatrix::maximally_mixed(1), DensityMatrix::maximally_mixed(1)), 0.5, 1e-15);
}

TEST(TraceNorm, Examples) {
    EXPECT_NEAR(trace_norm(CMatrix::Zero(2, 2)), 0.0, 1e-15);
    CMatrix x = CMatrix::Zero(2, 2);
    x(0, 0) = 0.5;
    x(1, 1) = -0.5;
    EXPECT_NEAR(trace_norm(x), 1.0, 1e-15);

    // full depolarisation to I/2: Kraus {P_ij / sqrt 2} over Pauli basis
    std::vector<CMatrix> dep{CMatrix::Identity(2, 2) / 2.0, oracle::pauli_x() / 2.0, oracle::pauli_y() / 2.0,
                             oracle::pauli_z() / 2.0};
    EXPECT_NEAR(completeness_residual(dep), 0.0, 1e-15);
    EXPECT_NEAR(trace_norm(apply_channel(dep, x)), 0.0, 1e-15);

    CMatrix nh(2, 2);
    nh << 0, 1, 0, 0;
    EXPECT_THROW(trace_norm(nh), HermiticityError);
}

TEST(TraceNorm, AgreesWithSingularValues) {
    std::mt19937_64 rng(13);
    for (int dim = 2; dim <= 8; ++dim) {
        const CMatrix x = 0.3 * random_density(rng, dim) - 0.7 * random_density(rng, dim);
        EXPECT_NEAR(trace_norm(x), oracle::trace_norm_svd(x), 1e-12);
    }
}

TEST(RandomCptp, SingleKrausIsUnitary) {
    const auto k = random_cptp(42, 4, 1);
    ASSERT_EQ(k.size(), 1u);
    EXPECT_LT(unitarity_residual(k[0]), 1e-12);
}

TEST(RandomCptp, CompleteAndTracePreserving) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int dim = 2 + static_cast<int>(seed % 7);
        const auto k = random_cptp(seed, dim, 1 + static_cast<int>(seed % 4));
        EXPECT_LT(completeness_residual(k), 1e-10);
        const CMatrix out = apply_channel(k, CMatrix::Identity(dim, dim) / static_cast<double>(dim));
        EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
    }
}

TEST(RandomCptp, DeterministicPerSeed) {
    const auto a = random_cptp(7, 3, 2);
    const auto b = random_cptp(7, 3, 2);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}
