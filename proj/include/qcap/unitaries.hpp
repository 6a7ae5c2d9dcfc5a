#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "qcap/qmat.hpp"

namespace qcap {

using UnitaryPair = std::pair<ComplexMatrix, ComplexMatrix>;

enum class UnitarySource { clifford, haar };

/// The 24 single-qubit Cliffords modulo global phase, by closure of {H, S}.
/// Each element is phase-fixed so its first nonzero entry (column-major
/// scan) is real positive. Only d = 2 is supported.
std::vector<ComplexMatrix> clifford_group(std::size_t d = 2);

/// Phase-fixed copy: first nonzero entry made real positive.
ComplexMatrix canonical_phase(const ComplexMatrix& u);

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng);

/// Complex Ginibre matrix with unit-variance entries.
ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Local unitary pairs for the rocket channel.
///  clifford: all 576 ordered pairs when `samples` is empty, otherwise
///            `samples` pairs drawn uniformly with replacement;
///  haar:     `samples` pairs (default 200) of independent Haar unitaries.
std::vector<UnitaryPair> unitary_pairs(std::size_t d, UnitarySource source, std::optional<std::size_t> samples,
                                       std::uint64_t seed);

}  // namespace qcap
