#pragma once

// State-vector simulation of entanglement-assisted transmission through a
// single rocket instance, and the rocket (x) erasure coherent-information
// experiment built on it.
//
// Registers of the four-party vector, in order:
//   0 alice_ref      Alice's half of the locally prepared pair
//   1 A1             first rocket input / direct-channel output
//   2 A2             second rocket input / complement output
//   3 bob_preshared  receiver's half of the pre-shared pair
// direct:     alice_ref-A1 prepared pair, A2-bob_preshared pre-shared pair
// complement: alice_ref-A2 prepared pair, A1-bob_preshared pre-shared pair

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcap/qmat.hpp"
#include "qcap/unitaries.hpp"

namespace qcap {

enum class Variant { direct, complement };

const char* variant_name(Variant v);
const char* unitary_source_name(UnitarySource s);

using RegisterTrace = std::vector<std::pair<std::string, std::size_t>>;

struct ProtocolRun {
  std::size_t d = 0;
  Variant variant = Variant::direct;
  ComplexMatrix u, v;
  double fidelity = 0.0;
  double correction_norm_error = 0.0;  // | ||psi_after|| - ||psi_before|| |
  RegisterTrace register_trace;
};

ProtocolRun run_rocket_protocol(std::size_t d, const ComplexMatrix& u, const ComplexMatrix& v, Variant variant);

/// Receiver's decoding unitary on (A1, A2, bob_preshared), register order
/// as above, for the given instance.
ComplexMatrix receiver_correction(std::size_t d, const ComplexMatrix& u, const ComplexMatrix& v, Variant variant);

struct ProtocolInput {
  DensityMatrix marginal;    // on A1 A2 A3, dimension d^3
  ComplexVector purification;  // on R A1 A2 A3, R most significant
  RegisterTrace register_trace;
};

/// direct: R-A1 and A2-A3 maximally entangled; complement: R-A2 and A1-A3.
/// A3 is the erasure input.
ProtocolInput protocol_input_state(std::size_t d, Variant variant = Variant::direct);

struct Eq7Report {
  std::size_t d = 0;
  double p = 0.0;
  Variant variant = Variant::direct;
  std::string mode;
  std::size_t n_flags = 0;
  double value_bits = 0.0;
  double target_bits = 0.0;
  double stderr_bits = 0.0;
  std::uint64_t seed = 0;
};

/// Flag-averaged coherent information of rocket (x) erasure(p, d) (or of
/// the complemented rocket) at protocol_input_state(d, variant).
Eq7Report evaluate_eq7(std::size_t d, double p, UnitarySource mode, std::optional<std::size_t> samples,
                       std::uint64_t seed, Variant variant);
Eq7Report evaluate_eq7_pairs(std::size_t d, double p, const std::vector<UnitaryPair>& pairs, Variant variant);

}  // namespace qcap
