#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace chainpool {

enum class GateKind { kCz, kKlmCz, kTypeIFusion, kTypeIIFusion, kEo };

inline constexpr std::array<GateKind, 5> kAllGates = {
    GateKind::kCz, GateKind::kKlmCz, GateKind::kTypeIFusion, GateKind::kTypeIIFusion,
    GateKind::kEo};

/// CLI name: cz, klm-cz, fusion-1, fusion-2, eo.
std::string_view gate_name(GateKind kind);
/// Case-insensitive inverse of gate_name. Throws std::invalid_argument.
GateKind parse_gate(std::string_view name);

/// A bonding gate with its per-attempt success probability.
///
/// For the EO gate the photonic success probability is eta^2 / 2, so 1/2 is
/// its physical ceiling; the model still accepts any p in (0, 1].
class GateModel {
 public:
  GateModel(GateKind kind, double p_gate);

  GateKind kind() const { return kind_; }
  double p_gate() const { return p_gate_; }
  bool exceeds_physical_limit() const { return kind_ == GateKind::kEo && p_gate_ > 0.5; }

 private:
  GateKind kind_;
  double p_gate_;
};

/// Chain lengths produced by one bond, before the pool clamps them. At most
/// three entries (EO failure against a single qubit).
struct Products {
  std::array<int, 3> lengths{};
  std::size_t size = 0;

  const int* begin() const { return lengths.data(); }
  const int* end() const { return lengths.data() + size; }
  int sum_positive() const;
  friend bool operator==(const Products& a, const Products& b);
};

/// Resulting chain lengths for bonding chains l1 and l2 (operands are
/// reordered so l1 >= l2 first):
///
///   gate       success      failure
///   CZ         l1+l2        l1-2, l2-2
///   KLM CZ     l1+l2        l1-1, l2-1
///   fusion-1   l1+l2-1      l1-1, l2-1
///   fusion-2   l1+l2-2      l1-1, l2-1
///   EO, l2=1   l1+1         l1-1, 1, 1
///   EO, l2>1   l1+l2-1      l1-1, l2-1
///
/// The EO success cherry is assumed already removed. Non-positive entries are
/// kept.
Products outcome_rule(GateKind kind, int l1, int l2, bool success);

/// Qubits removed by measurement during the bond. EO failure against a single
/// loses exactly the measured chain-end qubit; the two free qubits return to
/// the resource.
int qubits_lost_by(GateKind kind, int l1, int l2, bool success);

}  // namespace chainpool
