#include "chainpool/gates.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>

namespace chainpool {

namespace {

Products make(std::initializer_list<int> values) {
  Products p;
  for (int v : values) p.lengths[p.size++] = v;
  return p;
}

}  // namespace

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kCz: return "cz";
    case GateKind::kKlmCz: return "klm-cz";
    case GateKind::kTypeIFusion: return "fusion-1";
    case GateKind::kTypeIIFusion: return "fusion-2";
    case GateKind::kEo: return "eo";
  }
  throw std::logic_error("unknown gate kind");
}

GateKind parse_gate(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (GateKind kind : kAllGates) {
    if (gate_name(kind) == lower) return kind;
  }
  throw std::invalid_argument("unknown gate '" + std::string(name) +
                              "' (expected cz, klm-cz, fusion-1, fusion-2, eo)");
}

GateModel::GateModel(GateKind kind, double p_gate) : kind_(kind), p_gate_(p_gate) {
  if (!(p_gate > 0.0 && p_gate <= 1.0)) {
    throw std::invalid_argument("gate success probability must lie in (0, 1], got " +
                                std::to_string(p_gate));
  }
}

int Products::sum_positive() const {
  int total = 0;
  for (int l : *this) {
    if (l > 0) total += l;
  }
  return total;
}

bool operator==(const Products& a, const Products& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

Products outcome_rule(GateKind kind, int l1, int l2, bool success) {
  if (l1 < 1 || l2 < 1) {
    throw std::invalid_argument("chain lengths must be positive");
  }
  if (l1 < l2) std::swap(l1, l2);
  switch (kind) {
    case GateKind::kCz:
      return success ? make({l1 + l2}) : make({l1 - 2, l2 - 2});
    case GateKind::kKlmCz:
      return success ? make({l1 + l2}) : make({l1 - 1, l2 - 1});
    case GateKind::kTypeIFusion:
      return success ? make({l1 + l2 - 1}) : make({l1 - 1, l2 - 1});
    case GateKind::kTypeIIFusion:
      return success ? make({l1 + l2 - 2}) : make({l1 - 1, l2 - 1});
    case GateKind::kEo:
      if (l2 == 1) {
        return success ? make({l1 + 1}) : make({l1 - 1, 1, 1});
      }
      return success ? make({l1 + l2 - 1}) : make({l1 - 1, l2 - 1});
  }
  throw std::logic_error("unknown gate kind");
}

int qubits_lost_by(GateKind kind, int l1, int l2, bool success) {
  if (kind == GateKind::kEo && !success && std::min(l1, l2) == 1) {
    return 1;
  }
  return l1 + l2 - outcome_rule(kind, l1, l2, success).sum_positive();
}

}  // namespace chainpool
