#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chainpool {

/// Counts of linear chains by length. Length 1 (single qubits) is an
/// inexhaustible source and is never stored; bins 2..max_len are explicit.
/// Chains longer than max_len leave the pool as complete and are tallied in
/// spilled_qubits.
///
/// Accounting identity, exact after every bond:
///   spilled_qubits + qubits_lost + resident_qubits() == singles_drawn
class PopulationVector {
 public:
  explicit PopulationVector(int max_len);

  /// Pool with the given counts for lengths 2..max_len (counts.size() must be
  /// max_len - 1). Accounting starts at spilled = lost = 0 and
  /// singles_drawn = resident qubits, so the identity holds.
  static PopulationVector from_counts(int max_len, std::span<const std::uint64_t> counts);

  int max_len() const { return max_len_; }

  /// Number of chains of length l. Length 1 reports 0 (the infinite bin is
  /// not counted); lengths outside 1..max_len are an error.
  std::uint64_t count(int l) const;

  /// Counts for lengths 2..max_len, index 0 holding length 2.
  std::span<const std::uint64_t> counts() const { return counts_; }

  std::uint64_t spilled_qubits() const { return spilled_qubits_; }
  std::uint64_t singles_drawn() const { return singles_drawn_; }
  std::uint64_t qubits_lost() const { return qubits_lost_; }

  /// Qubits currently held in bins 2..max_len.
  std::uint64_t resident_qubits() const;
  /// Number of chains currently held in bins 2..max_len.
  std::uint64_t resident_chains() const;

  /// Removes one chain of length l. l == 1 draws from the infinite bin.
  /// Throws std::logic_error when bin l is empty.
  void take_chain(int l);

  /// Places a gate product back into the pool:
  ///   l <= 0            no-op (the chain was destroyed)
  ///   l == 1            the single rejoins the resource; singles_drawn -= 1
  ///   2 <= l <= max_len counts[l] += 1
  ///   l > max_len       spilled_qubits += l
  void insert_chain(int l);

  /// Books qubits removed by measurement.
  void record_loss(std::uint64_t qubits) { qubits_lost_ += qubits; }

  /// Ascending lengths with at least one chain; 1 is always listed first.
  std::vector<int> occupied_lengths() const;

  /// Largest l in 2..max_len with count(l) >= min_count, or 0 if none.
  int largest_with_at_least(std::uint64_t min_count) const;
  /// Smallest l in 2..max_len with count(l) >= min_count, or 0 if none.
  int smallest_with_at_least(std::uint64_t min_count) const;

  /// True when the accounting identity holds.
  bool conserves() const;

  friend bool operator==(const PopulationVector&, const PopulationVector&) = default;

 private:
  int max_len_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t spilled_qubits_ = 0;
  std::uint64_t singles_drawn_ = 0;
  std::uint64_t qubits_lost_ = 0;
};

}  // namespace chainpool
