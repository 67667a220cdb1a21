#include "chainpool/pool.h"

#include <stdexcept>
#include <string>

namespace chainpool {

PopulationVector::PopulationVector(int max_len) : max_len_(max_len) {
  if (max_len < 2) {
    throw std::invalid_argument("population vector needs max_len >= 2, got " +
                                std::to_string(max_len));
  }
  counts_.assign(static_cast<std::size_t>(max_len - 1), 0);
}

PopulationVector PopulationVector::from_counts(int max_len,
                                               std::span<const std::uint64_t> counts) {
  PopulationVector pool(max_len);
  if (counts.size() != pool.counts_.size()) {
    throw std::invalid_argument("expected " + std::to_string(pool.counts_.size()) +
                                " bin counts, got " + std::to_string(counts.size()));
  }
  pool.counts_.assign(counts.begin(), counts.end());
  pool.singles_drawn_ = pool.resident_qubits();
  return pool;
}

std::uint64_t PopulationVector::count(int l) const {
  if (l < 1 || l > max_len_) {
    throw std::out_of_range("length " + std::to_string(l) + " outside 1.." +
                            std::to_string(max_len_));
  }
  return l == 1 ? 0 : counts_[static_cast<std::size_t>(l - 2)];
}

std::uint64_t PopulationVector::resident_qubits() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    total += counts_[i] * (i + 2);
  }
  return total;
}

std::uint64_t PopulationVector::resident_chains() const {
  std::uint64_t total = 0;
  for (auto c : counts_) total += c;
  return total;
}

void PopulationVector::take_chain(int l) {
  if (l == 1) {
    ++singles_drawn_;
    return;
  }
  if (l < 1 || l > max_len_) {
    throw std::logic_error("cannot take a chain of length " + std::to_string(l));
  }
  auto& bin = counts_[static_cast<std::size_t>(l - 2)];
  if (bin == 0) {
    throw std::logic_error("bin " + std::to_string(l) + " is empty");
  }
  --bin;
}

void PopulationVector::insert_chain(int l) {
  if (l <= 0) return;
  if (l == 1) {
    if (singles_drawn_ == 0) {
      throw std::logic_error("returned a single that was never drawn");
    }
    --singles_drawn_;
    return;
  }
  if (l > max_len_) {
    spilled_qubits_ += static_cast<std::uint64_t>(l);
    return;
  }
  ++counts_[static_cast<std::size_t>(l - 2)];
}

std::vector<int> PopulationVector::occupied_lengths() const {
  std::vector<int> lengths{1};
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > 0) lengths.push_back(static_cast<int>(i) + 2);
  }
  return lengths;
}

int PopulationVector::largest_with_at_least(std::uint64_t min_count) const {
  for (std::size_t i = counts_.size(); i-- > 0;) {
    if (counts_[i] >= min_count) return static_cast<int>(i) + 2;
  }
  return 0;
}

int PopulationVector::smallest_with_at_least(std::uint64_t min_count) const {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] >= min_count) return static_cast<int>(i) + 2;
  }
  return 0;
}

bool PopulationVector::conserves() const {
  return spilled_qubits_ + qubits_lost_ + resident_qubits() == singles_drawn_;
}

}  // namespace chainpool
