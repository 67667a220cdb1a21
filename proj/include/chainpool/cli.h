#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainpool/engine.h"

namespace chainpool::cli {

/// A probability together with the text it was given as, so output can echo
/// it verbatim.
struct Probability {
  double value;
  std::string text;
};

/// Parses "start:stop:step" into an inclusive grid. Every value must lie in
/// (0, 1]. Throws std::invalid_argument on a malformed or empty grid.
std::vector<Probability> parse_p_grid(const std::string& range);

/// Parses a comma-separated list of probabilities.
std::vector<Probability> parse_p_list(const std::string& list);

/// Formats with 12 significant digits.
std::string format_number(double value);

/// One run, as written to CSV/JSON.
struct OutputRecord {
  std::string gate;
  std::string strategy;
  std::string p_gate;
  int bins = 0;
  std::uint64_t steps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::uint64_t spilled_qubits = 0;
  std::uint64_t ops = 0;
  double rate = 0.0;
};

struct AggregateRecord {
  std::string gate;
  std::string strategy;
  std::string p_gate;
  int bins = 0;
  std::uint64_t steps = 0;
  std::uint64_t replicas = 0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
};

inline constexpr const char* kRecordHeader =
    "gate,strategy,p_gate,bins,steps,burn_in,seed,replica,spilled_qubits,ops,rate";
inline constexpr const char* kAggregateHeader =
    "gate,strategy,p_gate,bins,steps,replicas,mean_rate,stderr";

std::string to_csv(const OutputRecord& record);
std::string to_csv(const AggregateRecord& record);

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainpool::cli
