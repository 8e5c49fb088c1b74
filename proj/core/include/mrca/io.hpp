#pragma once

// Text exports. Floats use the shortest decimal form that reads back to the
// same double; lines end in LF; the decimal mark is always '.'.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrca/event_stream.hpp"
#include "mrca/lookdown.hpp"
#include "mrca/mutation.hpp"
#include "mrca/particles.hpp"
#include "mrca/pmf_table.hpp"

namespace mrca::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double x);

/// Opens a file for binary writing, creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);
/// Flushes and checks the stream. Throws IoError.
void finish_output(std::ofstream& out, const std::filesystem::path& path);

void write_events_jsonl(std::ostream& out, std::span<const lookdown::LookdownEvent> events);
/// "t,i,j".
void write_events_csv(std::ostream& out, std::span<const lookdown::LookdownEvent> events);
void write_mrca_csv(std::ostream& out, std::span<const lookdown::MrcaPoint> points);
void write_curve_csv(std::ostream& out, std::span<const lookdown::StepKnot> knots);
void write_observables_csv(std::ostream& out, std::span<const lookdown::MrcaObservables> observables);
void write_trajectory_jsonl(std::ostream& out, std::span<const particles::TransitionEvent> events);
/// "t,kind,k,levels" with the levels joined by ';'.
void write_trajectory_csv(std::ostream& out, std::span<const particles::TransitionEvent> events);
void write_exits_csv(std::ostream& out, std::span<const double> exits);
void write_substitutions_csv(std::ostream& out, std::span<const mutation::SubstitutionEvent> events);

/// "value,weight,tail_bound"; exact weights as num/den, the tail bound on the
/// first row only.
void write_table_csv(std::ostream& out, const PmfTable& table);
nlohmann::json table_to_json(const PmfTable& table);

/// Echo of one CLI run.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  bool seed_from_entropy = false;
  std::string version;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> outputs;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Writes JSON with sorted keys and a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace mrca::io
