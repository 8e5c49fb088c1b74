#include "mrca/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace mrca::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
  out.close();
}

void write_events_jsonl(std::ostream& out, std::span<const lookdown::LookdownEvent> events) {
  for (const auto& e : events) {
    out << "{\"t\":" << format_double(e.time) << ",\"i\":" << e.src << ",\"j\":" << e.dst << "}\n";
  }
}

void write_events_csv(std::ostream& out, std::span<const lookdown::LookdownEvent> events) {
  out << "t,i,j\n";
  for (const auto& e : events) out << format_double(e.time) << ',' << e.src << ',' << e.dst << '\n';
}

void write_mrca_csv(std::ostream& out, std::span<const lookdown::MrcaPoint> points) {
  out << "E,B\n";
  for (const auto& p : points) out << format_double(p.E) << ',' << format_double(p.B) << '\n';
}

void write_curve_csv(std::ostream& out, std::span<const lookdown::StepKnot> knots) {
  out << "time,level\n";
  for (const auto& k : knots) out << format_double(k.time) << ',' << k.level << '\n';
}

void write_observables_csv(std::ostream& out, std::span<const lookdown::MrcaObservables> observables) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << "time,A,L,I,Z,B_next,E_next,stationarity_warning\n";
  for (const auto& o : observables) {
    out << format_double(o.time) << ',' << opt(o.A) << ',' << o.L << ',' << o.I.to_string() << ',' << o.Z << ','
        << opt(o.B_next) << ',' << opt(o.E_next) << ',' << (o.stationarity_warning ? 1 : 0) << '\n';
  }
}

void write_trajectory_jsonl(std::ostream& out, std::span<const particles::TransitionEvent> events) {
  for (const auto& e : events) {
    out << "{\"t\":" << format_double(e.time) << ",\"kind\":\"" << particles::to_string(e.kind) << "\",\"k\":";
    if (e.k) {
      out << *e.k;
    } else {
      out << "null";
    }
    out << ",\"levels\":[";
    for (std::size_t i = 0; i < e.after.levels.size(); ++i) {
      if (i) out << ',';
      out << e.after.levels[i];
    }
    out << "]}\n";
  }
}

void write_trajectory_csv(std::ostream& out, std::span<const particles::TransitionEvent> events) {
  out << "t,kind,k,levels\n";
  for (const auto& e : events) {
    out << format_double(e.time) << ',' << particles::to_string(e.kind) << ',';
    if (e.k) out << *e.k;
    out << ',';
    for (std::size_t i = 0; i < e.after.levels.size(); ++i) {
      if (i) out << ';';
      out << e.after.levels[i];
    }
    out << '\n';
  }
}

void write_exits_csv(std::ostream& out, std::span<const double> exits) {
  out << "E\n";
  for (double e : exits) out << format_double(e) << '\n';
}

void write_substitutions_csv(std::ostream& out, std::span<const mutation::SubstitutionEvent> events) {
  out << "E,S\n";
  for (const auto& e : events) out << format_double(e.E) << ',' << e.S << '\n';
}

void write_table_csv(std::ostream& out, const PmfTable& table) {
  out << "value,weight,tail_bound\n";
  bool first = true;
  for (const auto& e : table.entries) {
    out << e.value.to_string() << ',' << (e.exact ? to_string(*e.exact) : format_double(e.weight)) << ',';
    if (first) out << format_double(table.tail_bound);
    out << '\n';
    first = false;
  }
}

nlohmann::json table_to_json(const PmfTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : table.entries) {
    nlohmann::json row;
    if (e.value.is_infinite()) {
      row["value"] = "inf";
    } else {
      row["value"] = e.value.value();
    }
    row["weight"] = e.weight;
    if (e.exact) row["exact"] = to_string(*e.exact);
    rows.push_back(row);
  }
  return {{"rows", rows}, {"tail_bound", table.tail_bound}};
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},
          {"config", config},
          {"seed", seed},
          {"seed_from_entropy", seed_from_entropy},
          {"version", version},
          {"wall_clock_seconds", wall_clock_seconds},
          {"outputs", outputs}};
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& value) {
  auto out = open_output(path);
  out << value.dump(2) << '\n';
  finish_output(out, path);
}

}  // namespace mrca::io
