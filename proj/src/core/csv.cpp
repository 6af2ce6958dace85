#include "core/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/error.hpp"

namespace graphlb {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "number formatting failed");
  return std::string(buf.data(), ptr);
}

namespace {

void append_q(std::string& out, std::uint64_t count, std::size_t n) {
  out += ',';
  out += format_number(static_cast<double>(count) / static_cast<double>(n));
}

std::string header(std::string_view prefix, std::size_t levels) {
  std::string h;
  for (std::size_t i = 1; i <= levels; ++i) {
    h += ',';
    h += prefix;
    h += std::to_string(i);
  }
  return h;
}

std::size_t group_levels(const Trace& t) {
  std::size_t best = 0;
  for (const auto& row : t.group_occupancy) best = std::max(best, row.size());
  return best;
}

void append_trace_row(std::string& out, const Trace& t, std::size_t s, std::size_t levels,
                      std::size_t glevels) {
  out += format_number(t.times[s]);
  for (std::size_t i = 1; i <= levels; ++i) append_q(out, t.count(s, i), t.n_servers);
  out += ',' + std::to_string(t.arrivals[s]);
  out += ',' + std::to_string(t.departures[s]);
  out += ',' + std::to_string(t.discards[s]);
  if (!t.group_occupancy.empty()) {
    for (std::size_t i = 1; i <= glevels; ++i) append_q(out, t.group_count(s, i), t.n_servers);
  }
}

std::string trace_header(const Trace& t, std::size_t levels, std::size_t glevels) {
  std::string h = "t" + header("q", levels) + ",arrivals,departures,discards";
  if (!t.group_occupancy.empty()) h += header("group_q", glevels);
  return h;
}

}  // namespace

std::string trace_to_csv(const Trace& trace) {
  const std::size_t levels = std::max<std::size_t>(trace.levels(), 1);
  const std::size_t glevels = std::max<std::size_t>(group_levels(trace), 1);
  std::string out = trace_header(trace, levels, glevels) + "\n";
  for (std::size_t s = 0; s < trace.samples(); ++s) {
    append_trace_row(out, trace, s, levels, glevels);
    out += '\n';
  }
  return out;
}

std::string coupled_to_csv(const CoupledTrace& c) {
  const Trace& g = c.graph_system;
  const Trace& h = c.hybrid_system;
  const std::size_t levels = std::max<std::size_t>(g.levels(), 1);
  const std::size_t glevels = std::max<std::size_t>(group_levels(g), 1);
  const std::size_t hlevels = std::max<std::size_t>(h.levels(), 1);
  std::string out = trace_header(g, levels, glevels) + ",delta,bound_gap" + header("iq", hlevels) + "\n";
  for (std::size_t s = 0; s < g.samples(); ++s) {
    append_trace_row(out, g, s, levels, glevels);
    out += ',' + std::to_string(c.delta[s]);
    out += ',' + std::to_string(c.bound_gap[s]);
    for (std::size_t i = 1; i <= hlevels; ++i) append_q(out, h.count(s, i), h.n_servers);
    out += '\n';
  }
  return out;
}

std::string fluid_to_csv(const FluidTrajectory& trajectory) {
  const std::size_t levels = trajectory.states.empty() ? 0 : trajectory.states[0].size();
  std::string out = "t" + header("q", levels) + "\n";
  for (std::size_t s = 0; s < trajectory.times.size(); ++s) {
    out += format_number(trajectory.times[s]);
    for (double v : trajectory.states[s]) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

std::string diffusion_to_csv(const DiffusionSeries& series) {
  const std::size_t levels = series.scaled.empty() ? 0 : series.scaled[0].size();
  std::string out = "t" + header("Qbar", levels) + "\n";
  for (std::size_t s = 0; s < series.times.size(); ++s) {
    out += format_number(series.times[s]);
    for (double v : series.scaled[s]) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

Trace trace_from_csv(std::string_view text, std::size_t n) {
  require(n >= 1, "N must be positive");
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, "empty trace file");
  std::vector<std::string> columns;
  {
    std::stringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (!col.empty() && col.back() == '\r') col.pop_back();
      columns.push_back(col);
    }
  }
  if (columns.empty() || columns[0] != "t") fail(ErrorCode::kParse, "trace header must start with t");
  std::vector<std::size_t> q_columns;
  for (std::size_t i = 1; i < columns.size(); ++i) {
    if (columns[i] == "q" + std::to_string(q_columns.size() + 1)) q_columns.push_back(i);
  }
  if (q_columns.empty()) fail(ErrorCode::kParse, "trace has no q columns");

  Trace trace;
  trace.n_servers = n;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + end, v);
      if (ec != std::errc() || ptr != line.data() + end) {
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": bad number");
      }
      values.push_back(v);
      start = end + 1;
    }
    if (values.size() != columns.size()) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": wrong column count");
    }
    trace.times.push_back(values[0]);
    std::vector<std::uint64_t> row;
    for (std::size_t c : q_columns) {
      row.push_back(static_cast<std::uint64_t>(std::llround(values[c] * static_cast<double>(n))));
    }
    while (!row.empty() && row.back() == 0) row.pop_back();
    trace.occupancy.push_back(std::move(row));
  }
  return trace;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace graphlb
