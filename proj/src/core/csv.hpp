#pragma once

#include <string>
#include <string_view>

#include "core/coupling.hpp"
#include "core/fluid.hpp"
#include "core/simulation.hpp"

namespace graphlb {

// Shortest round-trip decimal form; locale independent.
std::string format_number(double x);

// Columns: t, q1..qK, arrivals, departures, discards, and group_q1..group_qK
// (fractions of N) when the run tracked a group.
std::string trace_to_csv(const Trace& trace);

// Graph-system columns as in trace_to_csv followed by delta, bound_gap and
// the hybrid system's occupancy iq1..iqK.
std::string coupled_to_csv(const CoupledTrace& trace);

// Columns: t, q1..qK.
std::string fluid_to_csv(const FluidTrajectory& trajectory);

// Columns: t, Qbar1..QbarK.
std::string diffusion_to_csv(const DiffusionSeries& series);

// Reads the t and q columns of a trace CSV, recovering counts as round(q N).
Trace trace_from_csv(std::string_view text, std::size_t n);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace graphlb
