#pragma once

#include <iosfwd>
#include <string>

#include "tracesim/trace.hpp"

namespace tracesim {

// Line-oriented trace file format, one record per instruction. Paths ending
// in .gz are compressed transparently. See README for the exact grammar.
void write_workload(const Workload& w, const std::string& path);
Workload read_workload(const std::string& path);

void write_workload(const Workload& w, std::ostream& os);
Workload read_workload(std::istream& is);

}  // namespace tracesim
