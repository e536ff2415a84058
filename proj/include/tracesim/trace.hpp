#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tracesim {

enum class InstrKind : uint8_t { Alu, Load, Store, CondBranch, Jump, Complex };

const char* to_string(InstrKind k);

// One abstract dynamic instruction. Register values are never modeled;
// only the fields that affect timing are kept.
struct TraceInstr {
  uint64_t pc = 0;
  uint64_t mem_addr = 0;  // valid iff kind in {Load, Store}
  uint64_t target = 0;    // valid iff kind in {CondBranch, Jump}
  InstrKind kind = InstrKind::Alu;
  bool taken = false;          // valid iff CondBranch/Jump; always true for Jump
  uint8_t crack_count = 0;     // valid iff Complex; >= 2
  bool is_call = false;
  bool is_return = false;

  bool operator==(const TraceInstr&) const = default;

  bool has_mem() const { return kind == InstrKind::Load || kind == InstrKind::Store; }
  bool is_control() const { return kind == InstrKind::CondBranch || kind == InstrKind::Jump; }
};

using Trace = std::vector<TraceInstr>;

// Validates field-presence invariants; returns index of first bad record
// or -1 if clean.
long validate_trace(const Trace& t);

enum class WorkloadKind : uint8_t { SingleThread, Multiprogrammed, ForkJoinParallel };

const char* to_string(WorkloadKind k);

struct Workload {
  std::string name;
  WorkloadKind kind = WorkloadKind::SingleThread;
  std::vector<Trace> per_thread_traces;
  // Per-thread sorted barrier positions (ForkJoinParallel only). A barrier at
  // position p means the thread may not proceed past its p-th instruction
  // until every thread has reached its own p'-th marker of the same rank.
  std::vector<std::vector<uint64_t>> sync_points;
  // Per-thread count of pre-window instructions (the begin-marker protocol:
  // a thread halts after committing this many instructions until all threads
  // have done the same; statistics start when the last one arrives).
  std::vector<uint64_t> begin_markers;

  size_t threads() const { return per_thread_traces.size(); }
  bool operator==(const Workload&) const = default;
};

// Address-space tag for slot `slot` of a multiprogrammed workload. Tags live
// in bits [40..47] so tagged spaces can never collide.
uint64_t slot_address_tag(uint32_t slot);

// --- synthetic workload generators (pure functions of their arguments) ---

// Random cacheline-aligned loads over a power-of-two buffer, interleaved
// 3 Alu : 1 Load.
Trace gen_pointer_chase(uint64_t seed, uint64_t buffer_bytes, uint64_t n_instrs);

// Per repetition and element: Load A[i], Load B[i], Store C[i], one Alu.
Trace gen_stream_triad(uint64_t elem_count, uint64_t elem_bytes, uint64_t repetitions);

struct BranchPattern {
  enum class Kind : uint8_t { AlwaysTaken, NeverTaken, Periodic, Random } kind;
  uint32_t period = 0;   // Periodic: not-taken on every period-th occurrence
  double p_taken = 0.0;  // Random
  uint64_t seed = 0;     // Random

  static BranchPattern always_taken() { return {Kind::AlwaysTaken}; }
  static BranchPattern never_taken() { return {Kind::NeverTaken}; }
  static BranchPattern periodic(uint32_t k) { return {Kind::Periodic, k}; }
  static BranchPattern random(double p, uint64_t seed) {
    return {Kind::Random, 0, p, seed};
  }
};

// n conditional branches at a single pc, each followed by 3 Alu of padding.
Trace gen_branch_pattern(const BranchPattern& pattern, uint64_t n);

// All C(|apps|, k) combinations in lexicographic order (apps must be sorted).
std::vector<std::vector<std::string>> enumerate_mixes(
    const std::vector<std::string>& apps, uint32_t k);

enum class ParallelKernel : uint8_t { Independent, SharedReadMostly, BandwidthBound };

struct ForkJoinSpec {
  uint32_t n_threads = 1;
  ParallelKernel kernel = ParallelKernel::Independent;
  double shared_fraction = 0.0;  // SharedReadMostly only
  uint64_t work_per_thread = 0;  // instructions per thread
  uint32_t n_barriers = 0;
  uint64_t seed = 0;
};

Workload gen_fork_join(const ForkJoinSpec& spec);

// --- shipped application stand-ins -------------------------------------
// Six synthetic programs with distinct cache/branch behavior, named after
// the benchmarks they stand in for. Deterministic in (name, n_instrs).

extern const std::vector<std::string> kShippedApps;

bool is_shipped_app(const std::string& name);
Trace make_app_trace(const std::string& name, uint64_t n_instrs);

// Builds a 4-slot multiprogrammed workload from app names; slot i's
// addresses are tagged with slot_address_tag(i).
Workload make_mix_workload(const std::vector<std::string>& apps,
                           uint64_t instrs_per_slot);

// Applies the slot address tag to every address field of a trace.
Trace tag_trace(Trace t, uint64_t tag);

}  // namespace tracesim
