#include "tracesim/trace.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "tracesim/rng.hpp"

namespace tracesim {

namespace {

constexpr uint64_t kLineBytes = 64;
constexpr uint64_t kCodeBase = 0x0040'0000ull;
constexpr uint64_t kDataBase = 0x1000'0000ull;

// Generators emit pcs that loop over a small code region so instruction
// fetch behaves like a real program loop instead of a linear sweep of
// never-reused lines.
struct PcLoop {
  uint64_t base;
  uint64_t n_slots;
  uint64_t i = 0;
  uint64_t next() {
    uint64_t pc = base + (i % n_slots) * 4;
    ++i;
    return pc;
  }
};

TraceInstr alu(uint64_t pc) {
  TraceInstr in;
  in.kind = InstrKind::Alu;
  in.pc = pc;
  return in;
}

TraceInstr load(uint64_t pc, uint64_t addr) {
  TraceInstr in;
  in.kind = InstrKind::Load;
  in.pc = pc;
  in.mem_addr = addr;
  return in;
}

TraceInstr store(uint64_t pc, uint64_t addr) {
  TraceInstr in;
  in.kind = InstrKind::Store;
  in.pc = pc;
  in.mem_addr = addr;
  return in;
}

TraceInstr cond_branch(uint64_t pc, bool taken, uint64_t target) {
  TraceInstr in;
  in.kind = InstrKind::CondBranch;
  in.pc = pc;
  in.taken = taken;
  in.target = target;
  return in;
}

}  // namespace

const char* to_string(InstrKind k) {
  switch (k) {
    case InstrKind::Alu: return "alu";
    case InstrKind::Load: return "load";
    case InstrKind::Store: return "store";
    case InstrKind::CondBranch: return "cbr";
    case InstrKind::Jump: return "jmp";
    case InstrKind::Complex: return "cplx";
  }
  return "?";
}

const char* to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::SingleThread: return "single";
    case WorkloadKind::Multiprogrammed: return "multi";
    case WorkloadKind::ForkJoinParallel: return "forkjoin";
  }
  return "?";
}

long validate_trace(const Trace& t) {
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceInstr& in = t[i];
    const bool has_mem = in.mem_addr != 0 || in.has_mem();
    switch (in.kind) {
      case InstrKind::Load:
      case InstrKind::Store:
        break;  // mem_addr may legitimately be any value including 0
      case InstrKind::CondBranch:
        if (in.crack_count != 0) return static_cast<long>(i);
        break;
      case InstrKind::Jump:
        if (!in.taken || in.crack_count != 0) return static_cast<long>(i);
        break;
      case InstrKind::Complex:
        if (in.crack_count < 2) return static_cast<long>(i);
        break;
      case InstrKind::Alu:
        if (in.crack_count != 0) return static_cast<long>(i);
        break;
    }
    (void)has_mem;
  }
  return -1;
}

uint64_t slot_address_tag(uint32_t slot) {
  return (static_cast<uint64_t>(slot) + 1) << 40;
}

Trace gen_pointer_chase(uint64_t seed, uint64_t buffer_bytes, uint64_t n_instrs) {
  if (buffer_bytes < kLineBytes)
    throw std::invalid_argument("pointer_chase: buffer smaller than a cache line");
  if (!std::has_single_bit(buffer_bytes))
    throw std::invalid_argument("pointer_chase: buffer_bytes must be a power of two");
  if (n_instrs == 0)
    throw std::invalid_argument("pointer_chase: n_instrs must be positive");

  SplitMix64 rng(seed);
  const uint64_t n_lines = buffer_bytes / kLineBytes;
  PcLoop pcs{kCodeBase, 1024};
  Trace t;
  t.reserve(n_instrs);
  while (t.size() < n_instrs) {
    t.push_back(load(pcs.next(), kDataBase + rng.next_below(n_lines) * kLineBytes));
    for (int j = 0; j < 3 && t.size() < n_instrs; ++j)
      t.push_back(alu(pcs.next()));
  }
  return t;
}

Trace gen_stream_triad(uint64_t elem_count, uint64_t elem_bytes, uint64_t repetitions) {
  if (elem_count == 0)
    throw std::invalid_argument("stream_triad: elem_count must be positive");

  const uint64_t array_bytes = elem_count * elem_bytes;
  const uint64_t stride = ((array_bytes + 0xfffff) / 0x100000 + 1) * 0x100000;
  const uint64_t a = kDataBase, b = kDataBase + stride, c = kDataBase + 2 * stride;

  PcLoop pcs{kCodeBase, 64};
  Trace t;
  t.reserve(4 * elem_count * repetitions);
  for (uint64_t rep = 0; rep < repetitions; ++rep) {
    pcs.i = 0;  // each repetition restarts the kernel loop
    for (uint64_t i = 0; i < elem_count; ++i) {
      const uint64_t off = i * elem_bytes;
      t.push_back(load(pcs.next(), a + off));
      t.push_back(load(pcs.next(), b + off));
      t.push_back(alu(pcs.next()));
      t.push_back(store(pcs.next(), c + off));
    }
  }
  return t;
}

Trace gen_branch_pattern(const BranchPattern& pattern, uint64_t n) {
  if (pattern.kind == BranchPattern::Kind::Periodic && pattern.period < 2)
    throw std::invalid_argument("branch_pattern: period must be >= 2");
  if (pattern.kind == BranchPattern::Kind::Random &&
      (pattern.p_taken < 0.0 || pattern.p_taken > 1.0))
    throw std::invalid_argument("branch_pattern: p_taken must be in [0,1]");

  const uint64_t branch_pc = kCodeBase;
  const uint64_t taken_block = kCodeBase + 64;
  SplitMix64 rng(pattern.seed);

  Trace t;
  t.reserve(4 * n);
  for (uint64_t i = 0; i < n; ++i) {
    bool taken = false;
    switch (pattern.kind) {
      case BranchPattern::Kind::AlwaysTaken: taken = true; break;
      case BranchPattern::Kind::NeverTaken: taken = false; break;
      case BranchPattern::Kind::Periodic:
        taken = ((i + 1) % pattern.period) != 0;
        break;
      case BranchPattern::Kind::Random:
        taken = rng.next_bool(pattern.p_taken);
        break;
    }
    t.push_back(cond_branch(branch_pc, taken, taken_block));
    const uint64_t block = taken ? taken_block : branch_pc + 4;
    for (int j = 0; j < 3; ++j) t.push_back(alu(block + 4 * j));
  }
  return t;
}

std::vector<std::vector<std::string>> enumerate_mixes(
    const std::vector<std::string>& apps, uint32_t k) {
  if (k > apps.size())
    throw std::invalid_argument("enumerate_mixes: k exceeds app count");
  if (!std::is_sorted(apps.begin(), apps.end()))
    throw std::invalid_argument("enumerate_mixes: apps must be sorted");

  std::vector<std::vector<std::string>> mixes;
  std::vector<uint32_t> idx(k);
  for (uint32_t i = 0; i < k; ++i) idx[i] = i;
  const uint32_t n = static_cast<uint32_t>(apps.size());
  while (true) {
    std::vector<std::string> mix;
    mix.reserve(k);
    for (uint32_t i : idx) mix.push_back(apps[i]);
    mixes.push_back(std::move(mix));
    // advance the combination
    int j = static_cast<int>(k) - 1;
    while (j >= 0 && idx[j] == n - k + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (uint32_t i = j + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return mixes;
}

namespace {

// Per-thread working-set regions for fork/join kernels; generous spacing so
// regions never alias.
uint64_t thread_region(uint32_t t) { return 0x3000'0000ull + t * 0x0100'0000ull; }
constexpr uint64_t kSharedRegion = 0x6000'0000ull;

}  // namespace

Workload gen_fork_join(const ForkJoinSpec& spec) {
  const bool ok_threads = spec.n_threads == 1 || spec.n_threads == 2 ||
                          spec.n_threads == 4 || spec.n_threads == 8 ||
                          spec.n_threads == 16;
  if (!ok_threads)
    throw std::invalid_argument("fork_join: n_threads must be in {1,2,4,8,16}");
  if (spec.shared_fraction < 0.0 || spec.shared_fraction > 1.0)
    throw std::invalid_argument("fork_join: shared_fraction must be in [0,1]");

  Workload w;
  w.kind = WorkloadKind::ForkJoinParallel;
  w.name = "forkjoin";
  w.per_thread_traces.resize(spec.n_threads);
  w.sync_points.resize(spec.n_threads);
  w.begin_markers.assign(spec.n_threads, 0);

  for (uint32_t tid = 0; tid < spec.n_threads; ++tid) {
    SplitMix64 rng(spec.seed ^ (0x9e37ull * (tid + 1)));
    PcLoop pcs{kCodeBase, 512};
    Trace& t = w.per_thread_traces[tid];
    t.reserve(spec.work_per_thread);
    const uint64_t priv = thread_region(tid);
    uint64_t stream_pos = 0;
    while (t.size() < spec.work_per_thread) {
      switch (spec.kernel) {
        case ParallelKernel::Independent: {
          // 64KB private working set, 1 load : 3 alu
          t.push_back(load(pcs.next(), priv + rng.next_below(1024) * kLineBytes));
          for (int j = 0; j < 3 && t.size() < spec.work_per_thread; ++j)
            t.push_back(alu(pcs.next()));
          break;
        }
        case ParallelKernel::SharedReadMostly: {
          const bool shared = rng.next_bool(spec.shared_fraction);
          const uint64_t base = shared ? kSharedRegion : priv;
          const uint64_t lines = shared ? 16384 : 1024;  // shared region 1MB
          t.push_back(load(pcs.next(), base + rng.next_below(lines) * kLineBytes));
          for (int j = 0; j < 3 && t.size() < spec.work_per_thread; ++j)
            t.push_back(alu(pcs.next()));
          break;
        }
        case ParallelKernel::BandwidthBound: {
          // sequential 8-byte loads, never reused: one new line per 16 instrs
          t.push_back(load(pcs.next(), priv + stream_pos));
          stream_pos += 8;
          t.push_back(alu(pcs.next()));
          break;
        }
      }
    }
    t.resize(spec.work_per_thread);
    for (uint32_t b = 1; b <= spec.n_barriers; ++b)
      w.sync_points[tid].push_back(spec.work_per_thread * b / (spec.n_barriers + 1));
  }
  return w;
}

// --- shipped app stand-ins ----------------------------------------------

const std::vector<std::string> kShippedApps = {
    "bzip2", "gobmk", "libquantum", "mcf", "pointer", "stream"};

bool is_shipped_app(const std::string& name) {
  return std::find(kShippedApps.begin(), kShippedApps.end(), name) !=
         kShippedApps.end();
}

namespace {

// Profile of a synthetic program: a loop body mixing loads/stores over a
// working set with branches of a given predictability. Mixes are stated
// decisions, not calibrated reproductions of the benchmarks they are
// named after.
struct AppProfile {
  uint64_t working_set_bytes;
  bool streaming;          // sequential scan vs uniform random
  double store_fraction;   // of memory ops
  uint32_t mem_every;      // one memory op per this many instructions
  uint32_t branch_every;   // one conditional branch per this many instructions
  double branch_p;         // taken probability for the data-dependent branch
  uint32_t code_slots;     // loop length in instructions
  uint32_t crack_every;    // one Complex (crack 2) per this many instrs; 0 = none
};

AppProfile app_profile(const std::string& name) {
  if (name == "bzip2")      return {768 * 1024, false, 0.30, 4, 8, 0.85, 1024, 97};
  if (name == "gobmk")      return {128 * 1024, false, 0.20, 6, 4, 0.60, 2048, 0};
  if (name == "libquantum") return {4 * 1024 * 1024, true, 0.25, 3, 12, 0.97, 256, 0};
  if (name == "mcf")        return {8 * 1024 * 1024, false, 0.10, 3, 8, 0.75, 512, 0};
  if (name == "pointer")    return {4 * 1024 * 1024, false, 0.00, 4, 16, 0.90, 1024, 0};
  if (name == "stream")     return {0, true, 0.33, 0, 0, 0.0, 64, 0};  // triad
  throw std::invalid_argument("unknown app: " + name);
}

}  // namespace

Trace make_app_trace(const std::string& name, uint64_t n_instrs) {
  if (name == "pointer") return gen_pointer_chase(hash_name("pointer"), 4ull << 20, n_instrs);
  if (name == "stream") {
    // 200000 x 4B arrays (781.25 KB each), cycled until n_instrs reached
    Trace one = gen_stream_triad(200000, 4, 1);
    Trace t;
    t.reserve(n_instrs);
    while (t.size() < n_instrs)
      for (size_t i = 0; i < one.size() && t.size() < n_instrs; ++i)
        t.push_back(one[i]);
    return t;
  }

  const AppProfile p = app_profile(name);
  SplitMix64 rng(hash_name(name.c_str()));
  PcLoop pcs{kCodeBase, p.code_slots};
  const uint64_t lines = p.working_set_bytes / kLineBytes;
  const uint64_t branch_pc_count = 8;  // a handful of static branch sites
  uint64_t scan_pos = 0;

  Trace t;
  t.reserve(n_instrs);
  uint64_t i = 0;
  while (t.size() < n_instrs) {
    ++i;
    if (p.mem_every && i % p.mem_every == 0) {
      uint64_t line = p.streaming ? (scan_pos++ % lines) : rng.next_below(lines);
      uint64_t addr = kDataBase + line * kLineBytes + rng.next_below(8) * 8;
      if (rng.next_bool(p.store_fraction))
        t.push_back(store(pcs.next(), addr));
      else
        t.push_back(load(pcs.next(), addr));
    } else if (p.branch_every && i % p.branch_every == 0) {
      const uint64_t site = rng.next_below(branch_pc_count);
      const uint64_t bpc = kCodeBase + 0x8000 + site * 64;
      t.push_back(cond_branch(bpc, rng.next_bool(p.branch_p), bpc + 32));
    } else if (p.crack_every && i % p.crack_every == 0) {
      TraceInstr in;
      in.kind = InstrKind::Complex;
      in.pc = pcs.next();
      in.crack_count = 2;
      t.push_back(in);
    } else {
      t.push_back(alu(pcs.next()));
    }
  }
  return t;
}

Trace tag_trace(Trace t, uint64_t tag) {
  for (TraceInstr& in : t) {
    in.pc |= tag;
    if (in.has_mem()) in.mem_addr |= tag;
    if (in.is_control()) in.target |= tag;
  }
  return t;
}

Workload make_mix_workload(const std::vector<std::string>& apps,
                           uint64_t instrs_per_slot) {
  Workload w;
  w.kind = WorkloadKind::Multiprogrammed;
  for (size_t i = 0; i < apps.size(); ++i) {
    w.name += (i ? "+" : "") + apps[i];
    w.per_thread_traces.push_back(tag_trace(
        make_app_trace(apps[i], instrs_per_slot),
        slot_address_tag(static_cast<uint32_t>(i))));
  }
  w.begin_markers.assign(apps.size(), 0);
  return w;
}

}  // namespace tracesim
