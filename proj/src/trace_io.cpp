#include "tracesim/trace_io.hpp"

#include <zlib.h>

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tracesim {

namespace {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_instr(std::ostream& os, const TraceInstr& in) {
  char buf[128];
  switch (in.kind) {
    case InstrKind::Alu:
      std::snprintf(buf, sizeof buf, "alu %" PRIx64, in.pc);
      break;
    case InstrKind::Load:
      std::snprintf(buf, sizeof buf, "load %" PRIx64 " %" PRIx64, in.pc, in.mem_addr);
      break;
    case InstrKind::Store:
      std::snprintf(buf, sizeof buf, "store %" PRIx64 " %" PRIx64, in.pc, in.mem_addr);
      break;
    case InstrKind::CondBranch:
      std::snprintf(buf, sizeof buf, "cbr %" PRIx64 " %c %" PRIx64, in.pc,
                    in.taken ? 'T' : 'N', in.target);
      break;
    case InstrKind::Jump:
      std::snprintf(buf, sizeof buf, "jmp %" PRIx64 " %" PRIx64, in.pc, in.target);
      break;
    case InstrKind::Complex:
      std::snprintf(buf, sizeof buf, "cplx %" PRIx64 " %u", in.pc,
                    unsigned(in.crack_count));
      break;
  }
  os << buf;
  if (in.is_call) os << " call";
  if (in.is_return) os << " ret";
  os << '\n';
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

uint64_t parse_hex(const std::string& s, const char* what, size_t record) {
  char* end = nullptr;
  uint64_t v = std::strtoull(s.c_str(), &end, 16);
  if (end == s.c_str() || *end != '\0') {
    throw ParseError("record " + std::to_string(record) + ": bad " + what +
                     " '" + s + "'");
  }
  return v;
}

long validate_workload(const Workload& w) {
  long base = 0;
  for (const Trace& t : w.per_thread_traces) {
    long bad = validate_trace(t);
    if (bad >= 0) return base + bad;
    base += static_cast<long>(t.size());
  }
  return -1;
}

bool is_gz(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

TraceInstr parse_instr(const std::vector<std::string>& tok, size_t record) {
  TraceInstr in;
  const std::string& kind = tok[0];
  size_t fixed = 0;
  if (kind == "alu") {
    in.kind = InstrKind::Alu;
    fixed = 2;
  } else if (kind == "load" || kind == "store") {
    in.kind = kind == "load" ? InstrKind::Load : InstrKind::Store;
    if (tok.size() < 3)
      throw ParseError("record " + std::to_string(record) + ": " + kind +
                       " lacking mem_addr");
    in.mem_addr = parse_hex(tok[2], "mem_addr", record);
    fixed = 3;
  } else if (kind == "cbr") {
    in.kind = InstrKind::CondBranch;
    if (tok.size() < 4)
      throw ParseError("record " + std::to_string(record) +
                       ": cbr requires taken flag and target");
    if (tok[2] != "T" && tok[2] != "N")
      throw ParseError("record " + std::to_string(record) +
                       ": cbr taken flag must be T or N");
    in.taken = tok[2] == "T";
    in.target = parse_hex(tok[3], "target", record);
    fixed = 4;
  } else if (kind == "jmp") {
    in.kind = InstrKind::Jump;
    in.taken = true;
    if (tok.size() < 3)
      throw ParseError("record " + std::to_string(record) + ": jmp lacking target");
    in.target = parse_hex(tok[2], "target", record);
    fixed = 3;
  } else if (kind == "cplx") {
    in.kind = InstrKind::Complex;
    if (tok.size() < 3)
      throw ParseError("record " + std::to_string(record) + ": cplx lacking crack count");
    unsigned k = static_cast<unsigned>(std::strtoul(tok[2].c_str(), nullptr, 10));
    if (k < 2 || k > 255)
      throw ParseError("record " + std::to_string(record) +
                       ": crack count must be in [2,255]");
    in.crack_count = static_cast<uint8_t>(k);
    fixed = 3;
  } else {
    throw ParseError("record " + std::to_string(record) + ": unknown kind '" +
                     kind + "'");
  }
  if (tok.size() < 2) throw ParseError("record " + std::to_string(record) + ": missing pc");
  in.pc = parse_hex(tok[1], "pc", record);
  for (size_t i = fixed; i < tok.size(); ++i) {
    if (tok[i] == "call") in.is_call = true;
    else if (tok[i] == "ret") in.is_return = true;
    else
      throw ParseError("record " + std::to_string(record) + ": unknown flag '" +
                       tok[i] + "'");
  }
  return in;
}

}  // namespace

void write_workload(const Workload& w, std::ostream& os) {
  os << "simtrace v1 threads=" << w.threads() << " kind=" << to_string(w.kind)
     << " name=" << (w.name.empty() ? "-" : w.name) << '\n';
  for (size_t t = 0; t < w.begin_markers.size(); ++t)
    if (w.begin_markers[t] != 0)
      os << "begin " << t << ' ' << w.begin_markers[t] << '\n';
  for (size_t t = 0; t < w.sync_points.size(); ++t)
    for (uint64_t idx : w.sync_points[t]) os << "sync " << t << ' ' << idx << '\n';
  for (size_t t = 0; t < w.threads(); ++t) {
    os << "thread " << t << ' ' << w.per_thread_traces[t].size() << '\n';
    for (const TraceInstr& in : w.per_thread_traces[t]) emit_instr(os, in);
  }
}

Workload read_workload(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("truncated header");
  auto head = split_ws(line);
  if (head.size() < 4 || head[0] != "simtrace" || head[1] != "v1")
    throw ParseError("truncated header");

  Workload w;
  size_t n_threads = 0;
  for (size_t i = 2; i < head.size(); ++i) {
    const std::string& f = head[i];
    if (f.rfind("threads=", 0) == 0) {
      n_threads = std::strtoull(f.c_str() + 8, nullptr, 10);
    } else if (f.rfind("kind=", 0) == 0) {
      std::string k = f.substr(5);
      if (k == "single") w.kind = WorkloadKind::SingleThread;
      else if (k == "multi") w.kind = WorkloadKind::Multiprogrammed;
      else if (k == "forkjoin") w.kind = WorkloadKind::ForkJoinParallel;
      else throw ParseError("unknown workload kind '" + k + "'");
    } else if (f.rfind("name=", 0) == 0) {
      w.name = f.substr(5);
      if (w.name == "-") w.name.clear();
    } else {
      throw ParseError("unknown header field '" + f + "'");
    }
  }
  if (n_threads == 0) throw ParseError("truncated header");
  w.per_thread_traces.resize(n_threads);
  w.sync_points.resize(n_threads);
  w.begin_markers.assign(n_threads, 0);

  size_t record = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "sync" || tok[0] == "begin") {
      if (tok.size() != 3) throw ParseError(tok[0] + " line requires thread and index");
      size_t t = std::strtoull(tok[1].c_str(), nullptr, 10);
      if (t >= n_threads) throw ParseError(tok[0] + " line: thread out of range");
      uint64_t idx = std::strtoull(tok[2].c_str(), nullptr, 10);
      if (tok[0] == "sync") w.sync_points[t].push_back(idx);
      else w.begin_markers[t] = idx;
    } else if (tok[0] == "thread") {
      if (tok.size() != 3) throw ParseError("thread line requires id and count");
      size_t t = std::strtoull(tok[1].c_str(), nullptr, 10);
      if (t >= n_threads) throw ParseError("thread id out of range");
      uint64_t count = std::strtoull(tok[2].c_str(), nullptr, 10);
      Trace& tr = w.per_thread_traces[t];
      tr.reserve(count);
      for (uint64_t i = 0; i < count; ++i) {
        if (!std::getline(is, line))
          throw ParseError("truncated trace: thread " + std::to_string(t) +
                           " expected " + std::to_string(count) + " records, got " +
                           std::to_string(i));
        auto itok = split_ws(line);
        if (itok.empty())
          throw ParseError("record " + std::to_string(record) + ": empty");
        tr.push_back(parse_instr(itok, record));
        ++record;
      }
    } else {
      throw ParseError("unexpected line '" + line + "'");
    }
  }
  if (long bad = validate_workload(w); bad >= 0)
    throw ParseError("record " + std::to_string(bad) + ": invariant violation");
  return w;
}

void write_workload(const Workload& w, const std::string& path) {
  std::ostringstream ss;
  write_workload(w, ss);
  const std::string data = ss.str();
  if (is_gz(path)) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    if (gzwrite(f, data.data(), static_cast<unsigned>(data.size())) !=
        static_cast<int>(data.size())) {
      gzclose(f);
      throw std::runtime_error("gzip write failed: " + path);
    }
    gzclose(f);
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << data;
  }
}

Workload read_workload(const std::string& path) {
  if (is_gz(path)) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string data;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) data.append(buf, n);
    gzclose(f);
    std::istringstream ss(data);
    return read_workload(ss);
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_workload(f);
}

}  // namespace tracesim
