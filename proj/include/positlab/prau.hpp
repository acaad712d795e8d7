#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "positlab/posit.hpp"
#include "positlab/quire.hpp"

namespace positlab::prau {

/// Assembly syntax error with 1-based source position.
struct AsmError : std::runtime_error {
  int line;
  int column;
  AsmError(int line_, int column_, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(column_) + ": " + message),
        line(line_),
        column(column_) {}
};

enum class Opcode : std::uint8_t {
  padd, psub, pmul, pdiv, psqrt,      // computational
  pcvt_w_p, pcvt_p_w,                 // posit <-> 32-bit integer word
  qclr, qneg, qmadd, qround,          // quire
  pmv, psgnj, psgnjn, psgnjx,         // register moves / sign injection
  peq, plt, ple,                      // comparisons into x registers
  pli, xli,                           // immediates (raw posit pattern / integer)
  halt, bnez,                         // control
};

const char* mnemonic(Opcode op);

struct Instruction {
  Opcode op;
  int rd = 0;          // destination register index (p or x file, per opcode)
  int ra = 0;
  int rb = 0;
  std::int64_t imm = 0;  // pli pattern, xli value, or bnez target index
  int line = 0;          // 1-based source line (0 for synthesized programs)

  friend bool operator==(const Instruction& a, const Instruction& b) {
    return a.op == b.op && a.rd == b.rd && a.ra == b.ra && a.rb == b.rb && a.imm == b.imm;
  }
};

struct Program {
  std::vector<Instruction> code;
};

/// One instruction per line, `#` comments, optional `name:` labels.
/// Registers are p0..p31 and x0..x31 (no hardwired zero). bnez accepts a
/// label or an absolute instruction index. Throws AsmError at the first
/// problem.
Program assemble(const std::string& text);

/// Canonical text: one instruction per line, labels resolved to absolute
/// indices, pli immediates in hex. assemble(print(p)) reproduces p exactly.
std::string print(const Program& prog);

struct MachineState {
  FormatSpec spec;
  std::array<PositBits, 32> pregs;
  std::array<std::int64_t, 32> xregs{};
  std::optional<Quire> quire;  // engaged for es=2 formats only
  std::size_t pc = 0;
  std::uint64_t retired = 0;

  explicit MachineState(FormatSpec spec_);
};

/// What one step wrote, for tracing: dest is "p3"/"x1"/"q" or "-" when the
/// instruction writes nothing (halt, bnez, qclr on a quireless format).
struct StepEffect {
  std::string dest = "-";
  std::string value_hex = "-";
  bool halted = false;
};

/// Executes the instruction at the given state (the instruction need not
/// come from a program; pc/retired advance as if it did). Every instruction
/// is total: undefined numeric cases produce NaR. Quire instructions on a
/// format without a quire (es != 2) write NaR (qround) or do nothing.
StepEffect step(MachineState& state, const Instruction& ins);

struct TraceRow {
  std::uint64_t step = 0;
  std::size_t pc = 0;
  std::string mnemonic;
  std::string dest;
  std::string value_hex;
  std::string csv_row() const;
};

inline constexpr const char* kTraceCsvHeader = "step,pc,mnemonic,dest,value_hex";

struct RunResult {
  MachineState state;
  std::vector<TraceRow> trace;                    // filled when want_trace
  std::map<std::string, std::uint64_t> op_counts;  // retired per mnemonic
  bool halted = false;     // stopped on halt (vs falling off the end)
  bool hit_limit = false;  // stopped by the instruction budget
  std::string diagnostic;  // set when hit_limit
};

/// Runs until halt, falling off the end, or `limit` retired instructions
/// (limit >= 1, else invalid_argument). Deterministic: identical
/// (program, spec) give identical states and traces. Cost model: one unit
/// per retired instruction, broken down in op_counts.
RunResult run(const Program& prog, FormatSpec spec, std::uint64_t limit,
              bool want_trace = false);

}  // namespace positlab::prau
