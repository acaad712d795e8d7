#include "positlab/prau.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>

namespace positlab::prau {

namespace {

enum class Sig {
  ppp,      // pd, pa, pb
  pp,       // pd, pa
  xp,       // xd, pa
  px,       // pd, xa
  none,     //
  qmadd,    // pa, pb (quire accumulate, no register destination)
  p,        // pd
  xpp,      // xd, pa, pb
  pimm,     // pd, raw pattern immediate
  ximm,     // xd, integer immediate
  xtarget,  // xs, label-or-index
};

struct OpInfo {
  const char* name;
  Opcode op;
  Sig sig;
};

constexpr OpInfo kOps[] = {
    {"padd", Opcode::padd, Sig::ppp},
    {"psub", Opcode::psub, Sig::ppp},
    {"pmul", Opcode::pmul, Sig::ppp},
    {"pdiv", Opcode::pdiv, Sig::ppp},
    {"psqrt", Opcode::psqrt, Sig::pp},
    {"pcvt.w.p", Opcode::pcvt_w_p, Sig::xp},
    {"pcvt.p.w", Opcode::pcvt_p_w, Sig::px},
    {"qclr", Opcode::qclr, Sig::none},
    {"qneg", Opcode::qneg, Sig::none},
    {"qmadd", Opcode::qmadd, Sig::qmadd},
    {"qround", Opcode::qround, Sig::p},
    {"pmv", Opcode::pmv, Sig::pp},
    {"psgnj", Opcode::psgnj, Sig::ppp},
    {"psgnjn", Opcode::psgnjn, Sig::ppp},
    {"psgnjx", Opcode::psgnjx, Sig::ppp},
    {"peq", Opcode::peq, Sig::xpp},
    {"plt", Opcode::plt, Sig::xpp},
    {"ple", Opcode::ple, Sig::xpp},
    {"pli", Opcode::pli, Sig::pimm},
    {"xli", Opcode::xli, Sig::ximm},
    {"halt", Opcode::halt, Sig::none},
    {"bnez", Opcode::bnez, Sig::xtarget},
};

const OpInfo* find_op(const std::string& name) {
  for (const auto& o : kOps) {
    if (name == o.name) return &o;
  }
  return nullptr;
}

const OpInfo& info_of(Opcode op) {
  for (const auto& o : kOps) {
    if (o.op == op) return o;
  }
  assert(false);
  return kOps[0];
}

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '.';
}

struct Operand {
  std::string text;
  int col;  // 1-based
};

int parse_reg(const Operand& t, char file, int line) {
  if (t.text.size() < 2 || t.text[0] != file) {
    throw AsmError(line, t.col, std::string("expected ") + file + "-register, got '" +
                                    t.text + "'");
  }
  int idx = -1;
  auto r = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), idx);
  if (r.ec != std::errc{} || r.ptr != t.text.data() + t.text.size()) {
    throw AsmError(line, t.col, "bad register '" + t.text + "'");
  }
  if (idx < 0 || idx > 31) {
    throw AsmError(line, t.col, "register out of range: " + t.text + " (files have 32 entries)");
  }
  return idx;
}

std::int64_t parse_imm(const Operand& t, int line) {
  const std::string& s = t.text;
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  int base = 10;
  if (i + 2 <= s.size() && s[i] == '0' && (s[i + 1] == 'x' || s[i + 1] == 'X')) {
    base = 16;
    i += 2;
  }
  std::uint64_t mag = 0;
  auto r = std::from_chars(s.data() + i, s.data() + s.size(), mag, base);
  if (i >= s.size() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw AsmError(line, t.col, "malformed immediate '" + s + "'");
  }
  if (mag > (neg ? std::uint64_t{1} << 63 : (std::uint64_t{1} << 63) - 1)) {
    throw AsmError(line, t.col, "immediate out of 64-bit range: '" + s + "'");
  }
  return neg ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag);
}

}  // namespace

const char* mnemonic(Opcode op) { return info_of(op).name; }

Program assemble(const std::string& text) {
  Program prog;
  std::map<std::string, std::size_t> labels;
  struct Pending {
    std::size_t instr;
    std::string label;
    int line;
    int col;
  };
  std::vector<Pending> pending;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                 : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    };
    skip_ws();
    if (i >= line.size()) continue;

    // leading identifier: label (if followed by ':') or mnemonic
    int tok_col = static_cast<int>(i) + 1;
    std::size_t start = i;
    while (i < line.size() && is_ident_char(line[i])) ++i;
    std::string word = line.substr(start, i - start);
    if (word.empty()) throw AsmError(line_no, tok_col, "unexpected character");
    skip_ws();
    if (i < line.size() && line[i] == ':') {
      if (labels.count(word)) throw AsmError(line_no, tok_col, "duplicate label '" + word + "'");
      labels[word] = prog.code.size();
      ++i;
      skip_ws();
      if (i >= line.size()) continue;
      tok_col = static_cast<int>(i) + 1;
      start = i;
      while (i < line.size() && is_ident_char(line[i])) ++i;
      word = line.substr(start, i - start);
      if (word.empty()) throw AsmError(line_no, tok_col, "expected instruction after label");
    }

    const OpInfo* op = find_op(word);
    if (!op) throw AsmError(line_no, tok_col, "unknown mnemonic '" + word + "'");

    // comma-separated operands until end of line
    std::vector<Operand> ops;
    skip_ws();
    if (i < line.size()) {
      while (true) {
        skip_ws();
        const int col = static_cast<int>(i) + 1;
        std::size_t s2 = i;
        while (i < line.size() && line[i] != ',') ++i;
        std::string t = line.substr(s2, i - s2);
        while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r'))
          t.pop_back();
        if (t.empty()) throw AsmError(line_no, col, "empty operand");
        ops.push_back({t, col});
        if (i >= line.size()) break;
        ++i;  // consume comma
        if (i >= line.size()) throw AsmError(line_no, static_cast<int>(i) + 1, "empty operand");
      }
    }

    auto need = [&](std::size_t n) {
      if (ops.size() != n) {
        throw AsmError(line_no, tok_col,
                       std::string(op->name) + " takes " + std::to_string(n) +
                           " operand(s), got " + std::to_string(ops.size()));
      }
    };

    Instruction ins;
    ins.op = op->op;
    ins.line = line_no;
    switch (op->sig) {
      case Sig::ppp:
        need(3);
        ins.rd = parse_reg(ops[0], 'p', line_no);
        ins.ra = parse_reg(ops[1], 'p', line_no);
        ins.rb = parse_reg(ops[2], 'p', line_no);
        break;
      case Sig::pp:
        need(2);
        ins.rd = parse_reg(ops[0], 'p', line_no);
        ins.ra = parse_reg(ops[1], 'p', line_no);
        break;
      case Sig::xp:
        need(2);
        ins.rd = parse_reg(ops[0], 'x', line_no);
        ins.ra = parse_reg(ops[1], 'p', line_no);
        break;
      case Sig::px:
        need(2);
        ins.rd = parse_reg(ops[0], 'p', line_no);
        ins.ra = parse_reg(ops[1], 'x', line_no);
        break;
      case Sig::none:
        need(0);
        break;
      case Sig::qmadd:
        need(2);
        ins.ra = parse_reg(ops[0], 'p', line_no);
        ins.rb = parse_reg(ops[1], 'p', line_no);
        break;
      case Sig::p:
        need(1);
        ins.rd = parse_reg(ops[0], 'p', line_no);
        break;
      case Sig::xpp:
        need(3);
        ins.rd = parse_reg(ops[0], 'x', line_no);
        ins.ra = parse_reg(ops[1], 'p', line_no);
        ins.rb = parse_reg(ops[2], 'p', line_no);
        break;
      case Sig::pimm:
        need(2);
        ins.rd = parse_reg(ops[0], 'p', line_no);
        ins.imm = parse_imm(ops[1], line_no);
        if (ins.imm < 0 || ins.imm > 0xFFFFFFFFll) {
          throw AsmError(line_no, ops[1].col, "posit pattern immediate out of 32-bit range");
        }
        break;
      case Sig::ximm:
        need(2);
        ins.rd = parse_reg(ops[0], 'x', line_no);
        ins.imm = parse_imm(ops[1], line_no);
        break;
      case Sig::xtarget: {
        need(2);
        ins.ra = parse_reg(ops[0], 'x', line_no);
        const std::string& t = ops[1].text;
        if (!t.empty() && (t[0] >= '0' && t[0] <= '9')) {
          ins.imm = parse_imm(ops[1], line_no);
        } else {
          pending.push_back({prog.code.size(), t, line_no, ops[1].col});
        }
        break;
      }
    }
    prog.code.push_back(ins);
  }

  for (const auto& p : pending) {
    auto it = labels.find(p.label);
    if (it == labels.end()) throw AsmError(p.line, p.col, "unknown label '" + p.label + "'");
    prog.code[p.instr].imm = static_cast<std::int64_t>(it->second);
  }
  for (const auto& ins : prog.code) {
    if (ins.op == Opcode::bnez &&
        (ins.imm < 0 || ins.imm > static_cast<std::int64_t>(prog.code.size()))) {
      throw AsmError(ins.line, 1, "branch target out of range: " + std::to_string(ins.imm));
    }
  }
  return prog;
}

std::string print(const Program& prog) {
  std::string out;
  char buf[64];
  for (const auto& ins : prog.code) {
    const OpInfo& oi = info_of(ins.op);
    out += oi.name;
    switch (oi.sig) {
      case Sig::ppp:
        std::snprintf(buf, sizeof buf, " p%d, p%d, p%d", ins.rd, ins.ra, ins.rb);
        out += buf;
        break;
      case Sig::pp:
        std::snprintf(buf, sizeof buf, " p%d, p%d", ins.rd, ins.ra);
        out += buf;
        break;
      case Sig::xp:
        std::snprintf(buf, sizeof buf, " x%d, p%d", ins.rd, ins.ra);
        out += buf;
        break;
      case Sig::px:
        std::snprintf(buf, sizeof buf, " p%d, x%d", ins.rd, ins.ra);
        out += buf;
        break;
      case Sig::none:
        break;
      case Sig::qmadd:
        std::snprintf(buf, sizeof buf, " p%d, p%d", ins.ra, ins.rb);
        out += buf;
        break;
      case Sig::p:
        std::snprintf(buf, sizeof buf, " p%d", ins.rd);
        out += buf;
        break;
      case Sig::xpp:
        std::snprintf(buf, sizeof buf, " x%d, p%d, p%d", ins.rd, ins.ra, ins.rb);
        out += buf;
        break;
      case Sig::pimm:
        std::snprintf(buf, sizeof buf, " p%d, 0x%llX", ins.rd,
                      static_cast<unsigned long long>(ins.imm));
        out += buf;
        break;
      case Sig::ximm:
        std::snprintf(buf, sizeof buf, " x%d, %lld", ins.rd,
                      static_cast<long long>(ins.imm));
        out += buf;
        break;
      case Sig::xtarget:
        std::snprintf(buf, sizeof buf, " x%d, %lld", ins.ra,
                      static_cast<long long>(ins.imm));
        out += buf;
        break;
    }
    out += '\n';
  }
  return out;
}

MachineState::MachineState(FormatSpec spec_) : spec(spec_) {
  pregs.fill(PositBits(0, spec));
  if (spec.es == 2) quire.emplace(spec);
}

namespace {

std::string xhex(std::int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llX",
                static_cast<unsigned long long>(static_cast<std::uint64_t>(v)));
  return buf;
}

}  // namespace

StepEffect step(MachineState& st, const Instruction& ins) {
  StepEffect eff;
  std::size_t next_pc = st.pc + 1;
  auto set_p = [&](int rd, PositBits v) {
    st.pregs[rd] = v;
    eff.dest = "p" + std::to_string(rd);
    eff.value_hex = v.to_hex();
  };
  auto set_x = [&](int rd, std::int64_t v) {
    st.xregs[rd] = v;
    eff.dest = "x" + std::to_string(rd);
    eff.value_hex = xhex(v);
  };
  auto quire_eff = [&] {
    if (st.quire) {
      eff.dest = "q";
      eff.value_hex = st.quire->dump_hex();
    }
  };

  switch (ins.op) {
    case Opcode::padd: set_p(ins.rd, add(st.pregs[ins.ra], st.pregs[ins.rb])); break;
    case Opcode::psub: set_p(ins.rd, sub(st.pregs[ins.ra], st.pregs[ins.rb])); break;
    case Opcode::pmul: set_p(ins.rd, mul(st.pregs[ins.ra], st.pregs[ins.rb])); break;
    case Opcode::pdiv: set_p(ins.rd, div(st.pregs[ins.ra], st.pregs[ins.rb])); break;
    case Opcode::psqrt: set_p(ins.rd, sqrt(st.pregs[ins.ra])); break;
    case Opcode::pcvt_w_p:
      set_x(ins.rd, cvt_posit_int(st.pregs[ins.ra], /*is_signed=*/true, /*width=*/32));
      break;
    case Opcode::pcvt_p_w:
      set_p(ins.rd, cvt_int_posit(static_cast<std::int32_t>(st.xregs[ins.ra]), st.spec));
      break;
    case Opcode::qclr:
      if (st.quire) st.quire->clear();
      quire_eff();
      break;
    case Opcode::qneg:
      if (st.quire) st.quire->negate();
      quire_eff();
      break;
    case Opcode::qmadd:
      if (st.quire) st.quire->mac(st.pregs[ins.ra], st.pregs[ins.rb]);
      quire_eff();
      break;
    case Opcode::qround:
      set_p(ins.rd, st.quire ? st.quire->to_posit() : PositBits(st.spec.nar_pattern(), st.spec));
      break;
    case Opcode::pmv: set_p(ins.rd, st.pregs[ins.ra]); break;
    case Opcode::psgnj:
      set_p(ins.rd, sign_inject(st.pregs[ins.ra], st.pregs[ins.rb], SignMode::copy));
      break;
    case Opcode::psgnjn:
      set_p(ins.rd, sign_inject(st.pregs[ins.ra], st.pregs[ins.rb], SignMode::negate));
      break;
    case Opcode::psgnjx:
      set_p(ins.rd, sign_inject(st.pregs[ins.ra], st.pregs[ins.rb], SignMode::xor_));
      break;
    case Opcode::peq:
      set_x(ins.rd, compare(st.pregs[ins.ra], st.pregs[ins.rb]) == 0 ? 1 : 0);
      break;
    case Opcode::plt:
      set_x(ins.rd, compare(st.pregs[ins.ra], st.pregs[ins.rb]) < 0 ? 1 : 0);
      break;
    case Opcode::ple:
      set_x(ins.rd, compare(st.pregs[ins.ra], st.pregs[ins.rb]) <= 0 ? 1 : 0);
      break;
    case Opcode::pli:
      set_p(ins.rd, PositBits(static_cast<std::uint32_t>(ins.imm), st.spec));
      break;
    case Opcode::xli: set_x(ins.rd, ins.imm); break;
    case Opcode::halt: eff.halted = true; break;
    case Opcode::bnez:
      if (st.xregs[ins.ra] != 0) next_pc = static_cast<std::size_t>(ins.imm);
      break;
  }
  st.pc = next_pc;
  ++st.retired;
  return eff;
}

std::string TraceRow::csv_row() const {
  return std::to_string(step) + "," + std::to_string(pc) + "," + mnemonic + "," + dest +
         "," + value_hex;
}

RunResult run(const Program& prog, FormatSpec spec, std::uint64_t limit, bool want_trace) {
  if (limit < 1) throw std::invalid_argument("run limit must be >= 1");
  RunResult res{MachineState(spec), {}, {}, false, false, {}};
  MachineState& st = res.state;
  while (st.pc < prog.code.size()) {
    if (st.retired >= limit) {
      res.hit_limit = true;
      res.diagnostic = "instruction limit (" + std::to_string(limit) +
                       ") reached at pc=" + std::to_string(st.pc);
      break;
    }
    const Instruction& ins = prog.code[st.pc];
    const std::size_t at = st.pc;
    const std::uint64_t n = st.retired;
    const StepEffect eff = step(st, ins);
    res.op_counts[mnemonic(ins.op)] += 1;
    if (want_trace) {
      res.trace.push_back({n, at, mnemonic(ins.op), eff.dest, eff.value_hex});
    }
    if (eff.halted) {
      res.halted = true;
      break;
    }
  }
  return res;
}

}  // namespace positlab::prau
