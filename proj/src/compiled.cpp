#include "compiled.hpp"

#include <algorithm>

#include "causalfuse/errors.hpp"

namespace causalfuse::detail {

bool CompiledFormula::eval(const std::uint8_t* values) const {
  std::uint8_t stack[64];
  int top = -1;
  for (const Instr& in : code) {
    switch (in.op) {
      case Op::PushVar:
        stack[++top] = values[in.slot];
        break;
      case Op::PushConst:
        stack[++top] = in.value;
        break;
      case Op::Neg:
        stack[top] ^= 1u;
        break;
      case Op::Conj:
        --top;
        stack[top] = stack[top] & stack[top + 1];
        break;
      case Op::Disj:
        --top;
        stack[top] = stack[top] | stack[top + 1];
        break;
      case Op::Parity:
        --top;
        stack[top] = stack[top] ^ stack[top + 1];
        break;
    }
  }
  return stack[0] != 0;
}

namespace {

// Depth bound keeps the fixed eval stack safe; equations in practice are
// shallow gate chains.
void emit(const Formula& f,
          const std::unordered_map<std::string, int>& index,
          CompiledFormula* out, int depth) {
  if (depth > 60) throw Error("formula nesting exceeds supported depth");
  switch (f.kind()) {
    case FormulaKind::Var: {
      auto it = index.find(f.var_name());
      if (it == index.end())
        throw Error("unbound variable '" + f.var_name() + "'");
      out->code.push_back({CompiledFormula::Op::PushVar, it->second, 0});
      out->reads.push_back(it->second);
      break;
    }
    case FormulaKind::Const:
      out->code.push_back({CompiledFormula::Op::PushConst, 0,
                           static_cast<std::uint8_t>(f.const_value())});
      break;
    case FormulaKind::Not:
      emit(f.operand(), index, out, depth + 1);
      out->code.push_back({CompiledFormula::Op::Neg, 0, 0});
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Xor: {
      // Left-leaning chains evaluate with a stack depth of two.
      emit(f.lhs(), index, out, depth + 1);
      emit(f.rhs(), index, out, depth + 1);
      auto op = f.kind() == FormulaKind::And  ? CompiledFormula::Op::Conj
                : f.kind() == FormulaKind::Or ? CompiledFormula::Op::Disj
                                              : CompiledFormula::Op::Parity;
      out->code.push_back({op, 0, 0});
      break;
    }
  }
}

CompiledFormula compile_against(
    const Formula& f, const std::unordered_map<std::string, int>& index) {
  CompiledFormula out;
  emit(f, index, &out, 0);
  std::sort(out.reads.begin(), out.reads.end());
  out.reads.erase(std::unique(out.reads.begin(), out.reads.end()),
                  out.reads.end());
  return out;
}

}  // namespace

CompiledModel::CompiledModel(const CausalModel& m) {
  ValidationReport report = validate_model(m);
  if (!report.ok())
    throw ValidationError("invalid model: " + report.to_string());

  exo_count_ = static_cast<int>(m.exogenous.size());
  names_.reserve(m.exogenous.size() + m.endogenous.size());
  for (const auto& n : m.exogenous) names_.push_back(n);
  for (const auto& n : m.endogenous) names_.push_back(n);
  for (int i = 0; i < static_cast<int>(names_.size()); ++i)
    index_.emplace(names_[i], i);

  equations_.reserve(m.endogenous.size());
  for (const auto& n : m.endogenous)
    equations_.push_back(compile_against(m.equations.at(n), index_));

  // Kahn over the endogenous dependency graph. Validation already ruled out
  // cycles, so every slot gets scheduled.
  int nv = endo_count();
  std::vector<int> indegree(nv, 0);
  std::vector<std::vector<int>> users(nv);
  for (int i = 0; i < nv; ++i) {
    for (std::int32_t r : equations_[i].reads) {
      if (r >= exo_count_) {
        users[r - exo_count_].push_back(i);
        ++indegree[i];
      }
    }
  }
  std::vector<int> ready;
  for (int i = 0; i < nv; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  topo_.reserve(nv);
  for (std::size_t head = 0; head < ready.size(); ++head) {
    int i = ready[head];
    topo_.push_back(i + exo_count_);
    for (int user : users[i])
      if (--indegree[user] == 0) ready.push_back(user);
  }
}

int CompiledModel::slot_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

const std::vector<std::int32_t>& CompiledModel::reads_of(int endo_slot) const {
  return equations_[endo_slot - exo_count_].reads;
}

void CompiledModel::solve(std::uint8_t* values,
                          const std::int8_t* clamps) const {
  for (int slot : topo_) {
    if (clamps != nullptr && clamps[slot] >= 0)
      values[slot] = static_cast<std::uint8_t>(clamps[slot]);
    else
      values[slot] = equations_[slot - exo_count_].eval(values) ? 1 : 0;
  }
}

CompiledFormula CompiledModel::compile(const Formula& f) const {
  return compile_against(f, index_);
}

std::vector<char> CompiledModel::ancestors_of(
    const std::vector<int>& targets) const {
  std::vector<char> mark(total(), 0);
  std::vector<int> stack(targets);
  for (int t : targets) mark[t] = 1;
  while (!stack.empty()) {
    int slot = stack.back();
    stack.pop_back();
    if (!is_endo_slot(slot)) continue;
    for (std::int32_t r : reads_of(slot)) {
      if (!mark[r]) {
        mark[r] = 1;
        stack.push_back(r);
      }
    }
  }
  return mark;
}

}  // namespace causalfuse::detail
