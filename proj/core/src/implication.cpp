#include "ppszkit/implication.hpp"

#include "packed.hpp"
#include "ppszkit/error.hpp"

namespace ppszkit {

namespace {

void checkS(int s) {
  if (s < 0 || s > kMaxS)
    throw ContractViolation("s must be in [0, " + std::to_string(kMaxS) +
                            "], got " + std::to_string(s));
}

}  // namespace

bool is_s_implied(const CnfFormula& f, Lit l, int s) {
  checkS(s);
  if (!f.hasVar(l.var()))
    throw ContractViolation("is_s_implied: variable " +
                            std::to_string(l.var()) + " not in V(F)");
  const auto map = detail::makeVarMap(f);
  const auto packed = pack(f, map);
  const auto root = detail::RootIndex::build(packed, s);
  detail::RunState st(&root);
  return st.impliedNow(map.indexOf(l.var()), l.positive());
}

std::vector<Lit> s_implied_literals(const CnfFormula& f, int s) {
  checkS(s);
  const auto map = detail::makeVarMap(f);
  const auto packed = pack(f, map);
  const auto root = detail::RootIndex::build(packed, s);
  detail::RunState st(&root);
  std::vector<Lit> out;
  for (int i = 0; i < map.size(); ++i) {
    if (st.impliedNow(i, true)) out.emplace_back(map.varOf(i), true);
    if (st.impliedNow(i, false)) out.emplace_back(map.varOf(i), false);
  }
  return out;
}

FixpointResult fix_implied(const CnfFormula& f, int s) {
  checkS(s);
  const auto map = detail::makeVarMap(f);
  const auto packed = pack(f, map);
  const auto root = detail::RootIndex::build(packed, s);
  detail::RunState st(&root);
  std::vector<std::pair<int, bool>> forced;
  const auto r = st.fixToQuiescence(&forced);
  FixpointResult out;
  for (auto [idx, value] : forced) out.fixed.emplace_back(map.varOf(idx), value);
  out.contradiction = r != detail::RunState::FixResult::Quiet;
  out.residual = unpack(st.snapshot(), map);
  return out;
}

}  // namespace ppszkit
