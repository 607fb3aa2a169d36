#include "soskit/constraint.hpp"

namespace sos {

std::string rel_op_str(RelOp op) {
  switch (op) {
    case RelOp::GE: return ">=";
    case RelOp::LE: return "<=";
    case RelOp::EQ: return "==";
  }
  return "?";
}

Constraint Constraint::sos_ge(const Polynomial& lhs, const Polynomial& rhs,
                              const std::string& label) {
  return Constraint(ConstraintKind::SOS, RelOp::GE, lhs - rhs, label);
}

Constraint Constraint::sos_le(const Polynomial& lhs, const Polynomial& rhs,
                              const std::string& label) {
  return Constraint(ConstraintKind::SOS, RelOp::LE, rhs - lhs, label);
}

Constraint Constraint::eq(const Polynomial& lhs, const Polynomial& rhs,
                          const std::string& label) {
  return Constraint(ConstraintKind::EQ, RelOp::EQ, lhs - rhs, label);
}

std::string Constraint::str() const {
  return one_side_.str() + (kind_ == ConstraintKind::SOS ? " >= 0" : " == 0");
}

}  // namespace sos
