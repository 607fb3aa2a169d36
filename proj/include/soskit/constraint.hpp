#pragma once

#include <string>

#include "soskit/polynomial.hpp"

namespace sos {

enum class RelOp { GE, LE, EQ };
enum class ConstraintKind { SOS, EQ };

std::string rel_op_str(RelOp op);

// A constraint normalized to "one_side in SOS" (for sos_ge/sos_le) or
// "one_side == 0" (for eq). sos_ge(p, q) keeps p - q, sos_le(p, q) keeps
// q - p, eq(p, q) keeps p - q.
class Constraint {
 public:
  static Constraint sos_ge(const Polynomial& lhs, const Polynomial& rhs,
                           const std::string& label = "");
  static Constraint sos_le(const Polynomial& lhs, const Polynomial& rhs,
                           const std::string& label = "");
  static Constraint eq(const Polynomial& lhs, const Polynomial& rhs,
                       const std::string& label = "");

  ConstraintKind kind() const { return kind_; }
  RelOp rel_op() const { return rel_; }
  const Polynomial& one_side() const { return one_side_; }
  const std::string& label() const { return label_; }

  // "<one_side> >= 0" for SOS constraints, "<one_side> == 0" for equalities
  std::string str() const;

 private:
  Constraint(ConstraintKind kind, RelOp rel, Polynomial one_side,
             std::string label)
      : kind_(kind), rel_(rel), one_side_(std::move(one_side)),
        label_(std::move(label)) {}

  ConstraintKind kind_;
  RelOp rel_;
  Polynomial one_side_;
  std::string label_;
};

}  // namespace sos
