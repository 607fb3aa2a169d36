#include "soskit/demos.hpp"

#include <cstdio>

#include "soskit/polynomial.hpp"

namespace sos {

namespace {

const char* kSostest = R"json({
  "vars": ["x1", "x2"],
  "constraints": [
    {
      "lhs": "2*x1^4 + 2*x1^3*x2 - x1^2*x2^2 + 5*x2^4",
      "rel": ">=",
      "rhs": "0",
      "label": "quartic test polynomial"
    }
  ]
}
)json";

const char* kLyapunov = R"json({
  "vars": ["x1", "x2"],
  "decvars": ["c1", "c2", "c3"],
  "constraints": [
    {
      "lhs": "c1*x1^2 + c2*x1*x2 + c3*x2^2",
      "rel": ">=",
      "rhs": "0.1*x1^2 + 0.1*x2^2",
      "label": "V positive definite"
    },
    {
      "lhs": "(2*c1*x1 + c2*x2)*(-x1^3 - x2) + (c2*x1 + 2*c3*x2)*(x1 - x2^3)",
      "rel": "<=",
      "rhs": "0",
      "label": "Vdot nonpositive"
    }
  ]
}
)json";

const char* kCopositivity = R"json({
  "vars": ["x1", "x2", "x3"],
  "constraints": [
    {
      "lhs": "x1^4 + x2^4 + x3^4 + 4*x1^2*x2^2 + 4*x2^2*x3^2",
      "rel": ">=",
      "rhs": "0",
      "label": "y'My with y_i = x_i^2"
    }
  ]
}
)json";

const char* kGoldsteinPrice = R"json({
  "vars": ["x1", "x2"],
  "decvars": ["gamma"],
  "objective": "-gamma",
  "options": {"scaling": true},
  "constraints": [
    {
      "lhs": "(1 + (x1 + x2 + 1)^2*(19 - 14*x1 + 3*x1^2 - 14*x2 + 6*x1*x2 + 3*x2^2)) * (30 + (2*x1 - 3*x2)^2*(18 - 32*x1 + 12*x1^2 + 48*x2 - 36*x1*x2 + 27*x2^2))",
      "rel": ">=",
      "rhs": "gamma",
      "label": "GP(x) - gamma is SOS"
    }
  ]
}
)json";

const char* kLp = R"json({
  "vars": [],
  "decvars": ["d1"],
  "objective": "d1",
  "constraints": [
    {
      "lhs": "d1 - 2",
      "rel": ">=",
      "rhs": "0",
      "label": "lower bound"
    },
    {
      "lhs": "5 - d1",
      "rel": ">=",
      "rhs": "0",
      "label": "upper bound"
    }
  ]
}
)json";

const char* kEq = R"json({
  "vars": ["x1"],
  "decvars": ["d1", "d2"],
  "objective": "d1 + d2",
  "constraints": [
    {
      "lhs": "d2",
      "rel": "==",
      "rhs": "8",
      "label": "pin d2"
    },
    {
      "lhs": "d1*x1^2 - 5*x1^2",
      "rel": ">=",
      "rhs": "0",
      "label": "d1 at least 5"
    }
  ]
}
)json";

const char* kVdpRoa = R"json({
  "vars": ["x1", "x2"],
  "gsos": {"t": "t"},
  "constraints": [
    {
      "lhs": "s_1 + s_2*x1 + s_3*x2 + s_4*x1^2 + s_5*x1*x2 + s_6*x2^2",
      "rel": ">=",
      "rhs": "0",
      "label": "multiplier"
    },
    {
      "lhs": "t*(s_1 + s_2*x1 + s_3*x2 + s_4*x1^2 + s_5*x1*x2 + s_6*x2^2) + (1.5*x1^2 - x1*x2 + x2^2)*(s_1 + s_2*x1 + s_3*x2 + s_4*x1^2 + s_5*x1*x2 + s_6*x2^2) - ((3*x1 - x2)*(-x2) + (-x1 + 2*x2)*(x1 + (x1^2 - 1)*x2)) - 0.001*x1^2 - 0.001*x2^2",
      "rel": ">=",
      "rhs": "0",
      "label": "containment"
    }
  ]
}
)json";

const char* kPcontainCircle = R"json({
  "vars": ["x1", "x2"],
  "gsos": {"t": "t"},
  "constraints": [
    {
      "lhs": "s_1 + s_2*x1 + s_3*x2 + s_4*x1^2 + s_5*x1*x2 + s_6*x2^2 + s_7*x1^3 + s_8*x1^2*x2 + s_9*x1*x2^2 + s_10*x2^3 + s_11*x1^4 + s_12*x1^3*x2 + s_13*x1^2*x2^2 + s_14*x1*x2^3 + s_15*x2^4",
      "rel": ">=",
      "rhs": "0",
      "label": "multiplier"
    },
    {
      "lhs": "t*(s_1 + s_2*x1 + s_3*x2 + s_4*x1^2 + s_5*x1*x2 + s_6*x2^2 + s_7*x1^3 + s_8*x1^2*x2 + s_9*x1*x2^2 + s_10*x2^3 + s_11*x1^4 + s_12*x1^3*x2 + s_13*x1^2*x2^2 + s_14*x1*x2^3 + s_15*x2^4) + (x1^2 + x2^2)*(s_1 + s_2*x1 + s_3*x2 + s_4*x1^2 + s_5*x1*x2 + s_6*x2^2 + s_7*x1^3 + s_8*x1^2*x2 + s_9*x1*x2^2 + s_10*x2^3 + s_11*x1^4 + s_12*x1^3*x2 + s_13*x1^2*x2^2 + s_14*x1*x2^3 + s_15*x2^4) - (x1^6 + x2^6 + 4*x1^2*x2^2 - 1)",
      "rel": ">=",
      "rhs": "0",
      "label": "containment"
    }
  ]
}
)json";

const char* kMotzkin = R"json({
  "vars": ["x1", "x2"],
  "constraints": [
    {
      "lhs": "x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1",
      "rel": ">=",
      "rhs": "0",
      "label": "Motzkin polynomial"
    }
  ]
}
)json";

}  // namespace

const std::vector<Demo>& demo_catalog() {
  static const std::vector<Demo> demos = {
      {"sostest", "sostest.json", true,
       "certify 2*x1^4 + 2*x1^3*x2 - x1^2*x2^2 + 5*x2^4 as a sum of squares",
       kSostest},
      {"lyapunov", "lyapunov.json", false,
       "find a quadratic Lyapunov function for a cubic planar system",
       kLyapunov},
      {"copositivity", "copositivity.json", true,
       "certify a matrix copositive via y'My with y_i = x_i^2", kCopositivity},
      {"goldstein-price", "goldstein-price.json", false,
       "certified global lower bound for the Goldstein-Price function",
       kGoldsteinPrice},
      {"lp", "lp.json", false,
       "scalar linear program posed as SOS constraints", kLp},
      {"eq", "eq.json", false,
       "mix of an equality constraint and an SOS constraint", kEq},
      {"vdp-roa", "vdp-roa.json", false,
       "region-of-attraction level set for the reversed Van der Pol system",
       kVdpRoa},
      {"pcontain-circle", "pcontain-circle.json", false,
       "largest disk x1^2 + x2^2 <= beta inside a sextic sublevel set",
       kPcontainCircle},
  };
  return demos;
}

const Demo* find_demo(const std::string& name) {
  for (const Demo& d : demo_catalog()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const std::vector<std::pair<std::string, std::string>>& extra_problem_files() {
  static const std::vector<std::pair<std::string, std::string>> files = {
      {"motzkin.json", kMotzkin},
  };
  return files;
}

std::string demo_headline(const Demo& demo, const ReportDocument& doc) {
  if (!doc.feas) {
    if (demo.name == "sostest" || demo.name == "copositivity")
      return "verdict: no sum-of-squares certificate exists";
    return "verdict: infeasible";
  }
  if (demo.name == "sostest")
    return "verdict: the polynomial is a sum of squares";
  if (demo.name == "copositivity")
    return "verdict: the matrix is copositive";
  if (demo.name == "goldstein-price")
    return "certified global lower bound: " + format_double(-doc.obj);
  if (demo.name == "lp" || demo.name == "eq")
    return "optimal objective: " + format_double(doc.obj);
  if (demo.name == "vdp-roa" && doc.tbnds)
    return "certified region of attraction: V(x) < " +
           format_double(-doc.tbnds->second) + " (V = 1.5*x1^2 - x1*x2 + x2^2)";
  if (demo.name == "pcontain-circle" && doc.tbnds)
    return "largest certified disk: x1^2 + x2^2 <= beta with beta in [" +
           format_double(-doc.tbnds->second) + ", " +
           format_double(-doc.tbnds->first) + "]";
  if (demo.name == "lyapunov") return "found a certified Lyapunov function";
  return "feasible";
}

}  // namespace sos
