#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gplp/algebra/success_function.hpp"
#include "gplp/front/program.hpp"

namespace gplp {

enum class StepKind { Success, PCR, MSW, CONS, ARITH, COMPARE, UNIFY };

const char* step_name(StepKind kind);

/// One goal of a symbolic derivation tree. PCR nodes have one child per
/// matching clause; other steps have exactly one child.
struct DerivationNode {
  std::vector<BodyItem> goal;
  StepKind step = StepKind::Success;
  std::vector<DerivationNode> children;
  /// Unifier used to reach each child (PCR, ARITH, UNIFY).
  std::vector<Substitution> bindings;
  std::vector<int> clause_ids;
  /// CONS: the row `form = 0`; empty when the constraint was ground.
  std::optional<LinearForm> constraint;
  /// MSW: the selected item.
  std::optional<MswItem> msw;
  bool continuous_outcome = false;
  /// Derivation variables, sorted.
  std::vector<std::string> vc;
  std::vector<std::string> vd;
  int depth = 0;

  std::vector<std::string> variables() const;
};

struct DeriveOptions {
  int depth_limit = 10000;
  /// Variables that must not be bound to non-ground structures.
  std::vector<std::string> protected_vars;
};

struct DeriveStats {
  int successes = 0;
  int max_depth = 0;
  std::vector<std::string> diagnostics;
};

/// All successful symbolic derivations of `goal`; nullopt when none.
/// Throws DerivationError on depth overflow, non-ground arithmetic or
/// undeclared switches.
std::optional<DerivationNode> derive(const Program& program,
                                     const std::vector<BodyItem>& goal,
                                     const DeriveOptions& options,
                                     DeriveStats* stats = nullptr);

using NodeVisitor =
    std::function<void(const DerivationNode&, const SuccessFunction&)>;

/// Bottom-up success function of `node`. `visit` sees every node together
/// with its success function.
SuccessFunction success_function(const Program& program,
                                 const DerivationNode& node,
                                 OpStats* stats = nullptr,
                                 const NodeVisitor& visit = {});

/// Success function of a single msw item, without the rest of the goal.
SuccessFunction msw_success_function(const Program& program,
                                     const MswItem& item);

/// Value a ground term takes inside a delta.
DeltaValue delta_value(const Term& ground);

}  // namespace gplp
