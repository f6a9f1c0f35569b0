#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "infodiag/discrete_system.hpp"
#include "infodiag/value_group.hpp"
#include "infodiag/var_subset.hpp"

namespace infodiag {

enum class Functional { Entropy, KullbackLeibler, CrossEntropy };
enum class LogBase { Two, E };

std::string functional_name(Functional f);
/// Accepts "entropy", "kl", "ce".
Functional parse_functional(const std::string& text);

struct SliceOptions {
  LogBase base = LogBase::Two;
  Tolerance tolerance{};
};

/// Real-valued evaluator of X_J.F(X_S) at the system's fixed (P || Q).
///
/// Each value is computed from its definition, sum_j P(j) f(P|_{X_J=j}),
/// and never as a difference of joint terms.
class SliceBackend {
 public:
  using group_type = RealValues;

  /// Copies the system. KL and cross-entropy need a reference distribution Q.
  SliceBackend(DiscreteSystem system, Functional functional, SliceOptions options = {});

  const RealValues& values() const { return values_; }
  int variable_count() const { return system_->variable_count(); }
  std::string name() const { return functional_name(functional_); }
  Functional functional() const { return functional_; }
  const DiscreteSystem& system() const { return *system_; }
  LogBase base() const { return options_.base; }

  double evaluate(VarSubset j, VarSubset s) const;

 private:
  std::shared_ptr<const OutcomeClasses> classes(VarSubset s) const;
  double log(double x) const;

  std::shared_ptr<const DiscreteSystem> system_;
  Functional functional_;
  SliceOptions options_;
  RealValues values_;
  struct ClassCache {
    std::mutex mutex;
    std::vector<std::shared_ptr<const OutcomeClasses>> slots;
  };
  std::shared_ptr<ClassCache> cache_;
};

/// X_J.H(X_S) under P.
double entropy_value(const DiscreteSystem& system, VarSubset j, VarSubset s, LogBase base = LogBase::Two);
/// X_J.KL(X_S) at (P || Q).
double kl_value(const DiscreteSystem& system, VarSubset j, VarSubset s, LogBase base = LogBase::Two);
/// X_J.CE(X_S) at (P || Q).
double ce_value(const DiscreteSystem& system, VarSubset j, VarSubset s, LogBase base = LogBase::Two);

}  // namespace infodiag
