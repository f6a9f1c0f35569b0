#include "infodiag/slice_backend.hpp"

#include <cmath>

#include "infodiag/errors.hpp"

namespace infodiag {

namespace {

// Per-subset class tables are cached only while they stay small.
constexpr std::size_t kClassCacheBudget = std::size_t{1} << 24;

}  // namespace

std::string functional_name(Functional f) {
  switch (f) {
    case Functional::Entropy:
      return "entropy";
    case Functional::KullbackLeibler:
      return "kl";
    case Functional::CrossEntropy:
      return "ce";
  }
  return "unknown";
}

Functional parse_functional(const std::string& text) {
  if (text == "entropy") return Functional::Entropy;
  if (text == "kl") return Functional::KullbackLeibler;
  if (text == "ce") return Functional::CrossEntropy;
  throw ArgumentError("unknown functional '" + text + "' (expected entropy, kl or ce)");
}

SliceBackend::SliceBackend(DiscreteSystem system, Functional functional, SliceOptions options)
    : system_(std::make_shared<const DiscreteSystem>(std::move(system))),
      functional_(functional),
      options_(options),
      values_(options.tolerance),
      cache_(std::make_shared<ClassCache>()) {
  if (functional_ != Functional::Entropy && !system_->has_reference()) {
    throw ArgumentError(functional_name(functional_) + " needs a reference distribution Q");
  }
  const std::size_t subsets = std::size_t{1} << system_->variable_count();
  if (system_->variable_count() <= 20 && subsets * system_->outcome_count() <= kClassCacheBudget) {
    cache_->slots.resize(subsets);
  }
}

double SliceBackend::log(double x) const { return options_.base == LogBase::Two ? std::log2(x) : std::log(x); }

std::shared_ptr<const OutcomeClasses> SliceBackend::classes(VarSubset s) const {
  auto& slots = cache_->slots;
  if (slots.empty()) return std::make_shared<const OutcomeClasses>(system_->classes(s));
  {
    std::lock_guard lock(cache_->mutex);
    if (auto hit = slots[s.bits()]) return hit;
  }
  auto computed = std::make_shared<const OutcomeClasses>(system_->classes(s));
  std::lock_guard lock(cache_->mutex);
  if (!slots[s.bits()]) slots[s.bits()] = computed;
  return slots[s.bits()];
}

double SliceBackend::evaluate(VarSubset j, VarSubset s) const {
  const int n = system_->variable_count();
  if (!j.fits(n) || !s.fits(n)) throw ArgumentError("variable set out of range");
  // X_J.F(X_S) = X_J.F(X_{S\J}); nothing is left to measure once S is inside J.
  if (s.subset_of(j)) return 0.0;

  const auto cj = classes(j);
  const auto cjs = classes(j | s);
  const auto p_j = system_->class_masses(*cj, 0);
  const auto p_js = system_->class_masses(*cjs, 0);
  std::vector<double> q_j, q_js;
  if (functional_ != Functional::Entropy) {
    q_j = system_->class_masses(*cj, 1);
    q_js = system_->class_masses(*cjs, 1);
  }
  std::vector<int> parent(cjs->count, 0);
  for (std::size_t w = 0; w < system_->outcome_count(); ++w) parent[cjs->id[w]] = cj->id[w];

  std::vector<CompensatedSum> inner(cj->count);
  for (int c = 0; c < cjs->count; ++c) {
    const double pjs = p_js[c];
    if (pjs <= 0.0) continue;  // 0 log(...) = 0
    const int jc = parent[c];
    const double p_cond = pjs / p_j[jc];
    switch (functional_) {
      case Functional::Entropy:
        inner[jc].add(-p_cond * log(p_cond));
        break;
      case Functional::KullbackLeibler:
      case Functional::CrossEntropy: {
        if (q_js[c] <= 0.0) throw DomainError("P is not absolutely continuous w.r.t. Q on " + (j | s).to_string());
        const double q_cond = q_js[c] / q_j[jc];
        inner[jc].add(functional_ == Functional::KullbackLeibler ? p_cond * log(p_cond / q_cond)
                                                                   : -p_cond * log(q_cond));
        break;
      }
    }
  }
  CompensatedSum outer;
  for (int jc = 0; jc < cj->count; ++jc) {
    if (p_j[jc] > 0.0) outer.add(p_j[jc] * inner[jc].value());
  }
  return outer.value();
}

double entropy_value(const DiscreteSystem& system, VarSubset j, VarSubset s, LogBase base) {
  return SliceBackend(system, Functional::Entropy, {base, {}}).evaluate(j, s);
}

double kl_value(const DiscreteSystem& system, VarSubset j, VarSubset s, LogBase base) {
  return SliceBackend(system, Functional::KullbackLeibler, {base, {}}).evaluate(j, s);
}

double ce_value(const DiscreteSystem& system, VarSubset j, VarSubset s, LogBase base) {
  return SliceBackend(system, Functional::CrossEntropy, {base, {}}).evaluate(j, s);
}

}  // namespace infodiag
