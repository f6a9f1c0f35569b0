#include "infodiag/abstract_model.hpp"

#include <algorithm>

#include "infodiag/errors.hpp"

namespace infodiag {

namespace {

std::string pair_text(int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

}  // namespace

FiniteMonoid::FiniteMonoid(std::vector<std::vector<int>> table, int identity)
    : table_(std::move(table)), identity_(identity) {
  const int m = size();
  if (m == 0) throw ArgumentError("monoid table is empty");
  if (m > kMaxMonoidSize) throw SizeError("monoid has " + std::to_string(m) + " elements, cap is " + std::to_string(kMaxMonoidSize));
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != m) throw ArgumentError("monoid table is not square");
    for (int v : row) {
      if (v < 0 || v >= m) throw ArgumentError("monoid table entry " + std::to_string(v) + " out of range");
    }
  }
  if (identity_ < 0 || identity_ >= m) throw ArgumentError("identity index out of range");
  for (int a = 0; a < m; ++a) {
    if (table_[identity_][a] != a) throw ArgumentError("element " + std::to_string(identity_) + " is not an identity");
    if (table_[a][a] != a) throw ArgumentError("element " + std::to_string(a) + " is not idempotent");
    for (int b = 0; b < m; ++b) {
      if (table_[a][b] != table_[b][a]) throw ArgumentError("multiplication is not commutative at " + pair_text(a, b));
      for (int c = 0; c < m; ++c) {
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
          throw ArgumentError("multiplication is not associative at " + pair_text(a, b) + "," + std::to_string(c));
        }
      }
    }
  }
}

FiniteMonoid FiniteMonoid::subsets(int n) {
  if (n < 0 || (1 << n) > kMaxMonoidSize) throw SizeError("subset monoid too large");
  const int m = 1 << n;
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) table[a][b] = a | b;
  }
  return FiniteMonoid(std::move(table), 0);
}

std::optional<int> top_element(const FiniteMonoid& monoid) {
  for (int t = 0; t < monoid.size(); ++t) {
    bool absorbs = true;
    for (int y = 0; y < monoid.size() && absorbs; ++y) absorbs = monoid.multiply(y, t) == t;
    if (absorbs) return t;
  }
  return std::nullopt;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> factors) : factors_(std::move(factors)) {
  for (int k : factors_) {
    if (k < 2) throw ArgumentError("cyclic factors must have order at least 2");
    order_ *= k;
    if (order_ > kMaxGroupOrder) throw SizeError("group order exceeds " + std::to_string(kMaxGroupOrder));
  }
}

std::vector<int> FiniteAbelianGroup::digits(int a) const {
  if (a < 0 || a >= order_) throw ArgumentError("group element " + std::to_string(a) + " out of range");
  std::vector<int> out(factors_.size());
  for (int k = static_cast<int>(factors_.size()) - 1; k >= 0; --k) {
    out[k] = a % factors_[k];
    a /= factors_[k];
  }
  return out;
}

int FiniteAbelianGroup::from_digits(const std::vector<int>& d) const {
  if (d.size() != factors_.size()) throw ArgumentError("wrong number of group coordinates");
  int out = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    out = out * factors_[k] + ((d[k] % factors_[k]) + factors_[k]) % factors_[k];
  }
  return out;
}

int FiniteAbelianGroup::add(int a, int b) const {
  if (factors_.size() == 1) return (a + b) % order_;
  auto da = digits(a);
  const auto db = digits(b);
  for (std::size_t k = 0; k < da.size(); ++k) da[k] = (da[k] + db[k]) % factors_[k];
  return from_digits(da);
}

int FiniteAbelianGroup::negate(int a) const {
  if (factors_.size() == 1) return (order_ - a) % order_;
  auto da = digits(a);
  for (std::size_t k = 0; k < da.size(); ++k) da[k] = (factors_[k] - da[k]) % factors_[k];
  return from_digits(da);
}

std::string FiniteAbelianGroup::format(int a) const {
  if (factors_.size() <= 1) return std::to_string(a);
  std::string out = "(";
  const auto d = digits(a);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(d[k]);
  }
  return out + ")";
}

MonoidModel::MonoidModel(FiniteMonoid monoid, FiniteAbelianGroup group, std::vector<std::vector<int>> action)
    : monoid_(std::move(monoid)), group_(std::move(group)), action_(std::move(action)) {
  const int m = monoid_.size();
  const int order = group_.order();
  if (static_cast<int>(action_.size()) != m) throw ArgumentError("action table needs one row per monoid element");
  for (const auto& row : action_) {
    if (static_cast<int>(row.size()) != order) throw ArgumentError("action table row has wrong length");
    for (int v : row) {
      if (v < 0 || v >= order) throw ArgumentError("action table entry " + std::to_string(v) + " out of range");
    }
  }
  for (int g = 0; g < order; ++g) {
    if (action_[monoid_.identity()][g] != g) throw ArgumentError("identity does not act trivially on " + std::to_string(g));
  }
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      for (int g = 0; g < order; ++g) {
        if (action_[monoid_.multiply(x, y)][g] != action_[x][action_[y][g]]) {
          throw ArgumentError("action is not compatible with the product at " + pair_text(x, y) + " on " + std::to_string(g));
        }
      }
    }
    for (int g = 0; g < order; ++g) {
      for (int h = 0; h < order; ++h) {
        if (action_[x][group_.add(g, h)] != group_.add(action_[x][g], action_[x][h])) {
          throw ArgumentError("element " + std::to_string(x) + " does not act additively at " + pair_text(g, h));
        }
      }
    }
  }
}

bool satisfies_chain_rule(const MonoidModel& model, const std::vector<int>& values) {
  const int m = model.monoid().size();
  if (static_cast<int>(values.size()) != m) return false;
  const auto& g = model.group();
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      if (values[model.monoid().multiply(x, y)] != g.add(values[x], model.act(x, values[y]))) return false;
    }
  }
  return true;
}

Cocycle::Cocycle(const MonoidModel& model, std::vector<int> values) : values_(std::move(values)) {
  const int m = model.monoid().size();
  if (static_cast<int>(values_.size()) != m) throw ArgumentError("cocycle needs one value per monoid element");
  for (int v : values_) {
    if (v < 0 || v >= model.group().order()) throw ArgumentError("cocycle value " + std::to_string(v) + " out of range");
  }
  const auto& g = model.group();
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      if (values_[model.monoid().multiply(x, y)] != g.add(values_[x], model.act(x, values_[y]))) {
        throw ArgumentError("chain rule fails at " + pair_text(x, y));
      }
    }
  }
}

namespace {

int require_top(const MonoidModel& model) {
  const auto top = top_element(model.monoid());
  if (!top) throw UnsupportedModelError("monoid has no top element");
  return *top;
}

}  // namespace

Cocycle psi(const MonoidModel& model, int g) {
  const int top = require_top(model);
  if (g < 0 || g >= model.group().order()) throw ArgumentError("group element " + std::to_string(g) + " out of range");
  if (model.act(top, g) != 0) throw ArgumentError("element " + model.group().format(g) + " is not annihilated by the top element");
  std::vector<int> values(model.monoid().size());
  for (int x = 0; x < model.monoid().size(); ++x) values[x] = model.group().subtract(g, model.act(x, g));
  return Cocycle(model, std::move(values));
}

int phi(const MonoidModel& model, const Cocycle& f) { return f(require_top(model)); }

std::vector<int> annihilated_by_top(const MonoidModel& model) {
  const int top = require_top(model);
  std::vector<int> out;
  for (int g = 0; g < model.group().order(); ++g) {
    if (model.act(top, g) == 0) out.push_back(g);
  }
  return out;
}

std::vector<Cocycle> enumerate_cocycles(const MonoidModel& model) {
  std::vector<Cocycle> out;
  for (int g : annihilated_by_top(model)) out.push_back(psi(model, g));
  return out;
}

AbstractSystem torsion_model() {
  // Index 0 is the number 1 (identity), index 1 is the number 0.
  FiniteMonoid monoid({{0, 1}, {1, 1}}, 0);
  FiniteAbelianGroup group({2});
  MonoidModel model(std::move(monoid), std::move(group), {{0, 1}, {0, 0}});
  Cocycle f = psi(model, 1);
  return AbstractSystem{std::move(model), {1, 1, 1}, std::move(f)};
}

AbstractBackend::AbstractBackend(AbstractSystem system) : system_(std::move(system)), values_(system_.model.group()) {
  const int n = static_cast<int>(system_.variables.size());
  check_variable_count(n);
  for (int x : system_.variables) {
    if (x < 0 || x >= system_.model.monoid().size()) throw ArgumentError("variable element " + std::to_string(x) + " out of range");
  }
  const auto& m = system_.model.monoid();
  products_.assign(std::size_t{1} << n, m.identity());
  for (std::uint32_t s = 1; s < products_.size(); ++s) {
    const int low = std::countr_zero(s);
    products_[s] = m.multiply(products_[s & (s - 1)], system_.variables[low]);
  }
}

int AbstractBackend::evaluate(VarSubset j, VarSubset s) const {
  if (!j.fits(variable_count()) || !s.fits(variable_count())) throw ArgumentError("variable set out of range");
  return system_.model.act(product(j), system_.cocycle(product(s)));
}

std::vector<int> AbstractBackend::generated_submonoid() const {
  std::vector<int> out(products_.begin(), products_.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace infodiag
