#include "infodiag/diagram.hpp"

#include <charconv>
#include <sstream>

namespace infodiag {

std::string RealValues::format(double v) const {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

AtomSet enumerate_atoms(int n, int max_n) {
  check_variable_count(n, max_n);
  AtomSet out;
  const std::uint32_t count = (std::uint32_t{1} << n) - 1;
  out.reserve(count);
  for (std::uint32_t bits = 1; bits <= count; ++bits) out.emplace_back(VarSubset(bits));
  return out;
}

AtomSet region(int n, std::span<const VarSubset> parts, VarSubset conditioning) {
  check_variable_count(n, kHardMaxVariables);
  if (!conditioning.fits(n)) throw ArgumentError("conditioning set " + conditioning.to_string() + " out of range");
  for (auto p : parts) {
    if (!p.fits(n)) throw ArgumentError("set " + p.to_string() + " out of range");
  }
  AtomSet out;
  const VarSubset free = conditioning.complement(n);
  // Every candidate W lies inside the complement of J.
  for (VarSubset w : nonempty_subsets(free)) {
    bool meets_all = true;
    for (auto p : parts) {
      if (w.disjoint(p)) {
        meets_all = false;
        break;
      }
    }
    if (meets_all) out.emplace_back(w);
  }
  return out;
}

ConditionalPartition::ConditionalPartition(int n, VarSubset conditioning, std::vector<VarSubset> parts)
    : n_(n), conditioning_(conditioning), parts_(std::move(parts)) {
  check_variable_count(n_, kHardMaxVariables);
  VarSubset seen = conditioning_;
  if (!conditioning_.fits(n_)) throw ArgumentError("conditioning set " + conditioning_.to_string() + " out of range");
  for (auto p : parts_) {
    if (!p.fits(n_)) throw ArgumentError("part " + p.to_string() + " out of range");
    if (!p.disjoint(seen)) throw ArgumentError("part " + p.to_string() + " overlaps earlier sets");
    seen |= p;
  }
  if (seen != VarSubset::full(n_)) {
    throw ArgumentError("conditional partition misses " + (VarSubset::full(n_) - seen).to_string());
  }
}

VarSubset ConditionalPartition::covered() const {
  VarSubset out;
  for (auto p : parts_) out |= p;
  return out;
}

std::string ConditionalPartition::to_string() const {
  std::ostringstream os;
  os << "(J=" << conditioning_.to_string();
  for (auto p : parts_) os << ", " << p.to_string();
  os << ")";
  return os.str();
}

AtomSet fcmi_image(const ConditionalPartition& partition) {
  const auto& parts = partition.parts();
  const std::size_t q = parts.size();
  if (q < 2) throw ArgumentError("FCMI image needs at least two parts");
  if (q > 24) throw SizeError("too many parts in conditional partition");
  const VarSubset all_l = partition.covered();
  AtomSet out;
  for (std::uint32_t chosen = 1; chosen < (std::uint32_t{1} << q); ++chosen) {
    if (std::popcount(chosen) < 2) continue;
    std::vector<VarSubset> selected;
    VarSubset l_chosen;
    for (std::size_t i = 0; i < q; ++i) {
      if ((chosen >> i) & 1u) {
        selected.push_back(parts[i]);
        l_chosen |= parts[i];
      }
    }
    const VarSubset excluded = partition.conditioning() | (all_l - l_chosen);
    auto atoms = region(partition.n(), selected, excluded);
    out.insert(out.end(), atoms.begin(), atoms.end());
  }
  return normalize(std::move(out));
}

}  // namespace infodiag
