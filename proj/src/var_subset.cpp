#include "infodiag/var_subset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace infodiag {

namespace {

void check_index(int index) {
  if (index < 1 || index > kHardMaxVariables) {
    throw ArgumentError("variable index " + std::to_string(index) + " outside 1.." +
                        std::to_string(kHardMaxVariables));
  }
}

}  // namespace

VarSubset::VarSubset(std::initializer_list<int> indices) {
  for (int i : indices) {
    check_index(i);
    bits_ |= std::uint32_t{1} << (i - 1);
  }
}

VarSubset VarSubset::from_indices(const std::vector<int>& indices) {
  VarSubset out;
  for (int i : indices) {
    check_index(i);
    out |= singleton(i);
  }
  return out;
}

std::vector<int> VarSubset::indices() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::vector<VarSubset> VarSubset::singletons() const {
  std::vector<VarSubset> out;
  out.reserve(size());
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.emplace_back(b & (~b + 1));
  return out;
}

std::string VarSubset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

std::string VarSubset::label() const {
  const auto idx = indices();
  const bool compact = std::all_of(idx.begin(), idx.end(), [](int i) { return i <= 9; });
  std::string out;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (!compact && k > 0) out += ',';
    out += std::to_string(idx[k]);
  }
  return out;
}

void check_variable_count(int n, int max_n) {
  if (max_n > kHardMaxVariables) {
    throw SizeError("configured variable cap " + std::to_string(max_n) + " exceeds hard limit " +
                    std::to_string(kHardMaxVariables));
  }
  if (n < 1 || n > max_n) {
    throw SizeError("variable count " + std::to_string(n) + " outside 1.." + std::to_string(max_n));
  }
}

VarSubset parse_var_subset(const std::string& text) {
  std::string body;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) body += c;
  }
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') throw ArgumentError("unbalanced braces in subset '" + text + "'");
    body = body.substr(1, body.size() - 2);
  }
  if (body.empty() || body == "-") return {};

  VarSubset out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = std::min(body.find(',', pos), body.size());
    const std::string token = body.substr(pos, comma - pos);
    int value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      throw ArgumentError("malformed index '" + token + "' in subset '" + text + "'");
    }
    check_index(value);
    out |= VarSubset::singleton(value);
    pos = comma + 1;
  }
  return out;
}

Atom::Atom(VarSubset index_set) : set_(index_set) {
  if (index_set.empty()) throw ArgumentError("atoms are indexed by nonempty sets");
}

AtomSet normalize(AtomSet atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

bool contains(const AtomSet& atoms, const Atom& atom) {
  return std::binary_search(atoms.begin(), atoms.end(), atom);
}

std::vector<VarSubset> nonempty_subsets(VarSubset base) {
  std::vector<VarSubset> out;
  out.reserve((std::size_t{1} << base.size()) - 1);
  // Ascending enumeration of submasks.
  const std::uint32_t b = base.bits();
  std::uint32_t sub = 0;
  do {
    sub = (sub - b) & b;
    if (sub != 0) out.emplace_back(sub);
  } while (sub != 0);
  return out;
}

std::vector<VarSubset> all_subsets(VarSubset base) {
  std::vector<VarSubset> out{VarSubset{}};
  auto rest = nonempty_subsets(base);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace infodiag
