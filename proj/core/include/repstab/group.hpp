#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace repstab {

/// Group elements are dense indices 0..order-1; the identity is always 0.
using Element = std::uint32_t;

/// Largest order accepted from the built-in constructors.
inline constexpr std::size_t kMaxBuiltinOrder = 5040;
/// Largest order accepted from table files (validated exhaustively).
inline constexpr std::size_t kMaxTableOrder = 512;
/// Groups up to this order get an exhaustive associativity check.
inline constexpr std::size_t kAssociativityCheckOrder = 512;

/// A finite group stored as a validated Cayley table.
///
/// Immutable after construction. Instances are normally shared through
/// `GroupPtr` because matrix-valued functions, irrep tables and Fourier
/// coefficients all refer back to the group they live on.
class FiniteGroup {
 public:
  /// Validates closure, identity, inverses and (for small orders)
  /// associativity, then relabels elements so the identity is index 0.
  /// `spec` is the canonical spec string used when serializing functions.
  static FiniteGroup from_table(std::vector<std::vector<Element>> cayley,
                                std::string name, std::string spec);

  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return 0; }
  const std::string& name() const noexcept { return name_; }
  const std::string& spec() const noexcept { return spec_; }

  Element mul(Element a, Element b) const {
    return table_[static_cast<std::size_t>(a) * order_ + b];
  }
  Element inverse(Element a) const { return inverses_[a]; }

  /// Smallest k >= 1 with a^k = e.
  std::size_t element_order(Element a) const;

  /// True iff both groups have identical Cayley tables.
  bool same_table(const FiniteGroup& other) const noexcept {
    return order_ == other.order_ && table_ == other.table_;
  }

  /// Exhaustive associativity check, O(order^3).
  bool is_associative() const;

  /// The unique w with x y^{-1} z w^{-1} = e, i.e. w = x y^{-1} z.
  Element quadruple_closure(Element x, Element y, Element z) const {
    return mul(mul(x, inverses_[y]), z);
  }

  /// Calls `fn(x, y, z, w)` for all order^3 quadruples with
  /// x y^{-1} z w^{-1} = e, in lexicographic (x, y, z) order.
  template <typename Fn>
  void for_each_quadruple(Fn&& fn) const {
    const auto n = static_cast<Element>(order_);
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        const Element xy = mul(x, inverses_[y]);
        for (Element z = 0; z < n; ++z) {
          fn(x, y, z, mul(xy, z));
        }
      }
    }
  }

 private:
  FiniteGroup() = default;

  std::size_t order_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverses_;
  std::string name_;
  std::string spec_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Parsed form of the group spec grammar:
///   cyclic:<n> | dihedral:<n> | symmetric:<n> | quaternion
///   | product(<spec>,<spec>) | table:<path>
struct GroupSpec {
  enum class Kind { kCyclic, kDihedral, kSymmetric, kQuaternion, kProduct, kTable };

  Kind kind = Kind::kCyclic;
  std::size_t parameter = 0;  // n for cyclic/dihedral/symmetric
  std::string path;           // table files
  std::vector<GroupSpec> factors;

  static GroupSpec parse(std::string_view text);
  std::string to_string() const;
};

GroupPtr build_group(const GroupSpec& spec);
GroupPtr build_group(std::string_view spec);

GroupPtr cyclic_group(std::size_t n);
/// Symmetries of the regular n-gon; order 2n.
GroupPtr dihedral_group(std::size_t n);
/// Permutations of n points, n <= 7.
GroupPtr symmetric_group(std::size_t n);
GroupPtr quaternion_group();
GroupPtr direct_product(const FiniteGroup& g, const FiniteGroup& h);
/// Reads "order" on the first line followed by `order` rows of the table.
GroupPtr load_group_table(const std::string& path);

}  // namespace repstab
