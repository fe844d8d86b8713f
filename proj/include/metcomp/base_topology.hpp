#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metcomp/errors.hpp"
#include "metcomp/rational.hpp"

namespace metcomp {

/// A point of the base space Y. Text ids for finite bases and the
/// one-point space, exact rationals for the rational order topology.
using BasePoint = std::variant<std::string, Rational>;

std::string to_string(const BasePoint& y);

/// Y given by a finite point set and a finite basis. Basis members are
/// kept sorted so that set equality is list equality.
struct FiniteBase {
  std::vector<std::string> points;
  std::vector<std::vector<std::string>> basis;

  /// Canonicalizes basis members. Throws InputError on duplicate point ids
  /// or basis members that are not points.
  static FiniteBase make(std::vector<std::string> points, std::vector<std::vector<std::string>> basis);

  std::optional<std::size_t> index_of(const std::string& id) const;
};

struct BasisSet {
  std::size_t index = 0;
  std::vector<std::string> members;
  friend bool operator==(const BasisSet&, const BasisSet&) = default;
};
struct WholeSpace {
  friend bool operator==(const WholeSpace&, const WholeSpace&) = default;
};
/// Open interval (lo, hi); empty when lo ≥ hi.
struct OpenInterval {
  Rational lo;
  Rational hi;
  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

using BasicOpen = std::variant<BasisSet, WholeSpace, OpenInterval>;

bool contains(const BasicOpen& open, const BasePoint& y);
std::string to_string(const BasicOpen& open);

enum class EnumeratedKind { one_point, rational_order };

/// Countably-based builtin spaces with an explicit enumeration of basic
/// opens.
class EnumeratedBase {
 public:
  static EnumeratedBase one_point(std::string name = "*");
  static EnumeratedBase rational_order();

  EnumeratedKind kind() const { return kind_; }
  const std::string& point_name() const { return name_; }
  bool has_point(const BasePoint& y) const;

  /// k-th basic open. one_point: always the whole space. rational_order:
  /// k is split by the Cantor pairing into (i, j) and the interval spans
  /// the i-th and j-th rationals of a fixed enumeration of ℚ.
  BasicOpen basic_open(Index k) const;

 private:
  EnumeratedKind kind_ = EnumeratedKind::one_point;
  std::string name_;
};

class BaseSpace {
 public:
  BaseSpace(FiniteBase b) : rep_(std::move(b)) {}      // NOLINT(google-explicit-constructor)
  BaseSpace(EnumeratedBase b) : rep_(std::move(b)) {}  // NOLINT(google-explicit-constructor)

  bool is_finite() const { return std::holds_alternative<FiniteBase>(rep_); }
  const FiniteBase* finite() const { return std::get_if<FiniteBase>(&rep_); }
  const EnumeratedBase* enumerated() const { return std::get_if<EnumeratedBase>(&rep_); }

  bool has_point(const BasePoint& y) const;
  /// Throws InputError if y is not a point of this space.
  void require_point(const BasePoint& y) const;

  /// Finite bases: every basis set containing y in input order.
  /// Enumerated bases: the basic opens among the first `budget` enumerated
  /// ones that contain y.
  std::vector<BasicOpen> neighborhood_basis(const BasePoint& y, Index budget = 64) const;

  /// Whether `open` is one of this space's basic opens.
  bool is_basic_open(const BasicOpen& open) const;

 private:
  std::variant<FiniteBase, EnumeratedBase> rep_;
};

ValidationReport validate_basis(const FiniteBase& b);

/// Every union of basis sets, deduplicated and sorted, including ∅.
std::vector<std::vector<std::string>> all_opens_finite(const FiniteBase& b);

/// Bijection ℕ → ℚ: 0, then Calkin–Wilf positives interleaved with their
/// negatives.
Rational enumerate_rational(Index i);

/// Inverse Cantor pairing.
std::pair<Index, Index> cantor_unpair(Index k);

}  // namespace metcomp
